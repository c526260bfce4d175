#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "painleve/compliant.hpp"

namespace painleve::canard {

struct CanardConfig {
  double chi = 0.1;           // half-width of the theta window around theta1
  double C_box = 10.0;        // y2 in [-C_box, 0]
  double varpi_w = 10.0;      // w2 in [-varpi_w, varpi_w]
  double entry_margin = 0.1;  // section at theta1 - entry_margin
  double bisect_tol = 1e-15;  // bracket width in seed phi
  std::vector<double> eps_list{1e-2, 3e-3, 1e-3, 3e-4};
  double bracket_spread = 0.05;  // initial half-width around m_ss at the section
  double backward_lead = 0.002;  // theta distance of the saddle seed beyond theta_far
  int manifold_order = 3;        // slow-manifold graph order used for seeding
  unsigned threads = 1;
  ode::IntegratorConfig ode = default_ode();

  static ode::IntegratorConfig default_ode() {
    ode::IntegratorConfig c;
    // constant steps keep the outcome a smooth function of the seed, so
    // bisection is limited by rounding only
    c.fixed_step = 0.02;
    c.max_steps = 20'000'000;
    c.dense = true;
    return c;
  }
  void validate() const;
};

enum class OutcomeKind { Liftoff, Plunge, ThroughBox };
const char* to_string(OutcomeKind k);

struct Outcome {
  OutcomeKind kind;
  CompliantState exit_state;
  double exit_time;
};

struct EntryPoint {
  CompliantState state;  // on theta = theta1 - entry_margin
  double seed_theta, seed_phi;
  double time_to_section;
  double fast_deviation;  // distance to the slow-manifold graph at the section
};

// Relaxation lead (in theta) used before the entry section.
double relaxation_lead(const ModelParams& prm, double eps, const CanardConfig& cfg);

// lead defaults to relaxation_lead().
EntryPoint attracting_entry_point(const ModelParams& prm, double eps, double phi_entry,
                                  const CanardConfig& cfg = {},
                                  std::optional<double> lead = std::nullopt);

Outcome outcome(const ModelParams& prm, double eps, const CompliantState& entry,
                const CanardConfig& cfg = {});

struct ShootResult {
  double phi_star;        // section phi of the returned orbit
  double bracket_width;   // section-phi distance between the final bracket ends
  double seed_lo, seed_hi;
  unsigned iterations;
  OutcomeKind orbit_kind;
  bool reached_box_end;   // orbit got to theta1 + chi
  double theta_reached;
  ode::Trajectory<4> orbit;  // from the seed, fast time
  // (y2, w2) separation of the two bracket orbits at theta1 + chi, when both get there
  std::optional<double> exit_separation;
};

ShootResult shoot(const ModelParams& prm, double eps, const CanardConfig& cfg = {});

struct BackwardOrbit {
  ode::Trajectory<4> orbit;  // backward in fast time from the seed
  CompliantState seed;
  double sigma;  // displacement along the forward-stable layer eigenvector
};

// Seeds on S_{r,eps} at theta_far + lead (phi from the singular canard unless
// given), bisects the forward-stable component and integrates backward until
// the orbit leaves the box.
BackwardOrbit saddle_backward_orbit(const ModelParams& prm, double eps, double theta_far,
                                    const CanardConfig& cfg = {},
                                    std::optional<double> lead = std::nullopt,
                                    std::optional<double> phi_seed = std::nullopt);

// Plain backward integration from an explicit state with the box events.
ode::Trajectory<4> backward_from(const ModelParams& prm, double eps, const CompliantState& s,
                                 const CanardConfig& cfg);

struct ConvergenceRow {
  double eps;
  double sup_distance;  // sup |phi - m_ss| over [theta1 - chi, theta1]
  double phi_star;
  double bracket_width;
};

std::vector<ConvergenceRow> convergence_study(const ModelParams& prm,
                                              const CanardConfig& cfg = {});

struct ClassifyResult {
  std::vector<double> phi;
  std::vector<OutcomeKind> kind;
  std::size_t first_liftoff;  // index of the first Liftoff in phi order
};

ClassifyResult classify_grid(const ModelParams& prm, double eps, std::vector<double> phis,
                             const CanardConfig& cfg = {});

// sup over trajectory nodes with theta in [lo, hi] of |phi - m_ss(theta)|
double sup_distance_to_canard(const ode::Trajectory<4>& tr, const ModelParams& prm, double lo,
                              double hi);

// Sign changes of w2 among nodes satisfying the theta predicate.
int w2_sign_changes(const ode::Trajectory<4>& tr, const std::function<bool(double)>& keep);

}  // namespace painleve::canard
