#pragma once

#include <utility>
#include <vector>

#include "painleve/odeint.hpp"

namespace painleve {

struct ModelParams {
  double alpha = 3.0;  // m l^2 / I, 3 for a uniform rod
  double mu = 1.6;
  double delta = 1.0;

  void validate() const;
};

// Sign of the slip velocity v; selects the upper/lower signs in q, p, c.
enum class Branch { Plus, Minus };

struct Coefficients {
  double a, b, q, p, c;
};

Coefficients coefficient_functions(double theta, double phi, const ModelParams& prm,
                                   Branch branch = Branch::Plus);

double b_fn(double theta, double phi);
double p_plus(double theta, const ModelParams& prm);
double p_plus_prime(double theta, const ModelParams& prm);
double q_plus(double theta, const ModelParams& prm);
double c_plus(double theta, const ModelParams& prm);

double mu_P(double alpha);
double mu_C(double alpha);

struct CriticalData {
  double mu_P, mu_C;
  double theta1, theta2_crit;
  double phi1_plus;
  double lambda1, lambda2;
  double xi, s;

  std::pair<double, double> P() const { return {theta1, phi1_plus}; }
  double canard_slope() const { return s / (1.0 - xi); }
};

// Throws ParamOutOfRange when mu <= mu_P(alpha).
CriticalData critical_data(const ModelParams& prm);

enum class Mode { SlipPositive, Stick, Free };

struct RigidState {
  double x = 0, v = 0, y = 0, w = 0, theta = 0, phi = 0;
  Mode mode = Mode::SlipPositive;
};

// Order: (x, v, y, w, theta, phi).
using RigidVec = ode::State<6>;

inline constexpr double kSingularPTol = 1e-10;

RigidVec rigid_slip_vf(const RigidState& st, const ModelParams& prm, double p_tol = kSingularPTol);
RigidVec rigid_free_vf(const RigidState& st, const ModelParams& prm);
RigidVec rigid_stick_vf(const RigidState& st, const ModelParams& prm);

struct StickForces {
  double F_N, F_T;
  bool stick_valid;
};

StickForces stick_forces(double theta, double phi, const ModelParams& prm);

// The strong singular canard phi = m_ss(theta) through P, traced in the
// theta parametrization d(phi)/d(theta) = -c+ b / (p+ phi) on both sides.
class SingularCanard {
 public:
  SingularCanard(const ModelParams& prm, double theta_lo, double theta_hi,
                 double seed_offset = 1e-6);

  double operator()(double theta) const;
  double theta_lo() const { return lo_; }
  double theta_hi() const { return hi_; }
  const CriticalData& crit() const { return cd_; }
  std::vector<std::pair<double, double>> table(std::size_t n) const;

 private:
  ModelParams prm_;
  CriticalData cd_;
  double lo_, hi_;
  double th_left_, th_right_;  // seeds either side of P
  ode::Trajectory<1> left_, right_;
};

std::vector<std::pair<double, double>> singular_canard(const ModelParams& prm, double theta_lo,
                                                       double theta_hi, std::size_t n,
                                                       double seed_offset = 1e-6);

// v(0) - integral of q+ b d(tau) along the desingularized flow from (theta, phi).
double slip_terminal_velocity(const ModelParams& prm, double theta, double phi, double v0,
                              double b_tol = 1e-12);

// Desingularized reduced field d/dtau (theta, phi) = (p+ phi, -c+ b).
ode::State<2> desingularized_vf(double theta, double phi, const ModelParams& prm);

}  // namespace painleve
