#pragma once

#include <string>
#include <vector>

#include "painleve/compliant.hpp"

namespace painleve::sim {

struct RigidSample {
  double t;
  RigidState s;
};

struct RigidRun {
  std::vector<RigidSample> samples;
  // tmax, singular_p, slip_reversal, impact, stick_exit
  std::string stop_reason;
};

// Piecewise integration of the rigid rod: slip with F_N = -b/p+, Filippov
// stick while the force cone holds, free flight once F_N would turn
// negative. Stops at the events listed in RigidRun.
RigidRun simulate_rigid(const ModelParams& prm, RigidState init, double tmax,
                        const ode::IntegratorConfig& cfg, double p_stop = 1e-6);

struct CompliantRun {
  std::vector<double> t;
  std::vector<FullVec> y;
  std::string stop_reason;  // tmax or slip_reversal
};

CompliantRun simulate_compliant(const ModelParams& prm, double eps, const FullVec& init,
                                double tmax, const ode::IntegratorConfig& cfg);

}  // namespace painleve::sim
