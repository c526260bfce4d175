#include "sim.hpp"

#include <algorithm>
#include <cmath>

namespace painleve::sim {

namespace {

RigidState state_of(const RigidVec& v, Mode m) { return {v[0], v[1], v[2], v[3], v[4], v[5], m}; }
RigidVec vec_of(const RigidState& s) { return {s.x, s.v, s.y, s.w, s.theta, s.phi}; }

}  // namespace

RigidRun simulate_rigid(const ModelParams& prm, RigidState st, double tmax,
                        const ode::IntegratorConfig& cfg, double p_stop) {
  prm.validate();
  if (!(tmax > 0.0)) throw ParamOutOfRange("tmax must be positive");
  if (st.mode == Mode::SlipPositive && !(st.v > 0.0)) {
    throw ParamOutOfRange("SlipPositive start needs v > 0");
  }
  if (st.mode != Mode::Free) st.y = st.w = 0.0;
  if (st.mode == Mode::Stick) st.v = 0.0;
  RigidRun run;
  double t = 0.0;
  run.samples.push_back({t, st});
  for (int seg = 0; seg < 64; ++seg) {
    using E = ode::Event<6>;
    std::vector<E> ev;
    ode::Trajectory<6> tr;
    auto go = [&](auto f) {
      tr = ode::integrate<6>(f, vec_of(st), t, tmax, cfg, ev);
      for (std::size_t i = 1; i < tr.t.size(); ++i) {
        run.samples.push_back({tr.t[i], state_of(tr.y[i], st.mode)});
      }
    };
    if (st.mode == Mode::SlipPositive) {
      ev = {{[](double, const RigidVec& y) { return y[1]; }, ode::Direction::Falling, true},
            {[&prm, p_stop](double, const RigidVec& y) { return std::abs(p_plus(y[4], prm)) - p_stop; },
             ode::Direction::Falling, true},
            {[&prm](double, const RigidVec& y) { return -b_fn(y[4], y[5]) / p_plus(y[4], prm); },
             ode::Direction::Falling, true}};
      go([&prm](double, const RigidVec& y) {
        return rigid_slip_vf(state_of(y, Mode::SlipPositive), prm, 0.0);
      });
    } else if (st.mode == Mode::Free) {
      ev = {{[](double, const RigidVec& y) { return y[2]; }, ode::Direction::Falling, true}};
      go([&prm](double, const RigidVec& y) { return rigid_free_vf(state_of(y, Mode::Free), prm); });
    } else {
      ev = {{[&prm](double, const RigidVec& y) {
               const auto f = stick_forces(y[4], y[5], prm);
               return std::min(f.F_N, prm.mu * f.F_N - std::abs(f.F_T));
             },
             ode::Direction::Falling, true}};
      go([&prm](double, const RigidVec& y) { return rigid_stick_vf(state_of(y, Mode::Stick), prm); });
    }
    if (!tr.stopped_by_event) {
      run.stop_reason = "tmax";
      return run;
    }
    const auto& hit = tr.events.back();
    t = hit.t;
    st = state_of(hit.y, st.mode);
    if (st.mode == Mode::SlipPositive) {
      if (hit.id == 1) {
        run.stop_reason = "singular_p";
        return run;
      }
      if (hit.id == 0) {
        if (!stick_forces(st.theta, st.phi, prm).stick_valid) {
          run.stop_reason = "slip_reversal";
          return run;
        }
        st.mode = Mode::Stick;
        st.v = 0.0;
      } else {
        st.mode = Mode::Free;
      }
    } else if (st.mode == Mode::Free) {
      run.stop_reason = "impact";
      return run;
    } else {
      run.stop_reason = "stick_exit";
      return run;
    }
    run.samples.back().s.mode = st.mode;
  }
  run.stop_reason = "mode_budget";
  return run;
}

CompliantRun simulate_compliant(const ModelParams& prm, double eps, const FullVec& init,
                                double tmax, const ode::IntegratorConfig& cfg) {
  prm.validate();
  if (!(eps > 0.0)) throw ParamOutOfRange("eps must be positive");
  if (!(init[1] > 0.0)) throw BranchViolation("compliant run starts with v <= 0");
  const std::vector<ode::Event<6>> ev{
      {[](double, const FullVec& y) { return y[1]; }, ode::Direction::Falling, true}};
  auto tr = ode::integrate<6>(
      [&prm, eps](double, const FullVec& y) {
        // stages may step just past v = 0 before the event is located; the
        // + branch does not depend on v except through x' = v
        FullVec z = y;
        z[1] = std::max(z[1], 1e-300);
        FullVec d = full_compliant_vf(z, prm, eps);
        d[0] = y[1];
        return d;
      },
      init, 0.0,
      tmax, cfg, ev);
  CompliantRun r{std::move(tr.t), std::move(tr.y), tr.stopped_by_event ? "slip_reversal" : "tmax"};
  return r;
}

}  // namespace painleve::sim
