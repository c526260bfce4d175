#include "painleve/canard.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace painleve::canard {

namespace {

using Vec = ScaledVec;
using Traj = ode::Trajectory<4>;

enum EventId : std::size_t { kTop = 0, kBottom = 1, kSection = 2, kBoxEnd = 3 };

struct Setup {
  ModelParams prm;
  CriticalData cd;
  double eps;
  double theta_section;
  double theta_end;
};

Setup make_setup(const ModelParams& prm, double eps, const CanardConfig& cfg) {
  prm.validate();
  cfg.validate();
  if (!(eps > 0.0 && eps < 0.1)) throw ParamOutOfRange("eps must lie in (0, 0.1)");
  Setup s{prm, critical_data(prm), eps, 0.0, 0.0};
  if (!(s.cd.xi > 0.0 && s.cd.xi < 1.0)) {
    throw ParamOutOfRange("canard construction needs mu > mu_C so that xi lies in (0,1)");
  }
  if (!(prm.delta > 0.0)) throw ParamOutOfRange("delta must be positive for a focus S_a");
  s.theta_section = s.cd.theta1 - cfg.entry_margin;
  s.theta_end = s.cd.theta1 + cfg.chi;
  if (!(s.theta_end < s.cd.theta2_crit)) throw ParamOutOfRange("chi reaches past theta2_crit");
  return s;
}

auto field(const Setup& s) {
  return [prm = s.prm, eps = s.eps](double, const Vec& y) {
    return slowfast_vf(from_vec(y), prm, eps);
  };
}

std::vector<ode::Event<4>> forward_events(const Setup& s, const CanardConfig& cfg) {
  const double ts = s.theta_section, te = s.theta_end, C = cfg.C_box;
  return {
      {[](double, const Vec& y) { return y[0]; }, ode::Direction::Rising, true},
      {[C](double, const Vec& y) { return y[0] + C; }, ode::Direction::Falling, true},
      {[ts](double, const Vec& y) { return y[2] - ts; }, ode::Direction::Rising, false},
      {[te](double, const Vec& y) { return y[2] - te; }, ode::Direction::Rising, true},
  };
}

double time_budget(double dtheta, double eps) { return 8.0 * std::max(dtheta, 0.05) / eps; }

Vec seed_state(const Setup& s, double theta, double phi, const CanardConfig& cfg) {
  const auto [y2, w2] = slow_manifold_point(theta, phi, s.prm, s.eps, cfg.manifold_order);
  return {y2, w2, theta, phi};
}

struct Run {
  Traj tr;
  OutcomeKind kind;
  int side;  // +1 toward lift-off, -1 toward plunge
  bool box_end;
};

// Full forward run from a seed on S_{a,eps}. ThroughBox runs get a side from
// where they eventually leave: the run is continued past the box end toward
// theta2_crit with only the y2 faces armed. The box end can sit inside the
// inner region (chi < eps^{1/3}), where the S_{r,eps} graph is no guide. Runs
// that still have not left fall back to the sign of their offset from that
// graph.
Run run_from_seed(const Setup& s, double theta_seed, double phi_seed, const CanardConfig& cfg,
                  bool dense) {
  auto ocfg = cfg.ode;
  ocfg.dense = dense;
  const Vec y0 = seed_state(s, theta_seed, phi_seed, cfg);
  Run r{ode::integrate<4>(field(s), y0, 0.0, time_budget(s.theta_end - theta_seed, s.eps), ocfg,
                          forward_events(s, cfg)),
        OutcomeKind::ThroughBox, 0, false};
  if (!r.tr.stopped_by_event) throw StepBudgetExceeded("orbit did not leave the box in time");
  const auto& last = r.tr.events.back();
  if (last.id == kTop) {
    r.kind = OutcomeKind::Liftoff;
    r.side = +1;
  } else if (last.id == kBottom) {
    r.kind = OutcomeKind::Plunge;
    r.side = -1;
  } else {
    r.box_end = true;
    const auto& y = last.y;
    const double cap = s.theta_end + 0.8 * (s.cd.theta2_crit - s.theta_end);
    const auto ev = forward_events(s, cfg);
    const std::vector<ode::Event<4>> evs{ev[kTop], ev[kBottom],
                                         {[cap](double, const Vec& v) { return v[2] - cap; },
                                          ode::Direction::Rising, true}};
    auto ccfg = cfg.ode;
    ccfg.dense = false;
    const auto cont = ode::integrate<4>(field(s), y, 0.0, time_budget(cap - y[2], s.eps), ccfg, evs);
    const std::size_t id = cont.stopped_by_event ? cont.events.back().id : 2;
    if (id == 0) {
      r.side = +1;
    } else if (id == 1) {
      r.side = -1;
    } else {
      const auto& z = cont.final_state();
      const double yr = slow_manifold_point(z[2], z[3], s.prm, s.eps, cfg.manifold_order).first;
      r.side = z[0] >= yr ? +1 : -1;
    }
  }
  return r;
}

double section_phi(const Traj& tr) {
  const auto* e = tr.first_event(kSection);
  if (!e) throw NonConvergent("orbit never reached the entry section");
  return e->y[3];
}

// Reduced flow d(phi)/d(theta) on the attracting side, used for the secant start.
double reduced_transport(const ModelParams& prm, double theta_from, double phi_from,
                         double theta_to) {
  auto rhs = [&prm](double th, const ode::State<1>& y) -> ode::State<1> {
    return {-c_plus(th, prm) * b_fn(th, y[0]) / (p_plus(th, prm) * y[0])};
  };
  ode::IntegratorConfig c;
  c.rtol = 1e-10;
  c.dense = false;
  return ode::integrate<1>(rhs, {phi_from}, theta_from, theta_to, c).final_state()[0];
}

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, unsigned threads, F f) {
  std::vector<T> out(n);
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::future<void>> jobs;
  const std::size_t nt = std::min<std::size_t>(threads, n);
  for (std::size_t t = 0; t < nt; ++t) {
    jobs.push_back(std::async(std::launch::async, [&, t] {
      for (std::size_t i = t; i < n; i += nt) out[i] = f(i);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace

void CanardConfig::validate() const {
  if (!(chi > 0.0) || !(C_box > 0.0) || !(varpi_w > 0.0) || !(bisect_tol > 0.0) ||
      !(entry_margin > 0.0) || !(bracket_spread > 0.0) || !(backward_lead >= 0.0)) {
    throw ParamOutOfRange("canard box sizes and tolerances must be positive");
  }
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1])) throw ParamOutOfRange("eps_list must be decreasing");
  }
  for (double e : eps_list) {
    if (!(e > 0.0)) throw ParamOutOfRange("eps_list entries must be positive");
  }
  if (manifold_order < 0 || manifold_order > 4) throw ParamOutOfRange("manifold_order in [0,4]");
  ode.validate();
}

const char* to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Liftoff: return "Liftoff";
    case OutcomeKind::Plunge: return "Plunge";
    case OutcomeKind::ThroughBox: return "ThroughBox";
  }
  return "?";
}

double relaxation_lead(const ModelParams& prm, double eps, const CanardConfig& cfg) {
  const Setup s = make_setup(prm, eps, cfg);
  const double rate = 0.5 * p_plus(s.theta_section, prm) * prm.delta;
  const double lead = 25.0 * eps * s.cd.phi1_plus / rate;
  return std::clamp(lead, 0.02, std::min(0.4, s.theta_section - 0.05));
}

EntryPoint attracting_entry_point(const ModelParams& prm, double eps, double phi_entry,
                                  const CanardConfig& cfg, std::optional<double> lead_in) {
  const Setup s = make_setup(prm, eps, cfg);
  const double ts = s.theta_section;
  if (!(b_fn(ts, phi_entry) < 0.0) || !(phi_entry > 0.0)) {
    throw ParamOutOfRange("entry phi must lie in the slip region T at the section");
  }
  const double lead = lead_in ? *lead_in : relaxation_lead(prm, eps, cfg);
  if (!(lead > 0.0 && lead < ts)) throw ParamOutOfRange("relaxation lead must lie in (0, theta_section)");
  const double th0 = ts - lead;
  auto ocfg = cfg.ode;
  ocfg.dense = false;
  const double T = time_budget(lead, eps);
  const auto ev = forward_events(s, cfg);
  std::vector<ode::Event<4>> evs{ev[kTop], ev[kBottom],
                                 {ev[kSection].g, ode::Direction::Rising, true}};

  auto to_section = [&](double phi_seed) {
    const auto tr = ode::integrate<4>(field(s), seed_state(s, th0, phi_seed, cfg), 0.0, T, ocfg, evs);
    if (!tr.stopped_by_event || tr.events.back().id != 2) {
      throw RelaxationFailure("seed orbit left the slip region before the section");
    }
    return tr.events.back();
  };

  // secant on the seed phi
  double x0 = reduced_transport(prm, ts, phi_entry, th0);
  double x1 = x0 + 1e-4;
  auto h0 = to_section(x0);
  double f0 = h0.y[3] - phi_entry;
  auto h1 = to_section(x1);
  double f1 = h1.y[3] - phi_entry;
  const double tol = 2e-15 * std::max(1.0, std::abs(phi_entry));
  for (int it = 0; it < 40 && std::abs(f1) > tol; ++it) {
    if (f1 == f0) break;
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    h1 = to_section(x1);
    f1 = h1.y[3] - phi_entry;
  }
  if (!(std::abs(f1) <= 1e-12)) {
    std::ostringstream os;
    os << "secant on seed phi stalled with residual " << f1;
    throw NonConvergent(os.str());
  }

  EntryPoint ep;
  ep.state = from_vec(h1.y);
  ep.seed_theta = th0;
  ep.seed_phi = x1;
  ep.time_to_section = h1.t;
  const auto [yg, wg] = slow_manifold_point(h1.y[2], h1.y[3], prm, eps, cfg.manifold_order);
  ep.fast_deviation = std::hypot(h1.y[0] - yg, h1.y[1] - wg);
  const double g = critical_manifold_point(h1.y[2], h1.y[3], prm);
  if (ep.fast_deviation > 10.0 * eps * std::abs(g)) {
    std::ostringstream os;
    os << "fast deviation " << ep.fast_deviation << " exceeds 10 eps |g| = " << 10 * eps * std::abs(g);
    throw RelaxationFailure(os.str());
  }
  return ep;
}

Outcome outcome(const ModelParams& prm, double eps, const CompliantState& entry,
                const CanardConfig& cfg) {
  const Setup s = make_setup(prm, eps, cfg);
  if (!(entry.y2 <= 0.0 && entry.y2 >= -cfg.C_box && entry.theta < s.theta_end)) {
    throw ParamOutOfRange("entry state is not inside the box");
  }
  auto ocfg = cfg.ode;
  ocfg.dense = false;
  const auto ev = forward_events(s, cfg);
  const std::vector<ode::Event<4>> evs{ev[kTop], ev[kBottom], ev[kBoxEnd]};
  const auto tr = ode::integrate<4>(field(s), to_vec(entry), 0.0,
                                    time_budget(s.theta_end - entry.theta, eps), ocfg, evs);
  if (!tr.stopped_by_event) throw StepBudgetExceeded("orbit did not leave the box in time");
  const auto& e = tr.events.back();
  const OutcomeKind k = e.id == 0   ? OutcomeKind::Liftoff
                        : e.id == 1 ? OutcomeKind::Plunge
                                    : OutcomeKind::ThroughBox;
  return {k, from_vec(e.y), e.t};
}

ShootResult shoot(const ModelParams& prm, double eps, const CanardConfig& cfg) {
  const Setup s = make_setup(prm, eps, cfg);
  const double ts = s.theta_section;
  const double lead = relaxation_lead(prm, eps, cfg);
  const SingularCanard sc(prm, std::max(0.02, ts - lead - 0.01), s.theta_end + 0.01);
  const double phi_c = sc(ts);
  const double phi_cap = std::sqrt(1.0 / std::sin(ts)) - 1e-3;  // stay in T

  double spread = cfg.bracket_spread;
  double seed_lo = 0, seed_hi = 0;
  Run lo, hi;
  for (;;) {
    const double plo = phi_c - spread, phi_hi = std::min(phi_c + spread, phi_cap);
    seed_lo = attracting_entry_point(prm, eps, plo, cfg).seed_phi;
    seed_hi = attracting_entry_point(prm, eps, phi_hi, cfg).seed_phi;
    lo = run_from_seed(s, ts - lead, seed_lo, cfg, false);
    hi = run_from_seed(s, ts - lead, seed_hi, cfg, false);
    if (lo.side < 0 && hi.side > 0) break;
    if (spread >= 0.4) {
      std::ostringstream os;
      os << "no Plunge/Liftoff bracket within +-" << spread << " of m_ss=" << phi_c;
      throw NoBracket(os.str());
    }
    spread *= 2.0;
  }

  unsigned it = 0;
  while (seed_hi - seed_lo > cfg.bisect_tol) {
    const double mid = 0.5 * (seed_lo + seed_hi);
    if (mid <= seed_lo || mid >= seed_hi) break;
    Run r = run_from_seed(s, ts - lead, mid, cfg, false);
    ++it;
    if (r.side > 0) {
      seed_hi = mid;
      hi = std::move(r);
    } else {
      seed_lo = mid;
      lo = std::move(r);
    }
  }

  ShootResult out;
  out.seed_lo = seed_lo;
  out.seed_hi = seed_hi;
  out.iterations = it;
  out.bracket_width = std::abs(section_phi(hi.tr) - section_phi(lo.tr));
  if (lo.box_end && hi.box_end) {
    const auto& a = lo.tr.events.back().y;
    const auto& b = hi.tr.events.back().y;
    out.exit_separation = std::hypot(a[0] - b[0], a[1] - b[1]);
  }
  const bool pick_hi = hi.tr.final_state()[2] >= lo.tr.final_state()[2];
  Run best = run_from_seed(s, ts - lead, pick_hi ? seed_hi : seed_lo, cfg, cfg.ode.dense);
  out.orbit_kind = best.kind;
  out.reached_box_end = best.box_end;
  out.theta_reached = best.tr.final_state()[2];
  out.phi_star = section_phi(best.tr);
  out.orbit = std::move(best.tr);
  return out;
}

ode::Trajectory<4> backward_from(const ModelParams& prm, double eps, const CompliantState& st,
                                 const CanardConfig& cfg) {
  const Setup s = make_setup(prm, eps, cfg);
  const double C = cfg.C_box, W = cfg.varpi_w, tlo = s.cd.theta1 - cfg.chi;
  const std::vector<ode::Event<4>> evs{
      {[](double, const Vec& y) { return y[0]; }, ode::Direction::Either, true},
      {[C](double, const Vec& y) { return y[0] + C; }, ode::Direction::Either, true},
      {[W](double, const Vec& y) { return y[1] - W; }, ode::Direction::Either, true},
      {[W](double, const Vec& y) { return y[1] + W; }, ode::Direction::Either, true},
      {[tlo](double, const Vec& y) { return y[2] - tlo; }, ode::Direction::Either, true},
  };
  return ode::integrate<4>(field(s), to_vec(st), 0.0,
                           -time_budget(st.theta - tlo, eps), cfg.ode, evs);
}

BackwardOrbit saddle_backward_orbit(const ModelParams& prm, double eps, double theta_far,
                                    const CanardConfig& cfg, std::optional<double> lead,
                                    std::optional<double> phi_seed) {
  const Setup s = make_setup(prm, eps, cfg);
  const double th = theta_far + lead.value_or(cfg.backward_lead);
  if (!(theta_far > s.cd.theta1) || !(th < s.cd.theta2_crit - 0.01)) {
    throw ParamOutOfRange("theta_far must lie in the saddle region right of theta1");
  }
  const double ph = phi_seed ? *phi_seed : SingularCanard(prm, s.cd.theta1 - 0.05, th + 0.01)(th);
  const Vec base = seed_state(s, th, ph, cfg);
  const LayerClassification lc = layer_classification(th, prm);
  const double lm = std::min(lc.lambda_plus.real(), lc.lambda_minus.real());
  const double nrm = std::hypot(1.0, lm);
  const double ex = 1.0 / nrm, ew = lm / nrm;

  auto ocfg = cfg.ode;
  ocfg.dense = false;
  const double C = cfg.C_box, tlo = s.cd.theta1 - cfg.chi, wthr = 1.0;
  // id: 0 top, 1 bottom, 2 w2 = -wthr, 3 w2 = +wthr, 4 theta window left
  const std::vector<ode::Event<4>> evs{
      {[](double, const Vec& y) { return y[0]; }, ode::Direction::Either, true},
      {[C](double, const Vec& y) { return y[0] + C; }, ode::Direction::Either, true},
      {[wthr](double, const Vec& y) { return y[1] + wthr; }, ode::Direction::Either, true},
      {[wthr](double, const Vec& y) { return y[1] - wthr; }, ode::Direction::Either, true},
      {[tlo](double, const Vec& y) { return y[2] - tlo; }, ode::Direction::Either, true},
  };
  const double T = time_budget(th - tlo, eps);
  auto side = [&](double sigma) {
    const Vec y0{base[0] + sigma * ex, base[1] + sigma * ew, base[2], base[3]};
    const auto tr = ode::integrate<4>(field(s), y0, 0.0, -T, ocfg, evs);
    if (!tr.stopped_by_event) return 0;
    const auto id = tr.events.back().id;
    return (id == 0 || id == 2) ? +1 : (id == 4 ? 0 : -1);
  };

  double a = -1e-3, b = 1e-3;
  int sa = side(a), sb = side(b);
  while (!(sa < 0 && sb > 0) && b < 0.5) {
    a *= 4.0;
    b *= 4.0;
    sa = side(a);
    sb = side(b);
  }
  if (!(sa < 0 && sb > 0)) {
    std::ostringstream os;
    os << "backward classes at sigma=-+" << b << " are " << sa << ", " << sb;
    throw NoBracket(os.str());
  }
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const int sm = side(m);
    if (sm == 0) {
      a = b = m;
      break;
    }
    (sm > 0 ? b : a) = m;
  }
  BackwardOrbit bo;
  bo.sigma = 0.5 * (a + b);
  bo.seed = from_vec({base[0] + bo.sigma * ex, base[1] + bo.sigma * ew, base[2], base[3]});
  bo.orbit = backward_from(prm, eps, bo.seed, cfg);
  return bo;
}

double sup_distance_to_canard(const ode::Trajectory<4>& tr, const ModelParams& prm, double lo,
                              double hi) {
  const SingularCanard sc(prm, std::max(0.02, lo - 0.01), hi + 0.01);
  double d = 0.0;
  bool any = false;
  for (const auto& y : tr.y) {
    if (y[2] < lo || y[2] > hi) continue;
    d = std::max(d, std::abs(y[3] - sc(y[2])));
    any = true;
  }
  if (!any) throw OutOfRange("trajectory does not cover the theta window");
  return d;
}

int w2_sign_changes(const ode::Trajectory<4>& tr, const std::function<bool(double)>& keep) {
  int n = 0, last = 0;
  for (const auto& y : tr.y) {
    if (!keep(y[2]) || y[1] == 0.0) continue;
    const int sg = y[1] > 0.0 ? 1 : -1;
    if (last != 0 && sg != last) ++n;
    last = sg;
  }
  return n;
}

std::vector<ConvergenceRow> convergence_study(const ModelParams& prm, const CanardConfig& cfg) {
  cfg.validate();
  const CriticalData cd = critical_data(prm);
  const auto& el = cfg.eps_list;
  return parallel_map<ConvergenceRow>(el.size(), cfg.threads, [&](std::size_t i) {
    const ShootResult r = shoot(prm, el[i], cfg);
    return ConvergenceRow{el[i],
                          sup_distance_to_canard(r.orbit, prm, cd.theta1 - cfg.chi, cd.theta1),
                          r.phi_star, r.bracket_width};
  });
}

ClassifyResult classify_grid(const ModelParams& prm, double eps, std::vector<double> phis,
                             const CanardConfig& cfg) {
  std::sort(phis.begin(), phis.end());
  ClassifyResult res;
  res.phi = phis;
  res.kind = parallel_map<OutcomeKind>(phis.size(), cfg.threads, [&](std::size_t i) {
    const EntryPoint ep = attracting_entry_point(prm, eps, phis[i], cfg);
    return outcome(prm, eps, ep.state, cfg).kind;
  });
  // Plunge* ThroughBox* Liftoff*
  int stage = 0;
  res.first_liftoff = phis.size();
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const int st = res.kind[i] == OutcomeKind::Plunge ? 0 : res.kind[i] == OutcomeKind::ThroughBox ? 1 : 2;
    if (st < stage) {
      std::ostringstream os;
      os << "outcome at phi=" << phis[i] << " is " << to_string(res.kind[i]) << " after a later class";
      throw MonotonicityViolation(os.str());
    }
    if (st == 2 && stage < 2) res.first_liftoff = i;
    stage = st;
  }
  return res;
}

}  // namespace painleve::canard
