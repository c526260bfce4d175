#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <thread>

#include "csv.hpp"
#include "painleve/canard.hpp"
#include "painleve/charts.hpp"
#include "painleve/langer.hpp"
#include "painleve/regionmap.hpp"
#include "sim.hpp"

namespace painleve::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  ModelParams prm;
  double eps = 1e-2;
  unsigned threads = 0;
  double rtol = 1e-10, atol = 1e-12;
  std::string out;
  canard::CanardConfig canard;

  ode::IntegratorConfig ode() const {
    ode::IntegratorConfig c;
    c.rtol = rtol;
    c.atol = atol;
    return c;
  }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t k = 0;
    v.push_back(std::stod(item, &k));
    if (k != item.size()) throw CLI::ValidationError("list", "bad number " + item);
  }
  return v;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::SlipPositive: return "slip";
    case Mode::Stick: return "stick";
    case Mode::Free: return "free";
  }
  return "?";
}

// ---- subcommands ----------------------------------------------------------

std::string cmd_critvals(const Options& o) {
  const CriticalData cd = critical_data(o.prm);
  Json j;
  j["alpha"] = o.prm.alpha;
  j["mu"] = o.prm.mu;
  j["mu_P"] = cd.mu_P;
  j["mu_C"] = cd.mu_C;
  j["theta1"] = cd.theta1;
  j["theta2_crit"] = cd.theta2_crit;
  j["phi1_plus"] = cd.phi1_plus;
  j["lambda1"] = cd.lambda1;
  j["lambda2"] = cd.lambda2;
  j["xi"] = cd.xi;
  j["s"] = cd.s;
  j["canard_slope"] = cd.canard_slope();
  return dump(j);
}

struct RigidArgs {
  double theta = 0.5, phi = 0.0, v = 1.0, tmax = 5.0;
  std::string mode = "slip";
  std::string summary;
};

std::string cmd_sim_rigid(const Options& o, const RigidArgs& a, std::ostream& err) {
  RigidState s;
  s.theta = a.theta;
  s.phi = a.phi;
  s.v = a.v;
  s.mode = a.mode == "stick" ? Mode::Stick : a.mode == "free" ? Mode::Free : Mode::SlipPositive;
  auto cfg = o.ode();
  cfg.dense = false;
  const auto run = sim::simulate_rigid(o.prm, s, a.tmax, cfg);
  csv::Writer w({"t", "x", "v", "y", "w", "theta", "phi", "mode"});
  for (const auto& r : run.samples) {
    w.row({r.t, r.s.x, r.s.v, r.s.y, r.s.w, r.s.theta, r.s.phi, std::string(mode_name(r.s.mode))});
  }
  err << "stop: " << run.stop_reason << "\n";
  if (!a.summary.empty()) {
    Json j;
    j["stop_reason"] = run.stop_reason;
    j["t_end"] = run.samples.back().t;
    j["samples"] = run.samples.size();
    emit(dump(j), a.summary, err);
  }
  return w.str();
}

struct CompliantArgs {
  double theta = 0.5, phi = 0.5, v = 1.0, y2 = 0.0, w2 = 0.0, tmax = 1.0;
  bool on_manifold = true;
  std::string summary;
};

std::string cmd_sim_compliant(const Options& o, const CompliantArgs& a, std::ostream& err) {
  double y2 = a.y2, w2 = a.w2;
  if (a.on_manifold) {
    y2 = critical_manifold_point(a.theta, a.phi, o.prm);
    w2 = 0.0;
  }
  const double e = o.eps;
  const FullVec init{0.0, a.v, e * e * y2, e * w2, a.theta, a.phi};
  auto cfg = o.ode();
  cfg.dense = false;
  const auto run = sim::simulate_compliant(o.prm, e, init, a.tmax, cfg);
  csv::Writer w({"t", "x", "v", "y", "w", "theta", "phi"});
  for (std::size_t i = 0; i < run.t.size(); ++i) {
    const auto& y = run.y[i];
    w.row({run.t[i], y[0], y[1], y[2], y[3], y[4], y[5]});
  }
  err << "stop: " << run.stop_reason << "\n";
  if (!a.summary.empty()) {
    Json j;
    j["stop_reason"] = run.stop_reason;
    j["t_end"] = run.t.back();
    j["samples"] = run.t.size();
    emit(dump(j), a.summary, err);
  }
  return w.str();
}

struct LangerArgs {
  double xi = 0.5, min = -10.0, max = 10.0;
  std::size_t n = 201;
};

std::string cmd_langer_eval(const LangerArgs& a) {
  if (a.n < 1) throw ParamOutOfRange("n must be at least 1");
  const auto th = linspace(a.min, a.max, a.n);
  const auto ev = langer::langer_grid(a.xi, th);
  csv::Writer w({"theta2", "la", "la1", "la2", "lb", "lb1", "lb2", "lc", "lc1", "lc2"});
  for (const auto& e : ev) w.row({e.theta2, e.la, e.la1, e.la2, e.lb, e.lb1, e.lb2, e.lc, e.lc1, e.lc2});
  return w.str();
}

std::string cmd_langer_check() {
  using std::numbers::pi;
  Json j;
  const auto grid = linspace(-10.0, 10.0, 81);
  Json wr;
  for (double xi : {0.2, 0.5, 0.8}) {
    const auto ev = langer::langer_grid(xi, grid);
    const double w0 = langer::wronskian(langer::langer_eval(xi, 0.0));
    double worst = 0.0;
    for (const auto& e : ev) worst = std::max(worst, std::abs(langer::wronskian(e) / w0 - 1.0));
    std::ostringstream key;
    key << "xi=" << xi;
    wr[key.str()] = worst;
  }
  j["wronskian_rel_variation"] = wr;
  const double lb0 = langer::mellin_initial_data(0.0).lb[0];
  j["lb0_airy_error"] = std::abs(lb0 - pi * std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0));
  j["airy_square_residual"] = langer::airy_square_residual(linspace(-8.0, 8.0, 65));
  const double th = -15.0;
  const double la = langer::la_direct(0.5, th);
  j["la_negative_asymptotic_rel_error"] =
      std::abs(langer::asymptotic(0.5, th, langer::Which::La, langer::Side::Minus) / la - 1.0);
  double dev = 0.0;
  const auto ev = langer::langer_grid(0.5, grid);
  for (const auto& e : ev) {
    dev = std::max(dev, std::abs(e.la - langer::la_direct(0.5, e.theta2)) / std::abs(e.la));
  }
  j["la_ode_vs_direct_rel"] = dev;
  return dump(j);
}

charts::Chart parse_chart(const std::string& s) {
  if (s == "K1") return charts::Chart::K1;
  if (s == "K2") return charts::Chart::K2;
  if (s == "K3") return charts::Chart::K3;
  throw CLI::ValidationError("chart", "expected K1, K2 or K3");
}

const std::array<const char*, 5>& chart_names(charts::Chart c) {
  static const std::array<const char*, 5> k1{"y", "w1", "r1", "eps1", "phi1"};
  static const std::array<const char*, 5> k2{"y", "w2", "r2", "theta2", "phi2"};
  static const std::array<const char*, 5> k3{"y", "w3", "r3", "eps3", "phi3"};
  return c == charts::Chart::K1 ? k1 : c == charts::Chart::K2 ? k2 : k3;
}

struct ChartArgs {
  std::string chart = "K2", to = "K3";
  std::string state;
  double tmax = 1.0;
};

ode::State<5> parse_state5(const std::string& s) {
  const auto v = parse_list(s);
  if (v.size() != 5) throw CLI::ValidationError("state", "expected 5 comma-separated numbers");
  return {v[0], v[1], v[2], v[3], v[4]};
}

std::string cmd_chart_flow(const Options& o, const ChartArgs& a) {
  const charts::Chart c = parse_chart(a.chart);
  const charts::CanardShape sh = charts::shape_from(critical_data(o.prm));
  const double delta = o.prm.delta;
  auto tr = ode::integrate<5>(
      [&](double, const ode::State<5>& y) {
        return charts::to_array(charts::chart_vf(charts::from_array(c, y), sh, delta));
      },
      parse_state5(a.state), 0.0, a.tmax, [&] {
        auto cfg = o.ode();
        cfg.dense = false;
        return cfg;
      }());
  const auto& nm = chart_names(c);
  csv::Writer w({"t", nm[0], nm[1], nm[2], nm[3], nm[4], "eps"});
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    const auto& y = tr.y[i];
    w.row({tr.t[i], y[0], y[1], y[2], y[3], y[4], charts::conserved_eps(charts::from_array(c, y))});
  }
  return w.str();
}

std::string cmd_chart_change(const ChartArgs& a) {
  const charts::Chart from = parse_chart(a.chart), to = parse_chart(a.to);
  const auto res = charts::chart_change(charts::from_array(from, parse_state5(a.state)), to);
  const auto v = charts::to_array(res);
  Json j;
  j["from"] = charts::to_string(from);
  j["to"] = charts::to_string(to);
  Json st;
  const auto& nm = chart_names(to);
  for (int i = 0; i < 5; ++i) st[nm[i]] = v[i];
  j["state"] = st;
  return dump(j);
}

Json config_json(const Options& o) {
  Json j;
  j["alpha"] = o.prm.alpha;
  j["mu"] = o.prm.mu;
  j["delta"] = o.prm.delta;
  j["chi"] = o.canard.chi;
  j["C_box"] = o.canard.C_box;
  j["varpi_w"] = o.canard.varpi_w;
  j["entry_margin"] = o.canard.entry_margin;
  j["bisect_tol"] = o.canard.bisect_tol;
  j["step"] = o.canard.ode.fixed_step;
  return j;
}

struct ShootArgs {
  std::string orbit;
};

std::string cmd_shoot(const Options& o, const ShootArgs& a, std::ostream& err) {
  const auto r = canard::shoot(o.prm, o.eps, o.canard);
  const CriticalData cd = critical_data(o.prm);
  const double ts = cd.theta1 - o.canard.entry_margin;
  const SingularCanard sc(o.prm, ts - 0.01, cd.theta1 + 0.01);
  Json j;
  j["config"] = config_json(o);
  j["eps"] = o.eps;
  j["phi_star"] = r.phi_star;
  j["m_ss_entry"] = sc(ts);
  j["bracket_width"] = r.bracket_width;
  j["iterations"] = r.iterations;
  j["orbit_kind"] = canard::to_string(r.orbit_kind);
  j["reached_box_end"] = r.reached_box_end;
  j["theta_reached"] = r.theta_reached;
  j["exit_separation"] = r.exit_separation ? Json(*r.exit_separation) : Json(nullptr);
  j["sup_distance"] =
      canard::sup_distance_to_canard(r.orbit, o.prm, cd.theta1 - o.canard.chi, cd.theta1);
  if (!a.orbit.empty()) {
    csv::Writer w({"t", "y2", "w2", "theta", "phi"});
    for (std::size_t i = 0; i < r.orbit.t.size(); ++i) {
      const auto& y = r.orbit.y[i];
      w.row({r.orbit.t[i], y[0], y[1], y[2], y[3]});
    }
    emit(w.str(), a.orbit, err);
  }
  return dump(j);
}

std::string cmd_converge(const Options& o) {
  const auto rows = canard::convergence_study(o.prm, o.canard);
  csv::Writer w({"eps", "sup_distance", "phi_star", "bracket_width"});
  for (const auto& r : rows) w.row({r.eps, r.sup_distance, r.phi_star, r.bracket_width});
  return w.str();
}

struct ClassifyArgs {
  std::size_t n = 41;
  double spread = 0.05;
};

std::string cmd_classify(const Options& o, const ClassifyArgs& a) {
  if (a.n < 2 || !(a.spread > 0.0)) throw ParamOutOfRange("classify needs n >= 2 and spread > 0");
  const double ps = canard::shoot(o.prm, o.eps, o.canard).phi_star;
  const auto res = canard::classify_grid(o.prm, o.eps, linspace(ps - a.spread, ps + a.spread, a.n),
                                         o.canard);
  csv::Writer w({"phi", "kind"});
  for (std::size_t i = 0; i < res.phi.size(); ++i) {
    w.row({res.phi[i], std::string(canard::to_string(res.kind[i]))});
  }
  return w.str();
}

struct RegionArgs {
  regionmap::GridSpec grid;
  std::string svg;
};

std::string cmd_regionmap(const Options& o, const RegionArgs& a, std::ostream& err) {
  const auto m = regionmap::region_map(o.prm, a.grid);
  csv::Writer w({"theta", "phi", "b", "p_plus", "region"});
  for (const auto& c : m.cells) w.row({c.theta, c.phi, c.b, c.p, std::string(regionmap::to_string(c.region))});
  if (!a.svg.empty()) emit(regionmap::to_svg(m), a.svg, err);
  return w.str();
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
  unsigned n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PAINLEVE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Painleve rod numerics lab"};
  app.name("painleve");
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value file; flags override it");

  Options o;
  app.add_option("--alpha", o.prm.alpha, "m l^2 / I")->capture_default_str();
  app.add_option("--mu", o.prm.mu, "friction coefficient")->capture_default_str();
  app.add_option("--delta", o.prm.delta, "scaled damping")->capture_default_str();
  app.add_option("--eps", o.eps, "compliance parameter")->capture_default_str();
  app.add_option("--threads", o.threads, "sweep threads (0 = hardware)");
  app.add_option("--rtol", o.rtol)->capture_default_str();
  app.add_option("--atol", o.atol)->capture_default_str();
  app.add_option("-o,--out", o.out, "output path (default stdout)");
  app.add_option("--chi", o.canard.chi)->capture_default_str();
  app.add_option("--C-box", o.canard.C_box)->capture_default_str();
  app.add_option("--varpi-w", o.canard.varpi_w)->capture_default_str();
  app.add_option("--entry-margin", o.canard.entry_margin)->capture_default_str();
  app.add_option("--bisect-tol", o.canard.bisect_tol)->capture_default_str();
  app.add_option("--step", o.canard.ode.fixed_step, "fixed canard step (fast time)")
      ->capture_default_str();
  std::string eps_list;
  app.add_option("--eps-list", eps_list, "comma separated, decreasing");

  std::function<std::string()> action;
  auto sub = [&](CLI::App* parent, const char* name, const char* help) {
    CLI::App* s = parent->add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  auto* crit = sub(&app, "critvals", "critical friction values and the point P");
  crit->callback([&] { action = [&] { return cmd_critvals(o); }; });

  auto* simc = sub(&app, "simulate", "time integration");
  simc->require_subcommand(1);
  RigidArgs ra;
  auto* rig = sub(simc, "rigid", "rigid rod: slip, stick, free flight");
  rig->add_option("--theta", ra.theta)->capture_default_str();
  rig->add_option("--phi", ra.phi)->capture_default_str();
  rig->add_option("--v", ra.v)->capture_default_str();
  rig->add_option("--tmax", ra.tmax)->capture_default_str();
  rig->add_option("--mode", ra.mode)->check(CLI::IsMember({"slip", "stick", "free"}))->capture_default_str();
  rig->add_option("--summary", ra.summary, "JSON summary path");
  rig->callback([&] { action = [&] { return cmd_sim_rigid(o, ra, err); }; });
  CompliantArgs ca;
  auto* com = sub(simc, "compliant", "compliant rod in slow time");
  com->add_option("--theta", ca.theta)->capture_default_str();
  com->add_option("--phi", ca.phi)->capture_default_str();
  com->add_option("--v", ca.v)->capture_default_str();
  com->add_option("--y2", ca.y2, "scaled penetration (implies --off-manifold)");
  com->add_option("--w2", ca.w2);
  com->add_option("--tmax", ca.tmax)->capture_default_str();
  com->add_option("--summary", ca.summary, "JSON summary path");
  com->callback([&] {
    ca.on_manifold = com->count("--y2") == 0 && com->count("--w2") == 0;
    action = [&] { return cmd_sim_compliant(o, ca, err); };
  });

  auto* lan = sub(&app, "langer", "Langer functions");
  lan->require_subcommand(1);
  LangerArgs la;
  auto* lev = sub(lan, "eval", "tabulate La, Lb, Lc and two derivatives");
  lev->add_option("--xi", la.xi)->capture_default_str();
  lev->add_option("--min", la.min)->capture_default_str();
  lev->add_option("--max", la.max)->capture_default_str();
  lev->add_option("--n", la.n)->capture_default_str();
  lev->callback([&] { action = [&] { return cmd_langer_eval(la); }; });
  auto* lch = sub(lan, "check", "closed-form and consistency checks");
  lch->callback([&] { action = [&] { return cmd_langer_check(); }; });

  auto* cha = sub(&app, "chart", "blowup charts");
  cha->require_subcommand(1);
  ChartArgs cg;
  auto* cfl = sub(cha, "flow", "integrate a truncated chart system");
  cfl->add_option("--chart", cg.chart)->capture_default_str();
  cfl->add_option("--state", cg.state, "5 comma-separated components")->required();
  cfl->add_option("--tmax", cg.tmax)->capture_default_str();
  cfl->callback([&] { action = [&] { return cmd_chart_flow(o, cg); }; });
  auto* cch = sub(cha, "change", "change of chart");
  cch->add_option("--from", cg.chart)->capture_default_str();
  cch->add_option("--to", cg.to)->capture_default_str();
  cch->add_option("--state", cg.state, "5 comma-separated components")->required();
  cch->callback([&] { action = [&] { return cmd_chart_change(cg); }; });

  auto* can = sub(&app, "canard", "canard shooting and sweeps");
  can->require_subcommand(1);
  ShootArgs sa;
  auto* csh = sub(can, "shoot", "locate the canard by outcome bisection");
  csh->add_option("--orbit", sa.orbit, "CSV path for the orbit");
  csh->callback([&] { action = [&] { return cmd_shoot(o, sa, err); }; });
  auto* ccv = sub(can, "converge", "sup-distance to the singular canard over eps");
  ccv->callback([&] { action = [&] { return cmd_converge(o); }; });
  ClassifyArgs cl;
  auto* ccl = sub(can, "classify", "outcome map around phi_star");
  ccl->add_option("--n", cl.n)->capture_default_str();
  ccl->add_option("--spread", cl.spread)->capture_default_str();
  ccl->callback([&] { action = [&] { return cmd_classify(o, cl); }; });

  RegionArgs rg;
  auto* reg = sub(&app, "regionmap", "four-region classification by the signs of b and p+");
  reg->add_option("--theta-min", rg.grid.theta_min)->capture_default_str();
  reg->add_option("--theta-max", rg.grid.theta_max)->capture_default_str();
  reg->add_option("--phi-min", rg.grid.phi_min)->capture_default_str();
  reg->add_option("--phi-max", rg.grid.phi_max)->capture_default_str();
  reg->add_option("--n-theta", rg.grid.n_theta)->capture_default_str();
  reg->add_option("--n-phi", rg.grid.n_phi)->capture_default_str();
  reg->add_option("--svg", rg.svg, "SVG output path");
  reg->callback([&] { action = [&] { return cmd_regionmap(o, rg, err); }; });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!eps_list.empty()) o.canard.eps_list = parse_list(eps_list);
    o.canard.threads = resolve_threads(o.threads);
    o.prm.validate();
    o.ode().validate();
    o.canard.validate();
    emit(action(), o.out, out);
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}

}  // namespace painleve::cli
