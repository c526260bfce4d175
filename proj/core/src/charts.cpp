#include "painleve/charts.hpp"

#include <cmath>
#include <sstream>

#include "painleve/langer.hpp"

namespace painleve::charts {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw OutOfDomain(what);
}

K1State k2_to_k1(const K2State& s) {
  require(s.theta2 < 0.0, "kappa12 needs theta2 < 0");
  const double m = -s.theta2;
  const double sq = std::sqrt(m);
  return {s.y, s.w2 / sq, s.r2 * sq, 1.0 / (m * sq), s.phi2 / m};
}

K2State k1_to_k2(const K1State& s) {
  require(s.eps1 > 0.0, "kappa21 needs eps1 > 0");
  const double c = std::cbrt(s.eps1);  // eps1^{1/3} = (-theta2)^{-1/2}
  return {s.y, s.w1 / c, s.r1 * c, -1.0 / (c * c), s.phi1 / (c * c)};
}

K3State k2_to_k3(const K2State& s) {
  require(s.theta2 > 0.0, "kappa32 needs theta2 > 0");
  const double sq = std::sqrt(s.theta2);
  return {s.y, s.w2 / sq, s.r2 * sq, 1.0 / (s.theta2 * sq), s.phi2 / s.theta2};
}

K2State k3_to_k2(const K3State& s) {
  require(s.eps3 > 0.0, "kappa23 needs eps3 > 0");
  const double c = std::cbrt(s.eps3);
  return {s.y, s.w3 / c, s.r3 * c, 1.0 / (c * c), s.phi3 / (c * c)};
}

K2State to_k2(const ChartState& st) {
  return std::visit(overloaded{[](const K1State& s) { return k1_to_k2(s); },
                               [](const K2State& s) { return s; },
                               [](const K3State& s) { return k3_to_k2(s); }},
                    st);
}

}  // namespace

Chart chart_of(const ChartState& s) { return static_cast<Chart>(s.index()); }

const char* to_string(Chart c) {
  switch (c) {
    case Chart::K1: return "K1";
    case Chart::K2: return "K2";
    case Chart::K3: return "K3";
  }
  return "?";
}

void CanardShape::validate() const {
  if (!(xi > 0.0 && xi < 1.0) || !(s > 0.0)) {
    std::ostringstream os;
    os << "canard shape needs xi in (0,1) and s > 0, got xi=" << xi << " s=" << s;
    throw ParamOutOfRange(os.str());
  }
}

CanardShape shape_from(const CriticalData& cd) {
  CanardShape sh{cd.xi, cd.s};
  sh.validate();
  return sh;
}

ChartState chart_vf(const ChartState& st, const CanardShape& sh, double delta) {
  const double xi = sh.xi, s = sh.s;
  return std::visit(
      overloaded{
          [&](const K1State& k) -> ChartState {
            const double f = -k.y - delta * k.r1 * k.w1;
            return K1State{k.w1, k.phi1 + f + 0.5 * k.eps1 * k.w1, -0.5 * k.r1 * k.eps1,
                           1.5 * k.eps1 * k.eps1, k.eps1 * (xi * f + s + k.phi1)};
          },
          [&](const K2State& k) -> ChartState {
            // written relative to l2 (f = slope, phi2 = slope theta2) so the
            // large terms cancel exactly there
            const double m = sh.slope();
            const double df = -(k.y + m) - delta * k.r2 * k.w2;
            return K2State{k.w2, (k.phi2 - m * k.theta2) - k.theta2 * df, 0.0, 1.0,
                           xi * df + m};
          },
          [&](const K3State& k) -> ChartState {
            const double f = -k.y - delta * k.r3 * k.w3;
            return K3State{k.w3, k.phi3 - f - 0.5 * k.eps3 * k.w3, 0.5 * k.r3 * k.eps3,
                           -1.5 * k.eps3 * k.eps3, k.eps3 * (xi * f + s - k.phi3)};
          }},
      st);
}

ChartState chart_change(const ChartState& st, Chart to) {
  if (chart_of(st) == to) return st;
  const K2State k2 = to_k2(st);
  switch (to) {
    case Chart::K1: return k2_to_k1(k2);
    case Chart::K2: return k2;
    case Chart::K3: return k2_to_k3(k2);
  }
  return st;
}

double conserved_eps(const ChartState& st) {
  return std::visit(overloaded{[](const K1State& s) { return s.r1 * s.r1 * s.r1 * s.eps1; },
                               [](const K2State& s) { return s.r2 * s.r2 * s.r2; },
                               [](const K3State& s) { return s.r3 * s.r3 * s.r3 * s.eps3; }},
                    st);
}

ode::State<5> to_array(const ChartState& st) {
  return std::visit(
      overloaded{[](const K1State& s) { return ode::State<5>{s.y, s.w1, s.r1, s.eps1, s.phi1}; },
                 [](const K2State& s) { return ode::State<5>{s.y, s.w2, s.r2, s.theta2, s.phi2}; },
                 [](const K3State& s) { return ode::State<5>{s.y, s.w3, s.r3, s.eps3, s.phi3}; }},
      st);
}

ChartState from_array(Chart c, const ode::State<5>& v) {
  switch (c) {
    case Chart::K1: return K1State{v[0], v[1], v[2], v[3], v[4]};
    case Chart::K2: return K2State{v[0], v[1], v[2], v[3], v[4]};
    case Chart::K3: return K3State{v[0], v[1], v[2], v[3], v[4]};
  }
  return K2State{};
}

K2State l2_point(const CanardShape& sh, double theta2) {
  sh.validate();
  return {-sh.slope(), 0.0, 0.0, theta2, sh.slope() * theta2};
}

K2State ce2_point(const CanardShape& sh, double c, double theta2) {
  sh.validate();
  const auto e = langer::langer_eval(sh.xi, theta2);
  return {-sh.slope() + c * e.la, c * e.la1, 0.0, theta2,
          sh.slope() * theta2 + c * (e.la2 - theta2 * e.la)};
}

GrowthReport cr2_growth_test(const CanardShape& sh, double theta2_max) {
  sh.validate();
  if (!(theta2_max >= 10.0)) throw ParamOutOfRange("theta2_max must be at least 10");
  const double half = 0.5 * theta2_max;
  const double pts[3] = {0.0, half, theta2_max};
  const auto ev = langer::langer_grid(sh.xi, pts);
  GrowthReport g{};
  g.theta2_max = theta2_max;
  g.ratio = std::log(ev[2].la / ev[0].la) / (2.0 * std::pow(theta2_max, 1.5) / 3.0);
  g.lb_decay = ev[2].lb / ev[1].lb;
  g.lc_decay = ev[2].lc / ev[1].lc;
  const double lb_bound =
      std::exp(-2.0 * (std::pow(theta2_max, 1.5) - std::pow(half, 1.5)) / 3.0 * 0.8);
  g.transverse = g.ratio > 0.8 && g.ratio < 1.2 && std::abs(g.lb_decay) < lb_bound;
  return g;
}

Mr3Point mr3_graph(double phi3, double eps3, const CanardShape& sh) {
  sh.validate();
  if (!(eps3 >= 0.0)) throw OutOfDomain("eps3 must be non-negative");
  const double a = sh.s - (1.0 - sh.xi) * phi3;
  return {-phi3 + (2.0 - sh.xi) * eps3 * eps3 * a, -eps3 * a};
}

ode::State<3> reduced_k3_vf(double r3, double eps3, double phi3, const CanardShape& sh,
                            double delta) {
  // graph formula inlined so finite differences may straddle eps3 = 0
  const double a = sh.s - (1.0 - sh.xi) * phi3;
  const double y = -phi3 + (2.0 - sh.xi) * eps3 * eps3 * a;
  const double f = -y + delta * r3 * eps3 * a;
  return {0.5 * r3, -1.5 * eps3, sh.xi * f + sh.s - phi3};
}

}  // namespace painleve::charts
