#include <doctest.h>

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "painleve/errors.hpp"
#include "painleve/langer.hpp"

using namespace painleve;
using namespace painleve::langer;
using std::numbers::pi;

namespace {

// mpmath, 30 digits: La by direct quadrature, Lb/Lc on the ray arg tau = pi/6
struct Ref {
  double th;
  double v[9];
};
const Ref kRefs[] = {
    {2.0,
     {9.95345389377552849, 11.011228209420339, 16.2019752945383092, 0.0855784590589607987,
      -0.137253104658591182, 0.195643625840259839, 1.30241269205752903, -0.316391724223261415,
      0.134776293479466455}},
    {-5.0,
     {0.789054868966789205, 0.0769086066586182502, 0.0218423696010610284, 1.50411517518979739,
      -0.602785482407571668, -3.63950252745715084, 0.333611068018515631, 1.63875670331396222,
      -1.51756182801378722}},
    {-10.0,
     {0.56015365376619328, 0.0279054365492007396, 0.00415083314316120393, 1.00663090812624153,
      1.1205279571726405, -4.4094984951683019, -0.338275297896150189, 1.39590379124253247,
      3.45480004805046356}},
    {7.0,
     {158101.802886377724, 406068.89140196017, 1074830.26409024913, 1.42477412189888398e-6,
      -3.86540071879242826e-6, 0.0000102301099373611693, 0.671206909050343573,
      -0.0485250880070221787, 0.0107217563471399922}},
};

std::array<double, 9> flat(const LangerEval& e) {
  return {e.la, e.la1, e.la2, e.lb, e.lb1, e.lb2, e.lc, e.lc1, e.lc2};
}

int sign_changes(const std::vector<double>& v) {
  int n = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if ((v[i] < 0) != (v[i - 1] < 0)) ++n;
  return n;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = a + (b - a) * i / (n - 1);
  return t;
}

}  // namespace

TEST_CASE("Mellin initial data") {
  const auto d0 = mellin_initial_data(0.0);
  CHECK(d0.la[0] == doctest::Approx(1.2878993168540690872).epsilon(1e-14));
  CHECK(d0.la[0] == doctest::Approx(std::pow(3.0, -2.0 / 3.0) * std::tgamma(1.0 / 3.0)).epsilon(1e-14));
  const double ai0 = boost::math::airy_ai(0.0), aip0 = boost::math::airy_ai_prime(0.0);
  CHECK(d0.lb[0] == doctest::Approx(pi * ai0).epsilon(1e-14));
  CHECK(d0.lc[0] == doctest::Approx(pi * ai0).epsilon(1e-14));
  CHECK(d0.lb[1] == doctest::Approx(pi * aip0).epsilon(1e-14));
  CHECK(std::abs(d0.lb[2]) < 1e-14);  // Ai'' (0) = 0

  for (double xi : {0.2, 0.5, 0.8}) {
    const auto d = mellin_initial_data(xi);
    for (int k = 0; k < 3; ++k) {
      const double s = k + 1.0 - xi;
      CHECK(d.la[k] == doctest::Approx(std::pow(3.0, s / 3.0 - 1.0) * std::tgamma(s / 3.0)).epsilon(1e-14));
      CHECK(d.la[k] == doctest::Approx(la_direct(xi, 0.0, k)).epsilon(1e-10));
    }
    // derivative shift: La_xi'(0) = La_{xi-1}(0)
    CHECK(d.la[1] == doctest::Approx(std::pow(3.0, (2.0 - xi) / 3.0 - 1.0) * std::tgamma((2.0 - xi) / 3.0)));
  }
  const auto h = mellin_initial_data(0.5);
  CHECK(h.lb[0] == doctest::Approx(1.1141324317875695).epsilon(1e-13));
  CHECK(h.lc[0] == doctest::Approx(1.92973397821633685).epsilon(1e-13));
  CHECK(h.lb[2] == doctest::Approx(0.469960985480164998).epsilon(1e-13));
  CHECK(h.lc[2] == doctest::Approx(-0.813996304426785201).epsilon(1e-13));
  CHECK_THROWS_AS(mellin_initial_data(1.0), ParamOutOfRange);
  CHECK_THROWS_AS(mellin_initial_data(-0.1), ParamOutOfRange);
}

TEST_CASE("la_direct examples") {
  const double v = la_direct(0.5, -10.0);
  CHECK(std::abs(v / (std::pow(10.0, -0.5) * std::sqrt(pi)) - 1.0) < 3e-3);
  CHECK(la_direct(0.5, 5.0) > std::exp(1.0) * la_direct(0.5, 0.0));
  CHECK(la_direct(0.5, -10.0) == doctest::Approx(0.56015365376619328).epsilon(1e-10));
  CHECK_THROWS_AS(la_direct(0.0, 1.0), ParamOutOfRange);
  CHECK_THROWS_AS(la_direct(0.5, 1.0, 3), ParamOutOfRange);
}

TEST_CASE("langer_eval against high-precision quadrature") {
  for (const auto& r : kRefs) {
    const auto got = flat(langer_eval(0.5, r.th));
    for (int k = 0; k < 9; ++k) {
      INFO("theta2=" << r.th << " component " << k);
      CHECK(std::abs(got[k] - r.v[k]) <= 1e-8 * std::max(std::abs(r.v[k]), 1e-3));
    }
  }
}

TEST_CASE("propagated La against direct quadrature, with shifted derivatives") {
  for (double xi : {0.2, 0.5, 0.8}) {
    const auto th = linspace(-10.0, 10.0, 21);
    const auto ev = langer_grid(xi, th);
    for (const auto& e : ev) {
      CHECK(e.la == doctest::Approx(la_direct(xi, e.theta2, 0)).epsilon(1e-8));
      CHECK(e.la1 == doctest::Approx(la_direct(xi, e.theta2, 1)).epsilon(1e-8));
      CHECK(e.la2 == doctest::Approx(la_direct(xi, e.theta2, 2)).epsilon(1e-8));
    }
  }
}

TEST_CASE("contour quadrature continues the propagated oscillatory pair") {
  LangerConfig ode_only;
  ode_only.contour_from = 1e9;
  for (double th : {1.0, 3.0}) {
    const auto a = langer_eval(0.5, th), b = langer_eval(0.5, th, ode_only);
    CHECK(a.lb == doctest::Approx(b.lb).epsilon(1e-8));
    CHECK(a.lc1 == doctest::Approx(b.lc1).epsilon(1e-8));
  }
  CHECK_THROWS_AS(oscillatory_contour(0.5, -1.0, Which::Lb, 0), ParamOutOfRange);
}

TEST_CASE("Wronskian") {
  for (double xi : {0.2, 0.5, 0.8}) {
    const auto th = linspace(-10.0, 10.0, 41);
    const auto ev = langer_grid(xi, th);
    const auto d = mellin_initial_data(xi);
    const double w0 = d.la[0] * (d.lb[1] * d.lc[2] - d.lb[2] * d.lc[1]) -
                      d.lb[0] * (d.la[1] * d.lc[2] - d.la[2] * d.lc[1]) +
                      d.lc[0] * (d.la[1] * d.lb[2] - d.la[2] * d.lb[1]);
    CHECK(std::abs(w0) > 1e-6);
    CHECK(wronskian(xi, 0.0) == doctest::Approx(w0).epsilon(1e-13));
    for (const auto& e : ev) CHECK(std::abs(wronskian(e) / w0 - 1.0) < 1e-8);
    CHECK(std::abs(wronskian(xi, -5.0) / wronskian(xi, 5.0) - 1.0) < 1e-8);
  }
}

TEST_CASE("ODE residual along the propagated solution") {
  // y''' from a centered difference of y'' against the ODE
  const double h = 1e-3;
  for (double th : {-7.0, -2.0, 0.5, 4.0}) {
    const auto m = langer_eval(0.5, th - h), p = langer_eval(0.5, th + h), c = langer_eval(0.5, th);
    const auto fm = flat(m), fp = flat(p), fc = flat(c);
    for (int j = 0; j < 3; ++j) {
      const double y3 = (fp[3 * j + 2] - fm[3 * j + 2]) / (2 * h);
      const double rhs = th * fc[3 * j + 1] + 0.5 * fc[3 * j];
      CHECK(std::abs(y3 - rhs) < 1e-5 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("Airy square lies in the span at xi = 1/2") {
  const auto th = linspace(-10.0, 10.0, 81);
  CHECK(airy_square_residual(th) < 1e-8);
}

TEST_CASE("asymptotics") {
  // plus side: relative error of the La formula shrinks
  double prev = 1e300;
  for (double th : {10.0, 15.0, 20.0, 25.0}) {
    const double rel = std::abs(asymptotic(0.5, th, Which::La, Side::Plus) / langer_eval(0.5, th).la - 1.0);
    CHECK(rel < prev);
    prev = rel;
  }
  // minus side: O(theta^-3)
  const double e15 = std::abs(asymptotic(0.5, -15.0, Which::La, Side::Minus) / la_direct(0.5, -15.0) - 1.0);
  CHECK(e15 < 2.0 * std::pow(15.0, -3.0));
  CHECK_THROWS_AS(asymptotic(0.5, 5.0, Which::La, Side::Minus), ParamOutOfRange);
  CHECK_THROWS_AS(asymptotic(0.5, 0.5, Which::La, Side::Plus), ParamOutOfRange);

  // Lb, Lc envelope on the minus side: fit log|peak| against log(-theta)
  for (double xi : {0.3, 0.5, 0.7}) {
    const auto th = linspace(-25.0, -3.0, 4401);
    const auto ev = langer_grid(xi, th);
    for (int which = 0; which < 2; ++which) {
      std::vector<double> lx, ly;
      for (std::size_t i = 1; i + 1 < ev.size(); ++i) {
        // subtract the non-oscillatory sin(xi pi) La part carried by Lb
        auto f = [&](std::size_t j) {
          return which == 0 ? ev[j].lb - std::sin(xi * pi) * ev[j].la : ev[j].lc;
        };
        const double a = std::abs(f(i - 1)), b = std::abs(f(i)), c = std::abs(f(i + 1));
        if (b > a && b >= c) {
          lx.push_back(std::log(-th[i]));
          ly.push_back(std::log(b));
        }
      }
      REQUIRE(lx.size() > 5);
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
      mx /= lx.size();
      my /= ly.size();
      double sxy = 0, sxx = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
      const double expo = (1.0 - xi) / 2.0 - 0.75;
      CHECK(std::abs(sxy / sxx / expo - 1.0) < 0.1);
      CHECK(expo < 0.0);
    }
  }
}

TEST_CASE("La is positive and log-convex") {
  for (double xi : {0.2, 0.5, 0.8}) {
    const auto ev = langer_grid(xi, linspace(-20.0, 20.0, 161));
    for (const auto& e : ev) {
      CHECK(e.la > 0.0);
      CHECK(e.la * e.la2 - e.la1 * e.la1 >= 0.0);
    }
  }
}

TEST_CASE("oscillation on the minus side") {
  const auto ev = langer_grid(0.5, linspace(-30.0, 0.0, 3001));
  std::vector<double> la, lb, lc;
  for (const auto& e : ev) {
    la.push_back(e.la);
    lb.push_back(e.lb);
    lc.push_back(e.lc);
  }
  CHECK(sign_changes(la) == 0);
  CHECK(sign_changes(lb) >= 3);
  CHECK(sign_changes(lc) >= 3);
}

TEST_CASE("exponential growth rate of La") {
  for (double th : {10.0, 20.0, 30.0}) {
    const double r = std::log(langer_eval(0.5, th).la) / std::pow(th, 1.5);
    CHECK(std::abs(r / (2.0 / 3.0) - 1.0) < 0.05);
  }
}

TEST_CASE("parameter checks") {
  CHECK_THROWS_AS(langer_eval(1.0, 0.0), ParamOutOfRange);
  CHECK_THROWS_AS(langer_eval(0.0, 0.0), ParamOutOfRange);
  CHECK_THROWS_AS(langer_eval(0.5, NAN), ParamOutOfRange);
}
