#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "painleve/compliant.hpp"

using namespace painleve;

namespace {

const ModelParams kRef{3.0, 1.6, 1.0};

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("normal force examples") {
  CHECK(normal_force_scaled(-2.0, 0.0, 1.0) == 2.0);
  CHECK(normal_force_scaled(1.0, 0.0, 1.0) == 0.0);
  CHECK(normal_force_scaled(-1.0, 2.0, 1.0) == 0.0);
  // free flight beats a formally positive spring-damper force
  CHECK(normal_force_scaled(0.5, -3.0, 1.0) == 0.0);
}

TEST_CASE("complementarity on random states") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0), dl(0.0, 3.0);
  for (int i = 0; i < 5000; ++i) {
    const double y2 = u(rng), w2 = u(rng), d = dl(rng);
    const double f = normal_force_scaled(y2, w2, d);
    CHECK(f >= 0.0);
    CHECK(f * std::max(y2, 0.0) == 0.0);
  }
}

TEST_CASE("scaled field: equilibria on S_a and the layer limit") {
  for (double th : {0.3, 0.5, 0.7}) {
    for (double ph : {0.5, 1.0}) {
      const double g = critical_manifold_point(th, ph, kRef);
      const auto d = slowfast_vf({g, 0.0, th, ph}, kRef, 1e-2);
      CHECK(d[0] == 0.0);
      CHECK(std::abs(d[1]) < 1e-14);
      const auto z = slowfast_vf({-0.3, 0.2, th, ph}, kRef, 0.0);
      CHECK(z[2] == 0.0);
      CHECK(z[3] == 0.0);
    }
  }
}

TEST_CASE("scaled field against the unscaled equations") {
  // independent coding of the compliant rod equations in (y, w), then the
  // change of variables y = eps^2 y2, w = eps w2, t = eps tau
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uy(-3.0, 1.0), uw(-2.0, 2.0), uth(0.05, 1.5), uph(-2.0, 2.0),
      uv(0.1, 3.0);
  for (double eps : {1e-2, 1e-3}) {
    for (int i = 0; i < 1000; ++i) {
      const double y2 = uy(rng), w2 = uw(rng), th = uth(rng), ph = uph(rng), v = uv(rng);
      const double y = eps * eps * y2, w = eps * w2;
      const double s = std::sin(th), c = std::cos(th), al = kRef.alpha, mu = kRef.mu;
      const double fn = y > 0.0 ? 0.0 : std::max(-y / (eps * eps) - kRef.delta * w / eps, 0.0);
      const double wd = -1.0 + ph * ph * s + (1.0 + al * c * c - mu * al * s * c) * fn;
      const double vd = -ph * ph * c + (al * s * c - mu * (1.0 + al * s * s)) * fn;
      const double phd = -al * (c - mu * s) * fn;

      const auto f = full_compliant_vf({0.0, v, y, w, th, ph}, kRef, eps);
      CHECK(close(f[1], vd, 1e-12));
      CHECK(close(f[3], wd, 1e-12));
      CHECK(close(f[5], phd, 1e-12));
      CHECK(f[0] == v);
      CHECK(f[2] == w);
      CHECK(f[4] == ph);

      // pushforward
      const auto g = slowfast_vf({y2, w2, th, ph}, kRef, eps);
      CHECK(close(g[0], eps * f[2] / (eps * eps), 1e-12));
      CHECK(close(g[1], eps * f[3] / eps, 1e-12));
      CHECK(close(g[2], eps * f[4], 1e-12));
      CHECK(close(g[3], eps * f[5], 1e-12));
    }
  }
}

TEST_CASE("full field in free flight and on S_a") {
  const auto f = full_compliant_vf({0.0, 1.0, 1e-3, 0.2, 0.4, 0.9}, kRef, 1e-2);
  CHECK(f[3] == doctest::Approx(b_fn(0.4, 0.9)).epsilon(1e-15));
  CHECK(f[5] == 0.0);
  // on S_a at (0.5, 1): v' = a + q+ (-g), hand value -1.4587040824575195
  const double eps = 1e-2, g = critical_manifold_point(0.5, 1.0, kRef);
  const auto s = full_compliant_vf({0.0, 1.0, eps * eps * g, 0.0, 0.5, 1.0}, kRef, eps);
  CHECK(s[1] == doctest::Approx(-1.4587040824575195).epsilon(1e-13));
  CHECK(std::abs(s[3]) < 1e-13);
}

TEST_CASE("branch violation for non-positive slip velocity") {
  CHECK_THROWS_AS(full_compliant_vf({0.0, 0.0, -1e-4, 0.0, 0.5, 1.0}, kRef, 1e-2), BranchViolation);
  CHECK_THROWS_AS(full_compliant_vf({0.0, -1.0, -1e-4, 0.0, 0.5, 1.0}, kRef, 1e-2), BranchViolation);
}

TEST_CASE("critical manifold") {
  // b = 0 curve
  const double th = 0.6, ph = std::sqrt(1.0 / std::sin(th));
  CHECK(std::abs(critical_manifold_point(th, ph, kRef)) < 1e-15);
  // in T the contact force -y2 is positive
  const double g = critical_manifold_point(0.5, 1.0, kRef);
  CHECK(g < 0.0);
  CHECK(normal_force_scaled(g, 0.0, kRef.delta) > 0.0);
  // brentq on w2' = 0 (scipy): -0.4032575319985552
  CHECK(g == doctest::Approx(-0.4032575319985552).epsilon(1e-12));
  CHECK_THROWS_AS(critical_manifold_point(critical_data(kRef).theta1, 1.0, kRef), SingularP);
}

TEST_CASE("reduced flow on S_a reproduces the rigid slip flow") {
  const double eps = 1e-3;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double th = 0.05 + 0.7 * i / 19.0, ph = 0.2 + 1.8 * j / 19.0;
      const double g = critical_manifold_point(th, ph, kRef);
      if (g > 0.0) continue;  // contact requires y2 <= 0
      const auto d = slowfast_vf({g, 0.0, th, ph}, kRef, eps);
      RigidState st;
      st.theta = th;
      st.phi = ph;
      st.v = 1.0;
      const auto r = rigid_slip_vf(st, kRef);
      CHECK(std::abs(d[2] / eps - r[4]) <= 1e-12);
      CHECK(std::abs(d[3] / eps - r[5]) <= 1e-12 * std::max(1.0, std::abs(r[5])));
    }
  }
}

TEST_CASE("slow-manifold graph") {
  const double eps = 1e-3, th = 0.5, ph = 1.0;
  const auto z = slow_manifold_point(th, ph, kRef, eps, 0);
  CHECK(z.first == critical_manifold_point(th, ph, kRef));
  CHECK(z.second == 0.0);
  const auto one = slow_manifold_point(th, ph, kRef, eps, 1);
  const auto fo = slow_manifold_first_order(th, ph, kRef, eps);
  CHECK(std::abs(one.first - fo.first) < 1e-9);
  CHECK(std::abs(one.second - fo.second) < 1e-9);
  // successive levels contract by about eps
  double prev = std::abs(one.first - z.first);
  auto last = one;
  for (int k = 2; k <= 3; ++k) {
    const auto cur = slow_manifold_point(th, ph, kRef, eps, k);
    const double d = std::hypot(cur.first - last.first, cur.second - last.second);
    CHECK(d < 0.1 * prev);
    prev = d;
    last = cur;
  }
  CHECK_THROWS_AS(slow_manifold_point(th, ph, kRef, eps, 5), ParamOutOfRange);
}

TEST_CASE("layer classification examples") {
  const auto f = layer_classification_p(1.0, 1.0);
  CHECK(f.kind == LayerKind::AttractingFocus);
  CHECK(f.lambda_plus.real() == doctest::Approx(-0.5));
  CHECK(std::abs(f.lambda_plus.imag()) == doctest::Approx(std::sqrt(3.0) / 2));
  CHECK(f.lambda_minus == std::conj(f.lambda_plus));

  const auto s = layer_classification_p(-1.0, 1.0);
  CHECK(s.kind == LayerKind::SaddleType);
  CHECK(s.lambda_plus.imag() == 0.0);
  CHECK((s.lambda_plus * s.lambda_minus).real() < 0.0);

  const auto n = layer_classification_p(8.0, 1.0);  // 64 - 32 > 0
  CHECK(n.kind == LayerKind::AttractingNode);
  CHECK(n.lambda_plus.real() < 0.0);
  CHECK(n.lambda_minus.real() < 0.0);

  const auto cd = critical_data(kRef);
  const auto bt = layer_classification(cd.theta1, kRef);
  CHECK(bt.kind == LayerKind::BogdanovTakens);
  CHECK(std::abs(bt.lambda_plus) < 1e-7);
  CHECK(std::abs(bt.lambda_minus) < 1e-7);
  CHECK(std::string(to_string(LayerKind::SaddleType)) == "SaddleType");
}

TEST_CASE("layer kinds across the theta range") {
  const auto cd = critical_data(kRef);
  for (int i = 1; i < 2000; ++i) {
    const double th = 0.5 * std::numbers::pi * i / 2000;
    const auto lc = layer_classification(th, kRef);
    const double p = p_plus(th, kRef);
    if (std::abs(p) < kBTTol) continue;
    const bool saddle = th > cd.theta1 && th < cd.theta2_crit;
    CHECK((lc.kind == LayerKind::SaddleType) == saddle);
    if (lc.kind == LayerKind::SaddleType) CHECK((lc.lambda_plus * lc.lambda_minus).real() < 0.0);
  }
}

TEST_CASE("spectral continuity through theta1") {
  const auto cd = critical_data(kRef);
  const double pp = std::abs(p_plus_prime(cd.theta1, kRef));
  // leading order |lambda| ~ sqrt(|p+'| dtheta)
  for (double dt : {1e-6, -1e-6, 1e-8, -1e-8}) {
    const auto lc = layer_classification(cd.theta1 + dt, kRef);
    const double lead = std::sqrt(pp * std::abs(dt));
    CHECK(std::abs(lc.lambda_plus) / lead == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(std::abs(lc.lambda_minus) / lead == doctest::Approx(1.0).epsilon(1e-2));
  }
  // no jumps on a fine grid across theta1: spectra move by O(sqrt h)
  const double h = 1e-6;
  auto spectrum = [&](double th) {
    const auto lc = layer_classification(th, kRef);
    auto a = lc.lambda_plus, b = lc.lambda_minus;
    if (a.real() > b.real() || (a.real() == b.real() && a.imag() > b.imag())) std::swap(a, b);
    return std::pair{a, b};
  };
  auto prev = spectrum(cd.theta1 - 200 * h);
  for (int i = -199; i <= 200; ++i) {
    const auto cur = spectrum(cd.theta1 + i * h);
    // match pairs up to order
    const double d1 = std::max(std::abs(cur.first - prev.first), std::abs(cur.second - prev.second));
    const double d2 = std::max(std::abs(cur.first - prev.second), std::abs(cur.second - prev.first));
    CHECK(std::min(d1, d2) < 4.0 * std::sqrt(pp * h));
    prev = cur;
  }
}
