#include "painleve/compliant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace painleve {

double normal_force_scaled(double y2, double w2, double delta) {
  if (y2 > 0.0) return 0.0;  // free flight
  return std::max(-y2 - delta * w2, 0.0);
}

ScaledVec slowfast_vf(const CompliantState& st, const ModelParams& prm, double eps) {
  const double f = normal_force_scaled(st.y2, st.w2, prm.delta);
  const double b = b_fn(st.theta, st.phi);
  return {st.w2, b + p_plus(st.theta, prm) * f, eps * st.phi, eps * c_plus(st.theta, prm) * f};
}

FullVec full_compliant_vf(const FullVec& s, const ModelParams& prm, double eps) {
  if (!(s[1] > 0.0)) {
    std::ostringstream os;
    os << "v=" << s[1] << " is not positive";
    throw BranchViolation(os.str());
  }
  // F_N = [eps^-1 F(eps^-1 y, w)] with F(yhat, w) = -yhat - delta w
  double fn = 0.0;
  if (s[2] <= 0.0) fn = std::max((-s[2] / eps - prm.delta * s[3]) / eps, 0.0);
  const Coefficients k = coefficient_functions(s[4], s[5], prm, Branch::Plus);
  return {s[1], k.a + k.q * fn, s[3], k.b + k.p * fn, s[5], k.c * fn};
}

double critical_manifold_point(double theta, double phi, const ModelParams& prm, double p_tol) {
  const double p = p_plus(theta, prm);
  if (std::abs(p) < p_tol) {
    std::ostringstream os;
    os << "|p+(" << theta << ")| below " << p_tol;
    throw SingularP(os.str());
  }
  return b_fn(theta, phi) / p;
}

std::pair<double, double> slow_manifold_first_order(double theta, double phi,
                                                    const ModelParams& prm, double eps) {
  const double p = p_plus(theta, prm);
  const double g = critical_manifold_point(theta, phi, prm);
  const double s = std::sin(theta), c = std::cos(theta);
  const double g_th = (phi * phi * c * p - b_fn(theta, phi) * p_plus_prime(theta, prm)) / (p * p);
  const double g_ph = 2.0 * phi * s / p;
  const double dg = phi * g_th + c_plus(theta, prm) * (-g) * g_ph;
  const double w2 = eps * dg;
  return {g - prm.delta * w2, w2};
}

namespace {

std::pair<double, double> graph_level(double th, double ph, const ModelParams& prm, double eps,
                                      int k) {
  const double p = p_plus(th, prm);
  const double b = b_fn(th, ph);
  if (k == 0) return {b / p, 0.0};
  const auto [y0, w0] = graph_level(th, ph, prm, eps, k - 1);
  const double hd = 1e-4;
  const auto tp = graph_level(th + hd, ph, prm, eps, k - 1);
  const auto tm = graph_level(th - hd, ph, prm, eps, k - 1);
  const auto pp = graph_level(th, ph + hd, prm, eps, k - 1);
  const auto pm = graph_level(th, ph - hd, prm, eps, k - 1);
  const double f = -y0 - prm.delta * w0;
  const double dth = ph, dph = c_plus(th, prm) * f;
  const double dy = dth * (tp.first - tm.first) / (2 * hd) + dph * (pp.first - pm.first) / (2 * hd);
  const double dw =
      dth * (tp.second - tm.second) / (2 * hd) + dph * (pp.second - pm.second) / (2 * hd);
  const double w = eps * dy;
  return {(b - eps * dw) / p - prm.delta * w, w};
}

}  // namespace

std::pair<double, double> slow_manifold_point(double theta, double phi, const ModelParams& prm,
                                              double eps, int order) {
  if (order < 0 || order > 4) throw ParamOutOfRange("slow manifold order must be in [0,4]");
  (void)critical_manifold_point(theta, phi, prm);  // SingularP guard
  return graph_level(theta, phi, prm, eps, order);
}

LayerClassification layer_classification_p(double p, double delta) {
  // lambda^2 + p delta lambda + p = 0
  const std::complex<double> disc = p * p * delta * delta - 4.0 * p;
  const std::complex<double> sq = std::sqrt(disc);
  LayerClassification lc{0.5 * (-p * delta + sq), 0.5 * (-p * delta - sq),
                         LayerKind::AttractingFocus};
  if (std::abs(p) < kBTTol) {
    lc.kind = LayerKind::BogdanovTakens;
  } else if (p < 0.0) {
    lc.kind = LayerKind::SaddleType;
  } else if (disc.real() < 0.0) {
    lc.kind = LayerKind::AttractingFocus;
  } else {
    lc.kind = LayerKind::AttractingNode;
  }
  return lc;
}

LayerClassification layer_classification(double theta, const ModelParams& prm) {
  return layer_classification_p(p_plus(theta, prm), prm.delta);
}

const char* to_string(LayerKind k) {
  switch (k) {
    case LayerKind::AttractingFocus: return "AttractingFocus";
    case LayerKind::AttractingNode: return "AttractingNode";
    case LayerKind::SaddleType: return "SaddleType";
    case LayerKind::BogdanovTakens: return "BogdanovTakens";
  }
  return "?";
}

}  // namespace painleve
