#pragma once

#include <complex>

#include "painleve/model.hpp"

namespace painleve {

struct CompliantState {
  double y2 = 0, w2 = 0, theta = 0, phi = 0;
};

// Extended state in unscaled variables: (x, v, y, w, theta, phi).
using FullVec = ode::State<6>;
// Scaled state (y2, w2, theta, phi).
using ScaledVec = ode::State<4>;

inline ScaledVec to_vec(const CompliantState& s) { return {s.y2, s.w2, s.theta, s.phi}; }
inline CompliantState from_vec(const ScaledVec& v) { return {v[0], v[1], v[2], v[3]}; }

double normal_force_scaled(double y2, double w2, double delta);

// Fast-time scaled field (y2', w2', theta', phi').
ScaledVec slowfast_vf(const CompliantState& st, const ModelParams& prm, double eps);

// Unscaled field in slow time with y = eps^2 y2, w = eps w2.
FullVec full_compliant_vf(const FullVec& st, const ModelParams& prm, double eps);

inline constexpr double kBTTol = 1e-9;

double critical_manifold_point(double theta, double phi, const ModelParams& prm,
                               double p_tol = kSingularPTol);

// First-order slow-manifold graph (y2, w2) = (g - delta eps Dg, eps Dg) with
// Dg the derivative of g along the reduced flow. Used to seed near S_a, S_r.
std::pair<double, double> slow_manifold_first_order(double theta, double phi,
                                                    const ModelParams& prm, double eps);

// Slow-manifold graph by functional iteration on the invariance equations
//   W = eps D Y,  eps D W = b + p+ (-Y - delta W),  D = phi d/dtheta + c+ F d/dphi,
// starting from (g, 0); each level gains one power of eps. Derivatives are
// central differences, so keep order <= 3.
std::pair<double, double> slow_manifold_point(double theta, double phi, const ModelParams& prm,
                                              double eps, int order = 3);

enum class LayerKind { AttractingFocus, AttractingNode, SaddleType, BogdanovTakens };

struct LayerClassification {
  std::complex<double> lambda_plus, lambda_minus;
  LayerKind kind;
};

LayerClassification layer_classification_p(double p, double delta);
LayerClassification layer_classification(double theta, const ModelParams& prm);

const char* to_string(LayerKind k);

}  // namespace painleve
