#include "painleve/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace painleve {

void ModelParams::validate() const {
  if (!(alpha > 0.0) || !(mu >= 0.0) || !(delta >= 0.0) || !std::isfinite(alpha) ||
      !std::isfinite(mu) || !std::isfinite(delta)) {
    throw ParamOutOfRange("need alpha > 0, mu >= 0, delta >= 0");
  }
}

Coefficients coefficient_functions(double theta, double phi, const ModelParams& prm,
                                   Branch branch) {
  const double sg = branch == Branch::Plus ? 1.0 : -1.0;
  const double s = std::sin(theta), c = std::cos(theta);
  const double al = prm.alpha, mu = prm.mu;
  return {-phi * phi * c,
          -1.0 + phi * phi * s,
          al * s * c - sg * mu * (1.0 + al * s * s),
          1.0 + al * c * c - sg * mu * al * s * c,
          -al * (c - sg * mu * s)};
}

double b_fn(double theta, double phi) { return -1.0 + phi * phi * std::sin(theta); }

double p_plus(double theta, const ModelParams& prm) {
  const double s = std::sin(theta), c = std::cos(theta);
  return 1.0 + prm.alpha * c * c - prm.mu * prm.alpha * s * c;
}

double p_plus_prime(double theta, const ModelParams& prm) {
  return -prm.alpha * std::sin(2 * theta) - prm.mu * prm.alpha * std::cos(2 * theta);
}

double q_plus(double theta, const ModelParams& prm) {
  const double s = std::sin(theta), c = std::cos(theta);
  return prm.alpha * s * c - prm.mu * (1.0 + prm.alpha * s * s);
}

double c_plus(double theta, const ModelParams& prm) {
  return -prm.alpha * (std::cos(theta) - prm.mu * std::sin(theta));
}

double mu_P(double alpha) { return 2.0 / alpha * std::sqrt(1.0 + alpha); }

double mu_C(double alpha) { return 4.0 / alpha * std::sqrt((alpha + 1.0) / 3.0); }

CriticalData critical_data(const ModelParams& prm) {
  prm.validate();
  const double al = prm.alpha, mu = prm.mu;
  const double disc = mu * mu * al * al - 4.0 * (1.0 + al);
  if (!(mu > mu_P(al)) || !(disc > 0.0)) {
    std::ostringstream os;
    os << "mu=" << mu << " is not above mu_P(" << al << ")=" << mu_P(al);
    throw ParamOutOfRange(os.str());
  }
  CriticalData cd{};
  cd.mu_P = mu_P(al);
  cd.mu_C = mu_C(al);
  const double sq = std::sqrt(disc);
  cd.theta1 = std::atan(0.5 * (mu * al - sq));
  cd.theta2_crit = std::atan(0.5 * (mu * al + sq));
  cd.phi1_plus = std::sqrt(1.0 / std::sin(cd.theta1));
  cd.lambda1 = p_plus_prime(cd.theta1, prm) * cd.phi1_plus;
  cd.lambda2 = -2.0 * std::tan(cd.theta1) * cd.phi1_plus;
  cd.xi = cd.lambda2 / cd.lambda1;
  cd.s = -cd.phi1_plus * cd.phi1_plus / cd.lambda1;
  return cd;
}

RigidVec rigid_slip_vf(const RigidState& st, const ModelParams& prm, double p_tol) {
  const Coefficients k = coefficient_functions(st.theta, st.phi, prm, Branch::Plus);
  if (std::abs(k.p) < p_tol) {
    std::ostringstream os;
    os << "|p+(" << st.theta << ")| = " << std::abs(k.p) << " below " << p_tol;
    throw SingularP(os.str());
  }
  const double fn = -k.b / k.p;
  return {st.v, k.a + k.q * fn, 0.0, 0.0, st.phi, k.c * fn};
}

RigidVec rigid_free_vf(const RigidState& st, const ModelParams& prm) {
  const Coefficients k = coefficient_functions(st.theta, st.phi, prm, Branch::Plus);
  return {st.v, k.a, st.w, k.b, st.phi, 0.0};
}

StickForces stick_forces(double theta, double phi, const ModelParams& prm) {
  // x'' = 0 and y'' = 0 from the scaled rod equations, unknowns (F_N, F_T):
  //   al s c F_N - (1 + al s^2) F_T = phi^2 c
  //   (1 + al c^2) F_N - al s c F_T = 1 - phi^2 s
  const double s = std::sin(theta), c = std::cos(theta), al = prm.alpha;
  const double m11 = al * s * c, m12 = -(1.0 + al * s * s);
  const double m21 = 1.0 + al * c * c, m22 = -al * s * c;
  const double r1 = phi * phi * c, r2 = 1.0 - phi * phi * s;
  const double det = m11 * m22 - m12 * m21;  // = 1 + alpha
  if (std::abs(det) < 1e-12) throw DegenerateSystem("stick force matrix is singular");
  const double fn = (r1 * m22 - m12 * r2) / det;
  const double ft = (m11 * r2 - m21 * r1) / det;
  return {fn, ft, fn >= 0.0 && std::abs(ft) <= prm.mu * fn};
}

RigidVec rigid_stick_vf(const RigidState& st, const ModelParams& prm) {
  const StickForces f = stick_forces(st.theta, st.phi, prm);
  const double phidot =
      -prm.alpha * (std::cos(st.theta) * f.F_N - std::sin(st.theta) * f.F_T);
  return {0.0, 0.0, 0.0, 0.0, st.phi, phidot};
}

ode::State<2> desingularized_vf(double theta, double phi, const ModelParams& prm) {
  return {p_plus(theta, prm) * phi, -c_plus(theta, prm) * b_fn(theta, phi)};
}

namespace {

ode::IntegratorConfig tight() {
  ode::IntegratorConfig c;
  c.rtol = 1e-12;
  c.atol = 1e-14;
  return c;
}

}  // namespace

SingularCanard::SingularCanard(const ModelParams& prm, double theta_lo, double theta_hi,
                               double seed_offset)
    : prm_(prm), cd_(critical_data(prm)), lo_(theta_lo), hi_(theta_hi) {
  if (!(cd_.xi > 0.0 && cd_.xi < 1.0)) {
    std::ostringstream os;
    os << "xi=" << cd_.xi << " outside (0,1); need mu > mu_C=" << cd_.mu_C;
    throw ParamOutOfRange(os.str());
  }
  if (!(seed_offset > 0.0 && seed_offset < 1e-2)) {
    throw ParamOutOfRange("seed_offset must be small and positive");
  }
  if (!(theta_lo < cd_.theta1 && theta_hi > cd_.theta1 && theta_lo > 0.0 &&
        theta_hi < cd_.theta2_crit)) {
    throw ParamOutOfRange("theta range must contain theta1 inside (0, theta2_crit)");
  }
  const double vx = 1.0 - cd_.xi, vy = cd_.s;
  const double nrm = std::hypot(vx, vy);
  const double dth = seed_offset * vx / nrm;
  th_left_ = cd_.theta1 - dth;
  th_right_ = cd_.theta1 + dth;
  auto rhs = [this](double th, const ode::State<1>& y) -> ode::State<1> {
    return {-c_plus(th, prm_) * b_fn(th, y[0]) / (p_plus(th, prm_) * y[0])};
  };
  const auto cfg = tight();
  left_ = ode::integrate<1>(rhs, {cd_.phi1_plus - seed_offset * vy / nrm}, th_left_, lo_, cfg);
  right_ = ode::integrate<1>(rhs, {cd_.phi1_plus + seed_offset * vy / nrm}, th_right_, hi_, cfg);
}

double SingularCanard::operator()(double theta) const {
  if (theta <= th_left_) return left_.at(theta)[0];
  if (theta >= th_right_) return right_.at(theta)[0];
  // inside the seed gap the curve is the eigenvector line to O(offset^2)
  return cd_.phi1_plus + cd_.canard_slope() * (theta - cd_.theta1);
}

std::vector<std::pair<double, double>> SingularCanard::table(std::size_t n) const {
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double th = n == 1 ? lo_ : lo_ + (hi_ - lo_) * static_cast<double>(i) / (n - 1);
    out.emplace_back(th, (*this)(th));
  }
  return out;
}

std::vector<std::pair<double, double>> singular_canard(const ModelParams& prm, double theta_lo,
                                                       double theta_hi, std::size_t n,
                                                       double seed_offset) {
  return SingularCanard(prm, theta_lo, theta_hi, seed_offset).table(n);
}

double slip_terminal_velocity(const ModelParams& prm, double theta, double phi, double v0,
                              double b_tol) {
  const CriticalData cd = critical_data(prm);
  if (!(b_fn(theta, phi) < 0.0) || !(p_plus(theta, prm) > 0.0) || !(theta < cd.theta1)) {
    throw ParamOutOfRange("initial point must lie in the slip region left of P");
  }
  // state (theta, phi, I) with I' = q+ b; the p+ a term of dv/dtau is of
  // higher order near P and dropped, as in the leading-order predictor.
  auto rhs = [&prm](double, const ode::State<3>& y) -> ode::State<3> {
    const double b = b_fn(y[0], y[1]);
    return {p_plus(y[0], prm) * y[1], -c_plus(y[0], prm) * b, q_plus(y[0], prm) * b};
  };
  std::vector<ode::Event<3>> ev{
      {[b_tol](double, const ode::State<3>& y) { return std::abs(b_fn(y[0], y[1])) - b_tol; },
       ode::Direction::Falling, true},
      {[](double, const ode::State<3>& y) { return b_fn(y[0], y[1]); }, ode::Direction::Rising,
       true}};
  auto cfg = tight();
  cfg.dense = false;
  cfg.max_steps = 200000;
  const auto tr = ode::integrate<3>(rhs, {theta, phi, 0.0}, 0.0, 1e6, cfg, ev);
  const auto& y = tr.final_state();
  const double dist = std::hypot(y[0] - cd.theta1, y[1] - cd.phi1_plus);
  if (!tr.stopped_by_event || tr.events.back().id != 0 || dist > 1e-3) {
    std::ostringstream os;
    os << "trajectory left the node basin at (" << y[0] << ", " << y[1] << ")";
    throw NonConvergent(os.str());
  }
  return v0 - y[2];
}

}  // namespace painleve
