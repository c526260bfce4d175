#include "painleve/langer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "painleve/errors.hpp"
#include "painleve/odeint.hpp"

namespace painleve::langer {

namespace {

using std::numbers::pi;
using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

constexpr double kQuadTol = 1e-12;
constexpr unsigned kQuadDepth = 15;

void check_xi_open(double xi) {
  if (!(xi > 0.0 && xi < 1.0)) {
    std::ostringstream os;
    os << "xi=" << xi << " outside (0,1)";
    throw ParamOutOfRange(os.str());
  }
}

void check_quad(double v, double err, double l1, double a, double b) {
  if (!std::isfinite(v) || err > 1e-10 * std::max(l1, 1e-300)) {
    std::ostringstream os;
    os << "on [" << a << ", " << b << "]: estimate " << v << " error " << err;
    throw QuadratureFailure(os.str());
  }
}

// Endpoint pieces with algebraic behaviour u^q at 0 go to tanh-sinh.
template <class F>
double quad_endpoint(F f, double a, double b) {
  if (!(b > a)) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> ts(12);
  double err = 0.0, l1 = 0.0;
  const double v = ts.integrate(f, a, b, kQuadTol, &err, &l1);
  check_quad(v, err, l1, a, b);
  return v;
}

template <class F>
double quad(F f, double a, double b) {
  if (!(b > a)) return 0.0;
  double err = 0.0, l1 = 0.0;
  const double v = GK::integrate(f, a, b, kQuadDepth, kQuadTol, &err, &l1);
  check_quad(v, err, l1, a, b);
  return v;
}

// Re[e^{i(shift + k) pi/2} int_0^inf tau^{k - xi} e^{i tau^3/3} dtau] via
// int_0^inf tau^{s-1} e^{i tau^3/3} = 3^{s/3-1} Gamma(s/3) e^{i pi s/6}.
double mellin_osc(double xi, int k, double shift) {
  const double s = k + 1.0 - xi;
  const double mag = std::pow(3.0, s / 3.0 - 1.0) * std::tgamma(s / 3.0);
  return mag * std::cos((shift + k) * pi / 2.0 + pi * s / 6.0);
}

// 9-component companion system, three solutions side by side.
using Vec9 = ode::State<9>;

Vec9 companion(double th, const Vec9& y, double one_minus_xi) {
  Vec9 d;
  for (int j = 0; j < 3; ++j) {
    d[3 * j] = y[3 * j + 1];
    d[3 * j + 1] = y[3 * j + 2];
    d[3 * j + 2] = th * y[3 * j + 1] + one_minus_xi * y[3 * j];
  }
  return d;
}

ode::IntegratorConfig ode_cfg(const LangerConfig& cfg) {
  ode::IntegratorConfig c;
  c.rtol = cfg.rtol;
  c.atol = cfg.atol;
  c.dense = false;
  return c;
}

double asym_value(double xi, double th, Which which) {
  const double a = (1.0 - xi) / 2.0 - 0.75;
  if (th > 0.0) {
    const double e = 2.0 * std::pow(th, 1.5) / 3.0;
    switch (which) {
      case Which::La: return std::sqrt(pi) * std::pow(th, a) * std::exp(e);
      case Which::Lb: return 0.5 * std::sqrt(pi) * std::pow(th, a) * std::exp(-e);
      case Which::Lc: return std::sin(xi * pi) * std::pow(th, -(1.0 - xi)) * std::tgamma(1.0 - xi);
    }
  }
  const double x = -th;
  const double ph = 2.0 * std::pow(x, 1.5) / 3.0 + pi / 4.0;
  switch (which) {
    case Which::La: return std::pow(x, -(1.0 - xi)) * std::tgamma(1.0 - xi);
    case Which::Lb:
      return std::sqrt(pi) * std::pow(x, a) * std::sin(ph - xi * pi / 2.0) +
             std::sin(xi * pi) * la_direct(xi, th);
    case Which::Lc: return std::sqrt(pi) * std::pow(x, a) * std::sin(ph + xi * pi / 2.0);
  }
  return 0.0;
}

std::array<double, 3> asym_triple(double xi, double th, Which which) {
  const double h = 1e-2;
  double f[5];
  for (int i = 0; i < 5; ++i) f[i] = asym_value(xi, th + (i - 2) * h, which);
  return {f[2], (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h),
          (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)};
}

}  // namespace

InitialData mellin_initial_data(double xi) {
  if (!(xi >= 0.0 && xi < 1.0)) {
    std::ostringstream os;
    os << "xi=" << xi << " outside [0,1)";
    throw ParamOutOfRange(os.str());
  }
  InitialData d{};
  for (int k = 0; k < 3; ++k) {
    const double s = k + 1.0 - xi;
    d.la[k] = std::pow(3.0, s / 3.0 - 1.0) * std::tgamma(s / 3.0);
    d.lb[k] = mellin_osc(xi, k, xi);
    d.lc[k] = mellin_osc(xi, k, -xi);
  }
  return d;
}

double la_direct(double xi, double theta2, int k) {
  check_xi_open(xi);
  if (k < 0 || k > 2) throw ParamOutOfRange("derivative order must be 0, 1 or 2");
  const double p = 1.0 / (1.0 - xi);
  const double ex = p * (k + 1.0 - xi) - 1.0;
  // [0,1] with tau = u^p removes the tau^-xi endpoint singularity
  const double head = quad_endpoint(
      [&](double u) {
        if (u <= 0.0) return ex == 0.0 ? p : 0.0;
        const double tau = std::pow(u, p);
        return p * std::pow(u, ex) * std::exp(-tau * tau * tau / 3.0 + theta2 * tau);
      },
      0.0, 1.0);
  auto logf = [&](double tau) {
    return -tau * tau * tau / 3.0 + theta2 * tau + (k - xi) * std::log(tau);
  };
  const double peak = theta2 > 1.0 ? std::sqrt(theta2) : 1.0;
  const double logmax = std::max(logf(1.0), logf(peak));
  double tmax = std::max(2.0, 1.5 * peak);
  while (logf(tmax) > logmax - 50.0) tmax *= 1.25;
  auto f = [&](double tau) { return std::exp(logf(tau)); };
  return head + quad(f, 1.0, peak) + quad(f, peak, tmax);
}

double oscillatory_contour(double xi, double theta2, Which which, int k) {
  check_xi_open(xi);
  if (!(theta2 > 0.0)) throw ParamOutOfRange("contour representation needs theta2 > 0");
  if (which == Which::La) throw ParamOutOfRange("La has no contour branch here");
  const double T = std::pow(theta2, 1.5);
  const std::complex<double> rot = which == Which::Lb ? std::polar(1.0, xi * pi) : 1.0;
  // steepest descent path through the saddle -1 of -z^3/3 + z
  auto integrand = [&](double v) {
    const double q = std::sqrt(1.0 + v * v / 3.0);
    const std::complex<double> z(-q, v), dz(-v / (3.0 * q), 1.0);
    const double re_f = (-z * z * z / 3.0 + z).real();
    const std::complex<double> val =
        std::exp(T * re_f) * std::exp(-xi * std::log(z)) * dz * std::pow(z, k) * rot;
    return val.imag();
  };
  auto re_f_at = [](double v) {
    const double q = std::sqrt(1.0 + v * v / 3.0);
    const std::complex<double> z(-q, v);
    return (-z * z * z / 3.0 + z).real();
  };
  double vmax = 1.0;
  while (T * (re_f_at(vmax) + 2.0 / 3.0) > -60.0) vmax *= 1.5;
  const double w = 1.0 / std::sqrt(T);
  double sum = 0.0, a = 0.0;
  for (double b : {w, 4 * w, vmax}) {
    b = std::min(b, vmax);
    sum += quad(integrand, a, b);
    a = b;
  }
  if (which == Which::Lc) {
    const double p = 1.0 / (1.0 - xi);
    const double ex = p * (k + 1.0 - xi) - 1.0;
    const double sg = k % 2 == 0 ? 1.0 : -1.0;
    auto g = [&](double u) {
      if (u <= 0.0) return ex == 0.0 ? p : 0.0;
      const double x = std::pow(u, p);
      return sg * p * std::pow(u, ex) * std::exp(T * (x * x * x / 3.0 - x));
    };
    const double uc = std::min(1.0, std::pow(5.0 / T, 1.0 - xi));
    sum += std::sin(xi * pi) * (quad_endpoint(g, 0.0, uc) + quad(g, uc, 1.0));
  }
  return std::pow(theta2, (1.0 - xi + k) / 2.0) * sum;
}

double asymptotic(double xi, double theta2, Which which, Side side) {
  check_xi_open(xi);
  if (std::abs(theta2) < 1.0 || (side == Side::Plus) != (theta2 > 0.0)) {
    throw ParamOutOfRange("asymptotic branch needs |theta2| >= 1 on the requested side");
  }
  return asym_value(xi, theta2, which);
}

std::vector<LangerEval> langer_grid(double xi, std::span<const double> thetas,
                                    const LangerConfig& cfg) {
  check_xi_open(xi);
  const InitialData d0 = mellin_initial_data(xi);
  const Vec9 y0{d0.la[0], d0.la[1], d0.la[2], d0.lb[0], d0.lb[1],
                d0.lb[2], d0.lc[0], d0.lc[1], d0.lc[2]};
  const double om = 1.0 - xi;
  auto rhs = [om](double th, const Vec9& y) { return companion(th, y, om); };
  const auto ocfg = ode_cfg(cfg);

  std::vector<LangerEval> out(thetas.size());
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double th = thetas[i];
    if (!std::isfinite(th)) throw ParamOutOfRange("theta2 must be finite");
    if (std::abs(th) > cfg.switch_radius) {
      const auto a = asym_triple(xi, th, Which::La);
      const auto b = asym_triple(xi, th, Which::Lb);
      const auto c = asym_triple(xi, th, Which::Lc);
      out[i] = {xi, th, a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2]};
    } else if (th >= 0.0) {
      pos.push_back(i);
    } else {
      neg.push_back(i);
    }
  }
  std::sort(pos.begin(), pos.end(), [&](auto a, auto b) { return thetas[a] < thetas[b]; });
  std::sort(neg.begin(), neg.end(), [&](auto a, auto b) { return thetas[a] > thetas[b]; });

  for (const auto* idx : {&pos, &neg}) {
    double t = 0.0;
    Vec9 y = y0;
    for (std::size_t i : *idx) {
      const double th = thetas[i];
      if (th != t) {
        y = ode::integrate<9>(rhs, y, t, th, ocfg).final_state();
        t = th;
      }
      LangerEval e{xi, th, y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7], y[8]};
      if (th >= cfg.contour_from) {
        e.lb = oscillatory_contour(xi, th, Which::Lb, 0);
        e.lb1 = oscillatory_contour(xi, th, Which::Lb, 1);
        e.lb2 = oscillatory_contour(xi, th, Which::Lb, 2);
        e.lc = oscillatory_contour(xi, th, Which::Lc, 0);
        e.lc1 = oscillatory_contour(xi, th, Which::Lc, 1);
        e.lc2 = oscillatory_contour(xi, th, Which::Lc, 2);
      }
      out[i] = e;
    }
  }
  return out;
}

LangerEval langer_eval(double xi, double theta2, const LangerConfig& cfg) {
  const double th[1] = {theta2};
  return langer_grid(xi, th, cfg).front();
}

double wronskian(const LangerEval& e) {
  // columns (La, Lb, Lc), rows (value, first, second derivative)
  return e.la * (e.lb1 * e.lc2 - e.lb2 * e.lc1) - e.lb * (e.la1 * e.lc2 - e.la2 * e.lc1) +
         e.lc * (e.la1 * e.lb2 - e.la2 * e.lb1);
}

double wronskian(double xi, double theta2, const LangerConfig& cfg) {
  return wronskian(langer_eval(xi, theta2, cfg));
}

double airy_square_residual(std::span<const double> thetas, const LangerConfig& cfg) {
  const double xi = 0.5;
  const auto ev = langer_grid(xi, thetas, cfg);
  const double k = std::pow(2.0, -2.0 / 3.0);
  const Eigen::Index n = static_cast<Eigen::Index>(thetas.size());
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& e = ev[static_cast<std::size_t>(i)];
    A(i, 0) = e.la;
    A(i, 1) = e.lb;
    A(i, 2) = e.lc;
    const double ai = boost::math::airy_ai(k * e.theta2);
    rhs(i) = ai * ai;
  }
  Eigen::Vector3d scale = A.colwise().norm().transpose();
  for (int j = 0; j < 3; ++j) A.col(j) /= scale(j);
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(rhs);
  return (A * c - rhs).cwiseAbs().maxCoeff();
}

}  // namespace painleve::langer
