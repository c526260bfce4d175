#pragma once

// Dormand-Prince 5(4) with PI step control, DOPRI5 dense output and
// bisection event location. Header-only because it is templated on the
// state dimension.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "painleve/errors.hpp"

namespace painleve::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 0.0;      // 0: automatic
  double h_max = 0.0;       // 0: no bound beyond the span
  double fixed_step = 0.0;  // > 0: constant steps without error control
  double event_tol = 1e-12;
  std::size_t max_steps = 5'000'000;
  bool dense = true;

  void validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0) || !(event_tol > 0.0) || max_steps == 0 ||
        h_init < 0.0 || h_max < 0.0 || fixed_step < 0.0) {
      throw ParamOutOfRange("integrator tolerances and budgets must be positive");
    }
  }
};

// Direction is measured along the integration, so for a backward run
// "Rising" means g increases as the solver advances toward t1.
enum class Direction { Rising, Falling, Either };

template <std::size_t N>
struct Event {
  std::function<double(double, const State<N>&)> g;
  Direction direction = Direction::Either;
  bool terminal = false;
};

template <std::size_t N>
struct EventHit {
  double t;
  State<N> y;
  std::size_t id;
  int direction;  // +1 rising, -1 falling
};

template <std::size_t N>
struct DenseStep {
  double t0;
  double h;
  std::array<State<N>, 5> r;

  State<N> eval(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    State<N> out;
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
    }
    return out;
  }
};

template <std::size_t N>
struct Trajectory {
  std::vector<double> t;
  std::vector<State<N>> y;
  std::vector<DenseStep<N>> dense;  // dense[i] spans [t[i], t[i+1]]
  std::vector<EventHit<N>> events;
  bool stopped_by_event = false;
  std::size_t accepted = 0;
  std::size_t rejected = 0;

  double t_begin() const { return t.front(); }
  double t_end() const { return t.back(); }
  const State<N>& final_state() const { return y.back(); }
  bool forward() const { return t.size() < 2 || t.back() > t.front(); }

  const EventHit<N>* first_event(std::size_t id) const {
    for (const auto& e : events) {
      if (e.id == id) return &e;
    }
    return nullptr;
  }

  // dense_eval
  State<N> at(double tq) const {
    const bool fwd = forward();
    const double lo = fwd ? t.front() : t.back();
    const double hi = fwd ? t.back() : t.front();
    if (!(tq >= lo && tq <= hi)) {
      std::ostringstream os;
      os << "t=" << tq << " outside [" << lo << ", " << hi << "]";
      throw OutOfRange(os.str());
    }
    // first node not before tq in integration order
    auto it = fwd ? std::lower_bound(t.begin(), t.end(), tq)
                  : std::lower_bound(t.begin(), t.end(), tq, std::greater<double>());
    const std::size_t k = static_cast<std::size_t>(it - t.begin());
    if (t[k] == tq) return y[k];
    if (dense.size() + 1 != t.size()) {
      throw OutOfRange("trajectory was integrated without dense output");
    }
    return dense[k - 1].eval(tq);
  }
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

template <std::size_t N>
bool finite(const State<N>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

template <std::size_t N, class F>
State<N> eval_checked(F& f, double t, const State<N>& y) {
  State<N> d = f(t, y);
  if (!finite(d)) {
    std::ostringstream os;
    os << "at t=" << t;
    throw NonFiniteDerivative(os.str());
  }
  return d;
}

inline bool crossed(double g0, double g1, Direction dir, int& sgn) {
  if (g0 < 0.0 && g1 >= 0.0) {
    sgn = +1;
    return dir != Direction::Falling;
  }
  if (g0 > 0.0 && g1 <= 0.0) {
    sgn = -1;
    return dir != Direction::Rising;
  }
  return false;
}

}  // namespace detail

template <std::size_t N, class F>
Trajectory<N> integrate(F&& f, const State<N>& y0, double t0, double t1,
                        const IntegratorConfig& cfg,
                        const std::vector<Event<N>>& events = {}) {
  using namespace detail;
  cfg.validate();
  if (!(t1 != t0) || !std::isfinite(t0) || !std::isfinite(t1)) {
    throw ParamOutOfRange("integration span must be finite and nondegenerate");
  }
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  const double hmax = cfg.h_max > 0.0 ? std::min(cfg.h_max, span) : span;

  Trajectory<N> tr;
  tr.t.push_back(t0);
  tr.y.push_back(y0);

  auto scale = [&](double a, double b) { return cfg.atol + cfg.rtol * std::max(std::abs(a), std::abs(b)); };

  double t = t0;
  State<N> y = y0;
  State<N> k1 = eval_checked<N>(f, t, y);

  std::vector<double> gv(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) gv[e] = events[e].g(t, y);

  double h;
  if (cfg.fixed_step > 0.0) {
    h = std::min(cfg.fixed_step, span);
  } else if (cfg.h_init > 0.0) {
    h = std::min(cfg.h_init, hmax);
  } else {
    // Hairer's starting step heuristic.
    double dn0 = 0, dn1 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = cfg.atol + cfg.rtol * std::abs(y[i]);
      dn0 += (y[i] / sk) * (y[i] / sk);
      dn1 += (k1[i] / sk) * (k1[i] / sk);
    }
    dn0 = std::sqrt(dn0 / N);
    dn1 = std::sqrt(dn1 / N);
    double h0 = (dn0 <= 1e-10 || dn1 <= 1e-10) ? 1e-6 : 0.01 * dn0 / dn1;
    h0 = std::min(h0, hmax);
    State<N> yt;
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + dir * h0 * k1[i];
    const State<N> kt = eval_checked<N>(f, t + dir * h0, yt);
    double dn2 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = cfg.atol + cfg.rtol * std::abs(y[i]);
      dn2 += ((kt[i] - k1[i]) / sk) * ((kt[i] - k1[i]) / sk);
    }
    dn2 = std::sqrt(dn2 / N) / h0;
    const double dm = std::max(dn1, dn2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min({100 * h0, h1, hmax});
  }

  constexpr double safety = 0.9, alpha = 0.17, beta = 0.04;
  double err_old = 1e-4;
  bool last_rejected = false;
  std::size_t steps = 0;

  State<N> k2, k3, k4, k5, k6, k7, yt, y1;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > cfg.max_steps) {
      std::ostringstream os;
      os << "exceeded " << cfg.max_steps << " steps at t=" << t;
      throw StepBudgetExceeded(os.str());
    }
    bool last = false;
    // absorb a sliver left by rounding rather than taking a tiny last step
    if (h * (1.0 + 1e-9) >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      last = true;
    }
    if (h <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      std::ostringstream os;
      os << "step size " << h << " at t=" << t;
      throw StepUnderflow(os.str());
    }
    const double hs = dir * h;
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * a21 * k1[i];
    k2 = eval_checked<N>(f, t + c2 * hs, yt);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    k3 = eval_checked<N>(f, t + c3 * hs, yt);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = eval_checked<N>(f, t + c4 * hs, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = eval_checked<N>(f, t + c5 * hs, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double tn = last ? t1 : t + hs;
    k6 = eval_checked<N>(f, t + hs, yt);
    for (std::size_t i = 0; i < N; ++i)
      y1[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    k7 = eval_checked<N>(f, tn, y1);

    double err = 0.0;
    if (cfg.fixed_step <= 0.0) {
      for (std::size_t i = 0; i < N; ++i) {
        const double ei =
            hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        err = std::max(err, std::abs(ei) / scale(y[i], y1[i]));
      }
      if (!std::isfinite(err)) err = 1e10;
      if (err > 1.0) {
        ++tr.rejected;
        h *= std::max(0.2, safety * std::pow(err, -0.2));
        last_rejected = true;
        continue;
      }
    }

    DenseStep<N> ds;
    ds.t0 = t;
    ds.h = hs;
    for (std::size_t i = 0; i < N; ++i) {
      const double dy = y1[i] - y[i];
      const double bspl = hs * k1[i] - dy;
      ds.r[0][i] = y[i];
      ds.r[1][i] = dy;
      ds.r[2][i] = bspl;
      ds.r[3][i] = dy - hs * k7[i] - bspl;
      ds.r[4][i] =
          hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }

    // Events: locate every crossing inside the step, keep them in time order,
    // stop at the first terminal one.
    double t_stop = tn;
    State<N> y_stop = y1;
    bool stop = false;
    std::vector<EventHit<N>> hits;
    std::vector<double> g_new(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) {
      g_new[e] = events[e].g(tn, y1);
      int sgn = 0;
      if (!crossed(gv[e], g_new[e], events[e].direction, sgn)) continue;
      double lo = t, hi = tn;
      double glo = gv[e];
      State<N> yhi = y1;
      double ghi = g_new[e];
      for (int it = 0; it < 60; ++it) {
        if (std::abs(hi - lo) <= cfg.event_tol && std::abs(ghi) <= cfg.event_tol) break;
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const State<N> ym = ds.eval(mid);
        const double gm = events[e].g(mid, ym);
        if ((glo < 0.0 && gm < 0.0) || (glo > 0.0 && gm > 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
          yhi = ym;
          ghi = gm;
        }
      }
      hits.push_back({hi, yhi, e, sgn});
    }
    std::sort(hits.begin(), hits.end(),
              [dir](const EventHit<N>& a, const EventHit<N>& b) { return dir * a.t < dir * b.t; });
    for (const auto& hit : hits) {
      tr.events.push_back(hit);
      if (events[hit.id].terminal) {
        stop = true;
        t_stop = hit.t;
        y_stop = hit.y;
        break;
      }
    }

    ++tr.accepted;
    if (cfg.dense) tr.dense.push_back(ds);
    tr.t.push_back(t_stop);
    tr.y.push_back(y_stop);
    if (stop) {
      tr.stopped_by_event = true;
      break;
    }
    t = tn;
    y = y1;
    k1 = k7;
    gv = g_new;

    if (cfg.fixed_step <= 0.0) {
      const double e = std::max(err, 1e-10);
      double fac = safety * std::pow(e, -alpha) * std::pow(err_old, beta);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
      h = std::min(h * fac, hmax);
      err_old = std::max(err, 1e-4);
      last_rejected = false;
    }
  }
  return tr;
}

}  // namespace painleve::ode
