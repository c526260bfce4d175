#include <doctest.h>

#include <cmath>
#include <numbers>

#include "painleve/odeint.hpp"

using namespace painleve;
using namespace painleve::ode;

namespace {

auto decay = [](double, const State<1>& y) { return State<1>{-y[0]}; };
auto oscillator = [](double, const State<2>& y) { return State<2>{y[1], -y[0]}; };

IntegratorConfig tol(double r) {
  IntegratorConfig c;
  c.rtol = r;
  c.atol = r * 1e-2;
  return c;
}

}  // namespace

TEST_CASE("linear test equation reaches exp(-1)") {
  const auto tr = integrate<1>(decay, {1.0}, 0.0, 1.0, tol(1e-10));
  CHECK(std::abs(tr.final_state()[0] - std::exp(-1.0)) < 10 * 1e-10);
  CHECK(tr.t_end() == 1.0);
}

TEST_CASE("harmonic oscillator energy over 100 periods") {
  const double T = 200 * std::numbers::pi;
  const auto tr = integrate<2>(oscillator, {1.0, 0.0}, 0.0, T, tol(1e-10));
  const auto& y = tr.final_state();
  CHECK(std::abs(0.5 * (y[0] * y[0] + y[1] * y[1]) / 0.5 - 1.0) < 1e-6);
}

TEST_CASE("event y = 0 on y' = -1") {
  auto f = [](double, const State<1>&) { return State<1>{-1.0}; };
  IntegratorConfig c = tol(1e-10);
  c.event_tol = 1e-12;
  const std::vector<Event<1>> ev{{[](double, const State<1>& y) { return y[0]; }, Direction::Falling, true}};
  const auto tr = integrate<1>(f, {1.0}, 0.0, 5.0, c, ev);
  REQUIRE(tr.stopped_by_event);
  REQUIRE(tr.events.size() == 1);
  CHECK(std::abs(tr.events[0].t - 1.0) <= c.event_tol);
  CHECK(std::abs(tr.events[0].y[0]) <= c.event_tol);
  CHECK(tr.events[0].direction == -1);
}

TEST_CASE("event direction filter and non-terminal events") {
  // sin crosses zero at pi (falling), 2 pi (rising), 3 pi (falling)
  auto f = [](double t, const State<1>&) { return State<1>{std::cos(t)}; };
  const std::vector<Event<1>> ev{
      {[](double, const State<1>& y) { return y[0]; }, Direction::Rising, false},
      {[](double, const State<1>& y) { return y[0]; }, Direction::Falling, false}};
  const auto tr = integrate<1>(f, {1e-3}, 0.0, 10.0, tol(1e-10), ev);
  CHECK_FALSE(tr.stopped_by_event);
  REQUIRE(tr.events.size() == 3);
  CHECK(tr.events[0].id == 1);
  CHECK(tr.events[1].id == 0);
  CHECK(tr.events[2].id == 1);
  for (std::size_t i = 1; i < tr.events.size(); ++i) CHECK(tr.events[i].t > tr.events[i - 1].t);
}

TEST_CASE("trajectory times strictly monotone and events inside their steps") {
  auto f = [](double t, const State<1>&) { return State<1>{std::cos(t)}; };
  const std::vector<Event<1>> ev{{[](double, const State<1>& y) { return y[0] - 0.5; }, Direction::Either, false}};
  for (double t1 : {20.0, -20.0}) {
    const auto tr = integrate<1>(f, {0.0}, 0.0, t1, tol(1e-9), ev);
    const double d = t1 > 0 ? 1.0 : -1.0;
    for (std::size_t i = 1; i < tr.t.size(); ++i) CHECK(d * (tr.t[i] - tr.t[i - 1]) > 0.0);
    REQUIRE(!tr.events.empty());
    for (const auto& e : tr.events) {
      CHECK(std::abs(e.y[0] - 0.5) <= 1e-12);
      CHECK(d * (e.t - tr.t.front()) >= 0.0);
      CHECK(d * (tr.t.back() - e.t) >= 0.0);
    }
  }
}

TEST_CASE("dense output at nodes, midpoints and on reversed trajectories") {
  const IntegratorConfig c = tol(1e-10);
  const auto tr = integrate<1>(decay, {1.0}, 0.0, 3.0, c);
  for (std::size_t i = 0; i < tr.t.size(); ++i) CHECK(tr.at(tr.t[i])[0] == tr.y[i][0]);
  for (std::size_t i = 0; i + 1 < tr.t.size(); ++i) {
    const double tm = 0.5 * (tr.t[i] + tr.t[i + 1]);
    CHECK(std::abs(tr.at(tm)[0] - std::exp(-tm)) < 10 * c.rtol);
  }
  const auto back = integrate<1>(decay, {std::exp(-3.0)}, 3.0, 0.0, c);
  CHECK_FALSE(back.forward());
  for (double tq : {0.1, 1.3, 2.9}) CHECK(std::abs(back.at(tq)[0] - std::exp(-tq)) < 10 * c.rtol);
  CHECK_THROWS_AS(tr.at(3.5), OutOfRange);
  CHECK_THROWS_AS(back.at(-0.1), OutOfRange);
}

TEST_CASE("determinism") {
  const auto a = integrate<2>(oscillator, {1.0, 0.3}, 0.0, 50.0, tol(1e-9));
  const auto b = integrate<2>(oscillator, {1.0, 0.3}, 0.0, 50.0, tol(1e-9));
  REQUIRE(a.t.size() == b.t.size());
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    CHECK(a.t[i] == b.t[i]);
    CHECK(a.y[i] == b.y[i]);
  }
}

TEST_CASE("convergence order") {
  // Fixed-step halving: a 5th order pair gains about 32x; require 8x.
  auto err_fixed = [](double h) {
    IntegratorConfig c;
    c.fixed_step = h;
    return std::abs(integrate<1>(decay, {1.0}, 0.0, 2.0, c).final_state()[0] - std::exp(-2.0));
  };
  for (double h : {0.2, 0.1, 0.05}) CHECK(err_fixed(h) / err_fixed(h / 2) >= 8.0);

  // Adaptive: tightening the tolerance by 2^5 gains at least one factor 8.
  auto err_tol = [](double r) {
    return std::abs(integrate<1>(decay, {1.0}, 0.0, 2.0, tol(r)).final_state()[0] - std::exp(-2.0));
  };
  for (double r : {1e-6, 1e-7}) CHECK(err_tol(r) / err_tol(r / 32) >= 8.0);
}

TEST_CASE("event idempotence under a tighter event tolerance") {
  auto f = [](double t, const State<2>& y) { return State<2>{y[1], -y[0] + 0.1 * std::sin(t)}; };
  const std::vector<Event<2>> ev{{[](double, const State<2>& y) { return y[0] - 0.3; }, Direction::Either, false}};
  IntegratorConfig c = tol(1e-10);
  c.event_tol = 1e-10;
  const auto a = integrate<2>(f, {1.0, 0.0}, 0.0, 30.0, c, ev);
  c.event_tol = 1e-11;
  const auto b = integrate<2>(f, {1.0, 0.0}, 0.0, 30.0, c, ev);
  REQUIRE(a.events.size() == b.events.size());
  REQUIRE(a.events.size() > 5);
  for (std::size_t i = 0; i < a.events.size(); ++i) CHECK(std::abs(a.events[i].t - b.events[i].t) < 1e-10);
}

TEST_CASE("errors") {
  IntegratorConfig c = tol(1e-8);
  c.max_steps = 10;
  CHECK_THROWS_AS(integrate<2>(oscillator, {1.0, 0.0}, 0.0, 1000.0, c), StepBudgetExceeded);
  auto blow = [](double, const State<1>& y) { return State<1>{y[0] * y[0]}; };
  CHECK_THROWS_AS(integrate<1>(blow, {1.0}, 0.0, 2.0, tol(1e-8)), NumericalError);
  auto nan = [](double t, const State<1>&) { return State<1>{t > 0.5 ? NAN : 1.0}; };
  CHECK_THROWS_AS(integrate<1>(nan, {0.0}, 0.0, 1.0, tol(1e-8)), NonFiniteDerivative);
  CHECK_THROWS_AS(integrate<1>(decay, {1.0}, 1.0, 1.0, tol(1e-8)), ParamOutOfRange);
  IntegratorConfig bad;
  bad.rtol = 0.0;
  CHECK_THROWS_AS(integrate<1>(decay, {1.0}, 0.0, 1.0, bad), ParamOutOfRange);
}

TEST_CASE("step underflow at a finite-time singularity") {
  auto blow = [](double, const State<1>& y) { return State<1>{y[0] * y[0]}; };
  try {
    integrate<1>(blow, {1.0}, 0.0, 2.0, tol(1e-8));
    FAIL("expected a numerical error");
  } catch (const StepUnderflow&) {
  } catch (const NonFiniteDerivative&) {
  }
}
