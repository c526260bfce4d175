#pragma once

#include <variant>

#include "painleve/model.hpp"

namespace painleve::charts {

// Truncated chart systems: every higher-order remainder is set to zero and
// time is the desingularized one used in each chart.
struct K1State {
  double y, w1, r1, eps1, phi1;
};
struct K2State {
  double y, w2, r2, theta2, phi2;
};
struct K3State {
  double y, w3, r3, eps3, phi3;
};

using ChartState = std::variant<K1State, K2State, K3State>;
enum class Chart { K1 = 0, K2 = 1, K3 = 2 };

Chart chart_of(const ChartState& s);
const char* to_string(Chart c);

struct CanardShape {
  double xi, s;
  void validate() const;
  double slope() const { return s / (1.0 - xi); }
};

CanardShape shape_from(const CriticalData& cd);

// Derivative as a state of the same chart (component-wise).
ChartState chart_vf(const ChartState& st, const CanardShape& sh, double delta);

ChartState chart_change(const ChartState& st, Chart to);

// eps = r1^3 eps1 = r2^3 = r3^3 eps3
double conserved_eps(const ChartState& st);

ode::State<5> to_array(const ChartState& st);
ChartState from_array(Chart c, const ode::State<5>& v);

// Point on the line l2 at r2 = 0.
K2State l2_point(const CanardShape& sh, double theta2);

// Point on C_{e,2}: l2 plus c times the La direction.
K2State ce2_point(const CanardShape& sh, double c, double theta2);

struct GrowthReport {
  double theta2_max;
  double ratio;          // log(La(max)/La(0)) / (2 max^{3/2} / 3)
  double lb_decay;       // Lb(max) / Lb(max/2)
  double lc_decay;       // Lc(max) / Lc(max/2)
  bool transverse;       // ratio in (0.8, 1.2) and Lb decays
};

GrowthReport cr2_growth_test(const CanardShape& sh, double theta2_max);

struct Mr3Point {
  double y, w3;
};

// Leading-order graph of M_{r,3} at r3 = 0, invariance-consistent form:
// y = -phi3 + (2 - xi) eps3^2 A, w3 = -eps3 A with A = s - (1 - xi) phi3.
Mr3Point mr3_graph(double phi3, double eps3, const CanardShape& sh);

// Reduced K3 flow on the graph with the common factor eps3 removed,
// components (r3, eps3, phi3).
ode::State<3> reduced_k3_vf(double r3, double eps3, double phi3, const CanardShape& sh,
                            double delta);

}  // namespace painleve::charts
