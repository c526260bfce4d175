#pragma once

#include <array>
#include <span>
#include <vector>

namespace painleve::langer {

// Solutions of y''' = theta y' + (1 - xi) y:
//   La(t) = int_0^inf exp(-tau^3/3 + t tau) tau^-xi dtau
//   Lb(t) = int_0^inf cos(tau^3/3 + t tau + xi pi/2) tau^-xi dtau
//   Lc(t) = int_0^inf cos(tau^3/3 + t tau - xi pi/2) tau^-xi dtau
struct LangerEval {
  double xi, theta2;
  double la, la1, la2;
  double lb, lb1, lb2;
  double lc, lc1, lc2;
};

struct InitialData {
  std::array<double, 3> la, lb, lc;  // value, first, second derivative at 0
};

struct LangerConfig {
  double switch_radius = 25.0;  // beyond |theta| the leading asymptotics are returned
  double contour_from = 1.0;    // Lb, Lc by contour quadrature for theta >= this
  double rtol = 1e-12;
  double atol = 1e-15;
};

enum class Which { La, Lb, Lc };
enum class Side { Plus, Minus };

// Accepts xi in [0, 1); xi = 0 gives the Airy case Lb = Lc = pi Ai.
InitialData mellin_initial_data(double xi);

// k-th derivative of La by direct quadrature (integrand tau^{k - xi}).
double la_direct(double xi, double theta2, int k = 0);

// k-th derivative of Lb or Lc for theta2 > 0 by steepest-descent contour quadrature.
double oscillatory_contour(double xi, double theta2, Which which, int k);

LangerEval langer_eval(double xi, double theta2, const LangerConfig& cfg = {});

// Evaluates on a grid; sorted internally so each side is propagated once.
std::vector<LangerEval> langer_grid(double xi, std::span<const double> thetas,
                                    const LangerConfig& cfg = {});

double asymptotic(double xi, double theta2, Which which, Side side);

double wronskian(const LangerEval& e);
double wronskian(double xi, double theta2, const LangerConfig& cfg = {});

// Least-squares fit of Ai(2^{-2/3} t)^2 by (La, Lb, Lc) at xi = 1/2 over the
// grid; returns the max absolute residual.
double airy_square_residual(std::span<const double> thetas, const LangerConfig& cfg = {});

}  // namespace painleve::langer
