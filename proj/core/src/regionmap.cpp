#include "painleve/regionmap.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace painleve::regionmap {

const char* to_string(Region r) {
  switch (r) {
    case Region::Liftoff: return "liftoff";
    case Region::Slip: return "slip";
    case Region::Indeterminate: return "indeterminate";
    case Region::Inconsistent: return "inconsistent";
  }
  return "?";
}

Region classify(double theta, double phi, const ModelParams& prm) {
  const bool bp = b_fn(theta, phi) > 0.0;
  const bool pp = p_plus(theta, prm) > 0.0;
  if (pp) return bp ? Region::Liftoff : Region::Slip;
  return bp ? Region::Indeterminate : Region::Inconsistent;
}

void GridSpec::validate() const {
  if (!(theta_min > 0.0 && theta_max > theta_min && theta_max < M_PI / 2) ||
      !(phi_min >= 0.0 && phi_max > phi_min) || n_theta < 2 || n_phi < 2) {
    throw ParamOutOfRange("region grid needs 0 < theta_min < theta_max < pi/2, phi_min < phi_max, n >= 2");
  }
}

RegionMap region_map(const ModelParams& prm, const GridSpec& g) {
  prm.validate();
  g.validate();
  RegionMap m;
  m.grid = g;
  m.cells.reserve(g.n_theta * g.n_phi);
  for (std::size_t i = 0; i < g.n_theta; ++i) {
    const double th = g.theta_min + (g.theta_max - g.theta_min) * static_cast<double>(i) /
                                        static_cast<double>(g.n_theta - 1);
    const double p = p_plus(th, prm);
    for (std::size_t j = 0; j < g.n_phi; ++j) {
      const double ph = g.phi_min + (g.phi_max - g.phi_min) * static_cast<double>(j) /
                                        static_cast<double>(g.n_phi - 1);
      m.cells.push_back({th, ph, b_fn(th, ph), p, classify(th, ph, prm)});
    }
  }
  if (prm.mu > mu_P(prm.alpha)) {
    const CriticalData cd = critical_data(prm);
    m.p_zeros = {cd.theta1, cd.theta2_crit};
  }
  return m;
}

std::string to_svg(const RegionMap& m) {
  const auto& g = m.grid;
  const double W = 640, H = 480, L = 60, B = 40;
  auto X = [&](double th) { return L + (th - g.theta_min) / (g.theta_max - g.theta_min) * (W - L - 20); };
  auto Y = [&](double ph) { return H - B - (ph - g.phi_min) / (g.phi_max - g.phi_min) * (H - B - 20); };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  auto colour = [](Region r) {
    switch (r) {
      case Region::Liftoff: return "#4c9be8";
      case Region::Slip: return "#7cc27c";
      case Region::Indeterminate: return "#e8b84c";
      case Region::Inconsistent: return "#e06060";
    }
    return "#000";
  };
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
     << "\" height=\"" << H << "\">\n";
  for (const auto& c : m.cells) {
    os << "<circle cx=\"" << num(X(c.theta)) << "\" cy=\"" << num(Y(c.phi))
       << "\" r=\"2\" fill=\"" << colour(c.region) << "\"/>\n";
  }
  // axes
  os << "<polyline points=\"" << num(X(g.theta_min)) << ',' << num(Y(g.phi_max)) << ' '
     << num(X(g.theta_min)) << ',' << num(Y(g.phi_min)) << ' ' << num(X(g.theta_max)) << ','
     << num(Y(g.phi_min)) << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << num(W / 2) << "\" y=\"" << num(H - 8) << "\">theta</text>\n";
  os << "<text x=\"8\" y=\"" << num(H / 2) << "\">phi</text>\n";
  for (double z : m.p_zeros) {
    if (z < g.theta_min || z > g.theta_max) continue;
    os << "<polyline points=\"" << num(X(z)) << ',' << num(Y(g.phi_min)) << ' ' << num(X(z)) << ','
       << num(Y(g.phi_max)) << "\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"4,3\"/>\n";
  }
  os << "<polyline points=\"";
  const int n = 200;
  bool first = true;
  for (int k = 0; k <= n; ++k) {
    const double th = g.theta_min + (g.theta_max - g.theta_min) * k / n;
    const double ph = std::sqrt(1.0 / std::sin(th));
    if (ph < g.phi_min || ph > g.phi_max) continue;
    os << (first ? "" : " ") << num(X(th)) << ',' << num(Y(ph));
    first = false;
  }
  os << "\" fill=\"none\" stroke=\"black\"/>\n</svg>\n";
  return os.str();
}

}  // namespace painleve::regionmap
