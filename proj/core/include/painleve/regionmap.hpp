#pragma once

#include <string>
#include <vector>

#include "painleve/model.hpp"

namespace painleve::regionmap {

// Classification of the rigid slipping rod by the signs of b and p+.
// Cells with b = 0 or p+ = 0 are put on the nonpositive side.
enum class Region { Liftoff, Slip, Indeterminate, Inconsistent };
const char* to_string(Region r);

Region classify(double theta, double phi, const ModelParams& prm);

struct GridSpec {
  double theta_min = 0.05, theta_max = 1.55;
  double phi_min = 0.05, phi_max = 2.5;
  std::size_t n_theta = 61, n_phi = 50;
  void validate() const;
};

struct Cell {
  double theta, phi, b, p;
  Region region;
};

struct RegionMap {
  GridSpec grid;
  std::vector<Cell> cells;  // theta-major
  // zeros of p+ inside (0, pi/2); empty when mu <= mu_P
  std::vector<double> p_zeros;
};

RegionMap region_map(const ModelParams& prm, const GridSpec& g = {});

// SVG 1.1 plot: cell markers coloured by region, vertical lines at the p+
// zeros and the b = 0 curve phi = sqrt(csc theta).
std::string to_svg(const RegionMap& m);

}  // namespace painleve::regionmap
