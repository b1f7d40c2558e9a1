#pragma once

#include <cstdint>
#include <vector>

#include "clt/density.hpp"

namespace clt {

/// First-order density expansion g(x) + mu3/(6 sqrt n) (x^3 - 3x) g(x) on a grid.
struct EdgeworthApprox {
  Grid grid;
  std::vector<double> values;
  std::uint64_t n;
  double mu3;
};

/// mu3/(6 sqrt n) (x_j^3 - 3 x_j) g(x_j). Throws UsageError for n < 1.
std::vector<double> expansion_term(const Grid& grid, double mu3, std::uint64_t n);

EdgeworthApprox edgeworth_approx(const Grid& grid, double mu3, std::uint64_t n);

struct Residual {
  double sup;     // max_j |f_n - approx|
  double scaled;  // sqrt(n) * sup
};

/// Throws UsageError when n or the grid differ.
Residual residual_sup(const GridDensity& fn, const EdgeworthApprox& approx);

/// max over x of |mu3/6 (x^3 - 3x) g(x)|, located numerically.
double first_order_profile_max(double mu3);

}  // namespace clt
