#include "clt/edgeworth.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

#include "clt/errors.hpp"

namespace clt {
namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double hermite_profile(double x) { return (x * x * x - 3.0 * x) * kInvSqrt2Pi * std::exp(-0.5 * x * x); }

}  // namespace

std::vector<double> expansion_term(const Grid& grid, double mu3, std::uint64_t n) {
  if (n < 1) throw UsageError("expansion_term needs n >= 1");
  const double coef = mu3 / (6.0 * std::sqrt(static_cast<double>(n)));
  std::vector<double> out(grid.points);
  for (std::size_t j = 0; j < grid.points; ++j) out[j] = coef * hermite_profile(grid.x(j));
  return out;
}

EdgeworthApprox edgeworth_approx(const Grid& grid, double mu3, std::uint64_t n) {
  EdgeworthApprox a{grid, expansion_term(grid, mu3, n), n, mu3};
  for (std::size_t j = 0; j < grid.points; ++j) {
    const double x = grid.x(j);
    a.values[j] += kInvSqrt2Pi * std::exp(-0.5 * x * x);
  }
  return a;
}

Residual residual_sup(const GridDensity& fn, const EdgeworthApprox& approx) {
  if (fn.n != approx.n) throw UsageError("residual_sup: n differs between density and expansion");
  if (!(fn.grid == approx.grid)) throw UsageError("residual_sup: grids differ");
  double sup = 0.0;
  for (std::size_t j = 0; j < fn.values.size(); ++j)
    sup = std::max(sup, std::fabs(fn.values[j] - approx.values[j]));
  return {sup, std::sqrt(static_cast<double>(fn.n)) * sup};
}

double first_order_profile_max(double mu3) {
  // |(x^3 - 3x) g(x)| is even; scan [0, 8] then polish each local maximum.
  double best = 0.0;
  const int steps = 800;
  const double h = 8.0 / steps;
  for (int i = 1; i < steps; ++i) {
    const double a = std::fabs(hermite_profile((i - 1) * h)), b = std::fabs(hermite_profile(i * h)),
                 c = std::fabs(hermite_profile((i + 1) * h));
    if (b >= a && b >= c) {
      const auto r = boost::math::tools::brent_find_minima(
          [](double x) { return -std::fabs(hermite_profile(x)); }, (i - 1) * h, (i + 1) * h, 52);
      best = std::max(best, -r.second);
    }
  }
  return std::fabs(mu3) / 6.0 * best;
}

}  // namespace clt
