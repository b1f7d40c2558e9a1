#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "clt/analysis.hpp"
#include "clt/density.hpp"
#include "clt/edgeworth.hpp"
#include "clt/errors.hpp"

using namespace clt;

namespace {

const Grid& grid() {
  static const Grid g = default_grid();
  return g;
}

std::size_t index_of(double x) {
  return static_cast<std::size_t>(std::llround((x + grid().half_width) / grid().spacing()));
}

}  // namespace

TEST(ExpansionTerm, Examples) {
  const auto t = expansion_term(grid(), 2.0, 4);
  EXPECT_EQ(t[index_of(0.0)], 0.0);
  EXPECT_NEAR(t[index_of(1.0)], -0.0806569, 5e-8);
  EXPECT_NEAR(t[index_of(1.0)], (2.0 / 12.0) * (-2.0) * std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi), 1e-15);
  for (double v : expansion_term(grid(), 0.0, 9)) ASSERT_EQ(v, 0.0);
  EXPECT_THROW(expansion_term(grid(), 1.0, 0), UsageError);
}

TEST(Approx, IntegratesToOneAndReducesToGaussian) {
  const auto a = edgeworth_approx(grid(), 2.0, 16);
  double mass = 0.0;
  for (double v : a.values) mass += v * grid().spacing();
  EXPECT_NEAR(mass, 1.0, 1e-9);
  EXPECT_EQ(edgeworth_approx(grid(), 0.0, 16).values, gaussian_density(grid()).values);
}

TEST(Residual, Examples) {
  const auto g7 = density_cf_inversion(SourceSpec::gaussian(), 7, grid());
  EXPECT_LT(residual_sup(g7, edgeworth_approx(grid(), 0.0, 7)).sup, 1e-9);

  const auto u8 = density_cf_inversion(SourceSpec::uniform(), 8, grid());
  EXPECT_EQ(residual_sup(u8, edgeworth_approx(grid(), 0.0, 8)).sup, sup_distance(u8, gaussian_density(grid())));

  const std::vector<std::uint64_t> ns{16, 256};
  const auto pts = edgeworth_residual_series(SourceSpec::centered_exponential(), ns);
  EXPECT_LT(pts[1].scaled_residual, pts[0].scaled_residual);
  EXPECT_NEAR(pts[0].scaled_residual, 4.0 * pts[0].sup_residual, 1e-15);
}

TEST(Residual, RejectsMismatch) {
  const auto f = density_cf_inversion(SourceSpec::uniform(), 8, grid());
  EXPECT_THROW(residual_sup(f, edgeworth_approx(grid(), 0.0, 16)), UsageError);
  EXPECT_THROW(residual_sup(f, edgeworth_approx(build_grid(16.0, 1 << 15), 0.0, 8)), UsageError);
}

TEST(Residual, ScaledResidualDecreasesForEveryNonGaussianSource) {
  const std::vector<std::uint64_t> ns{16, 64, 256, 1024};
  for (auto kind : {SourceKind::uniform, SourceKind::centered_exponential, SourceKind::laplace,
                    SourceKind::gaussian_mixture}) {
    const auto pts = edgeworth_residual_series(default_source(kind), ns);
    for (std::size_t i = 1; i < pts.size(); ++i)
      EXPECT_LT(pts[i].scaled_residual, pts[i - 1].scaled_residual) << source_kind_name(kind);
    EXPECT_LT(pts.back().scaled_residual / pts.front().scaled_residual, 0.5) << source_kind_name(kind);
  }
}

TEST(Residual, ThirdMomentBeatsAbsoluteThirdMoment) {
  // rho = E|X|^3 in place of mu3 leaves an O(1/sqrt n) residual.
  const SourceSpec spec = SourceSpec::centered_exponential();
  const double rho = moments(spec, 3).abs_moments.at(3);
  const auto f = density_cf_inversion(spec, 1024, grid());
  const double with_mu3 = residual_sup(f, edgeworth_approx(grid(), 2.0, 1024)).scaled;
  const double with_rho = residual_sup(f, edgeworth_approx(grid(), rho, 1024)).scaled;
  EXPECT_LT(with_mu3, 0.1 * with_rho);
}

TEST(Profile, MaximumMatchesClosedForm) {
  // |x^3 - 3x| g(x) peaks at x^2 = 3 + sqrt6 (outer) or 3 - sqrt6 (inner); outer wins.
  const double x2 = 3.0 - std::sqrt(6.0), x2o = 3.0 + std::sqrt(6.0);
  auto h = [](double s) {
    const double x = std::sqrt(s);
    return std::fabs(x * x * x - 3.0 * x) * std::exp(-0.5 * s) / std::sqrt(2.0 * std::numbers::pi);
  };
  const double ref = 2.0 / 6.0 * std::max(h(x2), h(x2o));
  EXPECT_NEAR(first_order_profile_max(2.0), ref, 1e-10);
  EXPECT_EQ(first_order_profile_max(0.0), 0.0);
}

TEST(Profile, ScaledDistanceForSkewedSourceTracksProfile) {
  const auto ns = powers_of_two(16, 4096);
  const auto dens = densities_for(SourceSpec::centered_exponential(), ns, grid());
  const double profile = first_order_profile_max(2.0);
  const GridDensity g = gaussian_density(grid());
  for (const auto& d : dens) {
    const double scaled = std::sqrt(static_cast<double>(d.n)) * sup_distance(d, g);
    EXPECT_NEAR(scaled, profile, 0.25 * profile) << "n=" << d.n;
  }
}
