#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "clt/analysis.hpp"
#include "clt/errors.hpp"

using namespace clt;

namespace {

RateSeries synthetic(double c, double p, std::size_t count) {
  RateSeries s{SourceSpec::uniform(), EntropyOrder(2), EntropyKind::renyi, {}};
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t n = 1ull << (i + 1);
    s.points.push_back({n, c * std::pow(static_cast<double>(n), p)});
  }
  return s;
}

}  // namespace

TEST(ErrorSeries, GaussianErrorsBelowFloor) {
  const std::vector<std::uint64_t> ns{1, 4, 64, 1024};
  for (double a : {0.5, 2.0})
    for (auto kind : {EntropyKind::renyi, EntropyKind::tsallis})
      for (const auto& p : error_series(SourceSpec::gaussian(), EntropyOrder(a), kind, ns).points)
        EXPECT_LT(p.error, 1e-9);
}

TEST(ErrorSeries, ExponentialRenyiTwoDecreasesStrictly) {
  const auto s = error_series(SourceSpec::centered_exponential(), EntropyOrder(2), EntropyKind::renyi,
                              powers_of_two(4, 1024));
  for (std::size_t i = 1; i < s.points.size(); ++i) EXPECT_LT(s.points[i].error, s.points[i - 1].error);
}

TEST(ErrorSeries, UniformShannonDecreasesTenfold) {
  const auto s = error_series(SourceSpec::uniform(), EntropyOrder(1), EntropyKind::shannon, powers_of_two(4, 1024));
  for (std::size_t i = 1; i < s.points.size(); ++i) EXPECT_LT(s.points[i].error, s.points[i - 1].error);
  EXPECT_LT(s.points.back().error, s.points.front().error / 10.0);
}

TEST(ErrorSeries, EventuallyMonotoneForNonGaussianSources) {
  const std::vector<SeriesRequest> req{{EntropyOrder(0.5), EntropyKind::renyi},
                                       {EntropyOrder(1), EntropyKind::shannon},
                                       {EntropyOrder(2), EntropyKind::tsallis},
                                       {EntropyOrder(4), EntropyKind::renyi}};
  for (auto kind : {SourceKind::uniform, SourceKind::centered_exponential, SourceKind::laplace,
                    SourceKind::gaussian_mixture})
    for (const auto& s : error_series_batch(default_source(kind), req, powers_of_two(64, 4096)))
      for (std::size_t i = 1; i < s.points.size(); ++i)
        EXPECT_LT(s.points[i].error, s.points[i - 1].error)
            << source_kind_name(kind) << " " << entropy_kind_name(s.kind) << " alpha=" << s.order.alpha();
}

TEST(ErrorSeries, RejectsBadNs) {
  const std::vector<std::uint64_t> unordered{4, 2}, empty{}, zero{0, 2};
  EXPECT_THROW(error_series(SourceSpec::uniform(), EntropyOrder(2), EntropyKind::renyi, unordered), UsageError);
  EXPECT_THROW(error_series(SourceSpec::uniform(), EntropyOrder(2), EntropyKind::renyi, empty), UsageError);
  EXPECT_THROW(error_series(SourceSpec::uniform(), EntropyOrder(2), EntropyKind::renyi, zero), UsageError);
}

TEST(ErrorSeries, FailuresNameTheOffendingN) {
  SeriesOptions opt;
  opt.grid = build_grid(4.0, 1 << 12);
  const std::vector<std::uint64_t> ns{2, 4, 8};
  try {
    (void)error_series(SourceSpec::centered_exponential(), EntropyOrder(2), EntropyKind::renyi, ns, opt);
    FAIL() << "expected a numerical failure";
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.check(), "mass");
    EXPECT_NE(std::string(e.what()).find("n=4]"), std::string::npos) << e.what();
  }
}

TEST(Fit, Examples) {
  const RateFit half = fit_loglog(synthetic(3.0, -0.5, 8), 0);
  EXPECT_NEAR(half.slope, -0.5, 1e-12);
  EXPECT_NEAR(half.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(half.intercept, std::log(3.0), 1e-11);
  EXPECT_NEAR(fit_loglog(synthetic(0.7, -1.0, 6), 0).slope, -1.0, 1e-12);
  EXPECT_THROW(fit_loglog(synthetic(1.0, -1.0, 2), 0), FitError);
  EXPECT_THROW(fit_loglog(synthetic(1.0, -1.0, 4), 2), FitError);
}

TEST(Fit, DropsPointsBelowFloor) {
  RateSeries s = synthetic(1.0, -1.0, 6);
  s.points[5].error = 1e-13;
  const RateFit f = fit_loglog(s, 0);
  EXPECT_EQ(f.used_points, 5u);
  EXPECT_NEAR(f.slope, -1.0, 1e-12);
  for (auto& p : s.points) p.error = 0.0;
  try {
    (void)fit_loglog(s, 0);
    FAIL();
  } catch (const FitError& e) {
    EXPECT_NE(std::string(e.what()).find("below tolerance floor"), std::string::npos);
  }
}

TEST(Fit, RSquaredInUnitInterval) {
  RateSeries s = synthetic(1.0, -0.5, 10);
  for (std::size_t i = 0; i < s.points.size(); ++i) s.points[i].error *= (i % 2 ? 1.5 : 0.6);
  const RateFit f = fit_loglog(s, 0);
  EXPECT_GE(f.r_squared, 0.0);
  EXPECT_LE(f.r_squared, 1.0);
}

TEST(TheoreticalExponent, Examples) {
  EXPECT_EQ(theoretical_exponent(EntropyOrder(2), 0.05), -0.5);
  EXPECT_NEAR(theoretical_exponent(EntropyOrder(0.5), 0.05), -0.2, 1e-15);
  EXPECT_NEAR(theoretical_exponent(EntropyOrder(1), 0.1), -0.4, 1e-15);
  EXPECT_THROW(theoretical_exponent(EntropyOrder(0.5), 0.4), UsageError);
  EXPECT_THROW(theoretical_exponent(EntropyOrder(0.5), 0.0), UsageError);
  EXPECT_EQ(theoretical_exponent(EntropyOrder(3), 7.0), -0.5);
}

TEST(QGamma, Examples) {
  EXPECT_NEAR(q_gamma(0.25), 4.0 * std::exp(-0.5), 1e-9);
  EXPECT_NEAR(q_gamma(0.25), 2.4261226, 1e-6);
  EXPECT_NEAR(q_gamma(0.45), 2.0, 1e-12);
  for (double g : {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.45, 0.49}) EXPECT_GE(q_gamma(g), 2.0);
  EXPECT_THROW(q_gamma(0.0), UsageError);
  EXPECT_THROW(q_gamma(0.5), UsageError);
}

TEST(QGamma, MatchesCriticalPointFormula) {
  // d = x^g (1 - c log x), c = 1 - 2g; d' = 0 at log x = 1/c - 1/g.
  for (double g : {0.05, 0.15, 0.25, 0.35}) {
    const double c = 1.0 - 2.0 * g, lx = 1.0 / c - 1.0 / g;
    const double d = lx < 0.0 ? std::exp(g * lx) * (1.0 - c * lx) : 1.0;
    EXPECT_NEAR(q_gamma(g), 2.0 * std::max(1.0, d), 1e-9) << "gamma=" << g;
  }
  // Near 1/2 the interior critical point leaves (0, 1] and Q = 2 exactly.
  EXPECT_EQ(q_gamma(0.4), 2.0);
}

TEST(QGammaCertificate, HoldsOnLattice) {
  for (double g : {0.05, 0.15, 0.25, 0.35, 0.45}) {
    const auto c = verify_lemma6(g, 2000);
    EXPECT_TRUE(c.holds()) << "gamma=" << g << " slack " << c.max_violation;
    EXPECT_EQ(c.search_points, 2000u * 2000u);
    EXPECT_GE(c.q_gamma, 2.0);
  }
  EXPECT_THROW(verify_lemma6(0.25, 999), UsageError);
  EXPECT_THROW(verify_lemma6(0.6, 2000), UsageError);
}

TEST(AlphaPower, Examples) {
  EXPECT_GE(verify_alpha_power_inequality(0.7, 1000000), -1e-15);
  EXPECT_GE(verify_alpha_power_inequality(0.5, 100000), -1e-15);
  EXPECT_GE(verify_alpha_power_inequality(1.0, 100000), -1e-15);
  EXPECT_THROW(verify_alpha_power_inequality(1.5, 1000), UsageError);
  EXPECT_THROW(verify_alpha_power_inequality(0.0, 1000), UsageError);
}

TEST(LAlphaScan, Examples) {
  const std::vector<std::uint64_t> one{1};
  EXPECT_NEAR(lalpha_bound_scan(SourceSpec::uniform(), 2.0, one).values[0], 1.0 / (2.0 * std::sqrt(3.0)), 1e-4);
  EXPECT_NEAR(lalpha_bound_scan(SourceSpec::uniform(), 2.0, one).limit, 0.2820948, 5e-8);
  const auto g = lalpha_bound_scan(SourceSpec::gaussian(), 0.5, powers_of_two(1, 256));
  for (double v : g.values) EXPECT_NEAR(v, g.limit, 1e-10);
}

TEST(AbsMomentScan, Examples) {
  const auto ns = powers_of_two(2, 1024);
  for (auto kind : {SourceKind::uniform, SourceKind::centered_exponential, SourceKind::laplace}) {
    const auto r = abs_moment_scan(default_source(kind), 2, ns);
    for (double v : r.values) EXPECT_NEAR(v, 1.0, 1e-4);
  }
  EXPECT_NEAR(gaussian_abs_moment(3.0), 2.0 * std::sqrt(2.0 / std::numbers::pi), 1e-15);
  EXPECT_NEAR(gaussian_abs_moment(3.0), 1.5957691, 5e-8);
  const auto e4 = abs_moment_scan(SourceSpec::centered_exponential(), 4, ns);
  EXPECT_TRUE(std::isfinite(e4.sup));
  EXPECT_DOUBLE_EQ(e4.limit, 3.0);
  EXPECT_NEAR(e4.values.back(), 3.0, 0.01);
  // E S_n^4 = 3 + kappa4 / n with kappa4 = 6 for the centered exponential.
  for (std::size_t i = 0; i < ns.size(); ++i)
    EXPECT_NEAR(e4.values[i], 3.0 + 6.0 / static_cast<double>(ns[i]), 1e-4) << "n=" << ns[i];
  EXPECT_THROW(abs_moment_scan(SourceSpec::uniform(), 1, ns), UsageError);
}

TEST(Rates, ExponentialRenyiBounds) {
  const std::vector<SeriesRequest> req{{EntropyOrder(2), EntropyKind::renyi}, {EntropyOrder(4), EntropyKind::renyi},
                                       {EntropyOrder(0.5), EntropyKind::renyi}, {EntropyOrder(1), EntropyKind::shannon}};
  for (const auto& s : error_series_batch(SourceSpec::centered_exponential(), req, powers_of_two(16, 4096))) {
    const RateFit f = fit_loglog(s);
    EXPECT_TRUE(rate_bound_holds(f)) << s.order.alpha() << " slope " << f.slope;
    EXPECT_GE(f.r_squared, 0.98);
  }
}

TEST(PowersOfTwo, Examples) {
  EXPECT_EQ(powers_of_two(16, 128), (std::vector<std::uint64_t>{16, 32, 64, 128}));
  EXPECT_THROW(powers_of_two(3, 8), UsageError);
  EXPECT_THROW(powers_of_two(8, 4), UsageError);
}
