#include "clt/analysis.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "clt/errors.hpp"
#include "clt/fft.hpp"
#include "clt/kernels.hpp"
#include "clt/parallel.hpp"

namespace clt {
namespace {

// Runs fn, tagging numerical failures with the source and n.
template <class Fn>
auto at_n(const SourceSpec& spec, std::uint64_t n, Fn fn) {
  try {
    return fn();
  } catch (const NumericalError& e) {
    throw NumericalError(e.check(), e.detail() + " [source " + std::string(spec.name()) +
                                        ", n=" + std::to_string(n) + "]");
  }
}

Grid grid_for(const SeriesOptions& options, double alpha_min) {
  return options.grid ? build_grid(options.grid->half_width, options.grid->points)
                      : default_grid(std::min(alpha_min, 1.0));
}

double d_gamma(double gamma, double y) {
  // d(x) with x = exp(-y).
  return std::exp(-gamma * y) * (1.0 + (1.0 - 2.0 * gamma) * y);
}

}  // namespace

void require_increasing(std::span<const std::uint64_t> ns) {
  if (ns.empty()) throw UsageError("ns must be nonempty");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1) throw UsageError("ns must be positive");
    if (i > 0 && ns[i] <= ns[i - 1]) throw UsageError("ns must be strictly increasing");
  }
}

std::vector<GridDensity> densities_for(const SourceSpec& spec, std::span<const std::uint64_t> ns,
                                       const Grid& grid, const InversionOptions& inversion,
                                       unsigned workers) {
  require_increasing(ns);
  return parallel_map(
      ns.size(),
      [&](std::size_t i) {
        return at_n(spec, ns[i], [&] { return density_for(spec, ns[i], grid, inversion); });
      },
      workers);
}

std::vector<RateSeries> error_series_batch(const SourceSpec& spec,
                                           std::span<const SeriesRequest> requests,
                                           std::span<const std::uint64_t> ns,
                                           const SeriesOptions& options) {
  double alpha_min = 1.0;
  for (const auto& r : requests) {
    if (r.kind != EntropyKind::shannon) require_supported_order(r.order);
    alpha_min = std::min(alpha_min, r.order.alpha());
  }
  const Grid grid = grid_for(options, alpha_min);
  const auto dens = densities_for(spec, ns, grid, options.inversion, options.workers);
  std::vector<RateSeries> out;
  for (const auto& r : requests) {
    const double ref = gaussian_closed(r.kind, r.order).value;
    RateSeries s{spec, r.order, r.kind, {}};
    for (std::size_t i = 0; i < ns.size(); ++i)
      s.points.push_back({ns[i], at_n(spec, ns[i], [&] {
                            return std::fabs(entropy_of(dens[i], r.kind, r.order).value - ref);
                          })});
    out.push_back(std::move(s));
  }
  return out;
}

RateSeries error_series(const SourceSpec& spec, EntropyOrder order, EntropyKind kind,
                        std::span<const std::uint64_t> ns, const SeriesOptions& options) {
  const SeriesRequest req{order, kind};
  return error_series_batch(spec, std::span(&req, 1), ns, options).front();
}

RateFit fit_loglog(const RateSeries& series, std::size_t skip_first, double gamma) {
  std::vector<double> lx, ly;
  for (std::size_t i = skip_first; i < series.points.size(); ++i) {
    const auto& p = series.points[i];
    if (!(p.error >= kFitErrorFloor)) continue;
    lx.push_back(std::log(static_cast<double>(p.n)));
    ly.push_back(std::log(p.error));
  }
  if (lx.size() < 3)
    throw FitError("below tolerance floor: " + std::to_string(lx.size()) +
                   " usable points after skipping and dropping errors < 1e-11");
  const double k = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw FitError("below tolerance floor: all usable points share one n");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (intercept + slope * lx[i]);
    ss_res += r * r;
  }
  const double r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return {slope, intercept, r2, theoretical_exponent(series.order, gamma), gamma, lx.size()};
}

double theoretical_exponent(EntropyOrder order, double gamma) {
  const double a = order.alpha();
  if (a > 1.0) return -0.5;
  if (!(gamma > 0.0 && gamma < a / 2.0))
    throw UsageError("gamma must satisfy 0 < gamma < alpha/2 (alpha=" + std::to_string(a) +
                     ", gamma=" + std::to_string(gamma) + ")");
  return -(a / 2.0 - gamma);
}

bool rate_bound_holds(const RateFit& fit, double slack) {
  return fit.slope <= fit.theoretical_exponent + slack;
}

double q_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 0.5)) throw UsageError("gamma must lie in (0, 1/2)");
  // In y = -log x the function is log-concave, so Brent finds the global maximum.
  const double y_max = 60.0 / gamma;
  const auto r = boost::math::tools::brent_find_minima(
      [gamma](double y) { return -d_gamma(gamma, y); }, 0.0, y_max, 60);
  return 2.0 * std::max(d_gamma(gamma, 0.0), -r.second);
}

LemmaSixCertificate verify_lemma6(double gamma, std::size_t resolution) {
  if (!(gamma > 0.0 && gamma < 0.5)) throw UsageError("gamma must lie in (0, 1/2)");
  if (resolution < 1000) throw UsageError("certificate lattice needs resolution >= 1000");
  const double q = q_gamma(gamma);
  std::vector<double> b(resolution), p(resolution);
  for (std::size_t i = 0; i < resolution; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(resolution - 1);
    b[i] = std::pow(x, 1.0 - gamma);
    p[i] = x > 0.0 ? std::pow(x, gamma) * std::log(x) : 0.0;
  }
  const auto& k = kernels::active();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < resolution; ++i)
    worst = std::min(worst, k.lemma6_row_min(q, b[i], p[i], b.data(), p.data(), resolution));
  return {gamma, q, resolution * resolution, worst};
}

double verify_alpha_power_inequality(double alpha, std::size_t samples) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw UsageError("alpha power inequality needs 0 < alpha <= 1");
  if (samples == 0) throw UsageError("need at least one sample");
  // Additive recurrence with the plastic number (R2 sequence), plus the corners.
  const double g = 1.32471795724474602596;
  const double a1 = 1.0 / g, a2 = 1.0 / (g * g);
  auto slack = [alpha](double b, double c) {
    return std::pow(std::fabs(b - c), alpha) - std::fabs(std::pow(b, alpha) - std::pow(c, alpha));
  };
  double worst = std::min({slack(0, 0), slack(1, 0), slack(0, 1), slack(1, 1)});
  for (std::size_t k = 1; k <= samples; ++k) {
    const double kk = static_cast<double>(k);
    const double b = std::fmod(0.5 + a1 * kk, 1.0), c = std::fmod(0.5 + a2 * kk, 1.0);
    worst = std::min(worst, slack(b, c));
  }
  return worst;
}

ScanResult lalpha_bound_scan(const SourceSpec& spec, double alpha, std::span<const std::uint64_t> ns,
                             const SeriesOptions& options) {
  const EntropyOrder order(alpha);
  require_supported_order(order);
  const Grid grid = grid_for(options, alpha);
  const auto dens = densities_for(spec, ns, grid, options.inversion, options.workers);
  ScanResult r{{ns.begin(), ns.end()}, {}, 0.0, gaussian_power_integral(alpha)};
  for (const auto& d : dens) {
    r.values.push_back(at_n(spec, d.n, [&] { return power_integral(d, order); }));
    r.sup = std::max(r.sup, r.values.back());
  }
  return r;
}

double gaussian_abs_moment(double s) {
  return std::pow(2.0, 0.5 * s) * std::tgamma(0.5 * (s + 1.0)) / std::sqrt(std::numbers::pi);
}

ScanResult abs_moment_scan(const SourceSpec& spec, int k, std::span<const std::uint64_t> ns,
                           const SeriesOptions& options) {
  if (k < 2) throw UsageError("abs_moment_scan needs k >= 2");
  const Grid grid = grid_for(options, 1.0);
  const auto dens = densities_for(spec, ns, grid, options.inversion, options.workers);
  ScanResult r{{ns.begin(), ns.end()}, {}, 0.0, gaussian_abs_moment(k)};
  for (const auto& d : dens) {
    r.values.push_back(at_n(spec, d.n, [&] { return absolute_moment(d, k); }));
    r.sup = std::max(r.sup, r.values.back());
  }
  return r;
}

std::vector<EdgeworthPoint> edgeworth_residual_series(const SourceSpec& spec,
                                                      std::span<const std::uint64_t> ns,
                                                      const SeriesOptions& options) {
  const Grid grid = grid_for(options, 1.0);
  const double mu3 = moments(spec, 3).mu3;
  const auto dens = densities_for(spec, ns, grid, options.inversion, options.workers);
  std::vector<EdgeworthPoint> out;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const Residual r =
        at_n(spec, ns[i], [&] { return residual_sup(dens[i], edgeworth_approx(grid, mu3, ns[i])); });
    out.push_back({ns[i], r.sup, r.scaled});
  }
  return out;
}

std::vector<ContinuityPoint> tsallis_continuity_scan(const SourceSpec& spec,
                                                     std::span<const double> alphas,
                                                     std::span<const std::uint64_t> ns,
                                                     const SeriesOptions& options) {
  double alpha_min = 1.0;
  for (double a : alphas) {
    if (a == 1.0) throw UsageError("continuity scan needs alpha != 1");
    require_supported_order(EntropyOrder(a));
    alpha_min = std::min(alpha_min, a);
  }
  const Grid grid = grid_for(options, alpha_min);
  const auto dens = densities_for(spec, ns, grid, options.inversion, options.workers);
  std::vector<ContinuityPoint> out;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    at_n(spec, ns[i], [&] {
      const double h = shannon(dens[i]).value;
      for (double a : alphas)
        out.push_back({ns[i], a, std::fabs(tsallis(dens[i], EntropyOrder(a)).value - h) /
                                     std::fabs(a - 1.0)});
      return 0;
    });
  }
  return out;
}

std::vector<std::uint64_t> powers_of_two(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0 || !is_power_of_two(a) || !is_power_of_two(b) || a > b)
    throw UsageError("range a:b needs powers of two with a <= b");
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = a; n <= b; n *= 2) {
    out.push_back(n);
    if (n == b) break;
  }
  return out;
}

}  // namespace clt
