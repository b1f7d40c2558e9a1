#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "clt/density.hpp"
#include "clt/distributions.hpp"
#include "clt/edgeworth.hpp"
#include "clt/entropy.hpp"

namespace clt {

struct RatePoint {
  std::uint64_t n;
  double error;
};

/// Errors |E(S_n) - E(G)| for one (source, order, kind).
struct RateSeries {
  SourceSpec source;
  EntropyOrder order;
  EntropyKind kind;
  std::vector<RatePoint> points;
};

struct RateFit {
  double slope;
  double intercept;
  double r_squared;
  double theoretical_exponent;
  double gamma;
  std::size_t used_points;
};

/// Raised when too few series points lie above the error floor to fit a line.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kFitErrorFloor = 1e-11;
inline constexpr double kDefaultGamma = 0.05;
inline constexpr std::size_t kDefaultSkipFirst = 2;

struct SeriesOptions {
  /// Defaults to default_grid(smallest requested order).
  std::optional<Grid> grid;
  InversionOptions inversion;
  unsigned workers = 0;
};

struct SeriesRequest {
  EntropyOrder order;
  EntropyKind kind;
};

/// Throws UsageError unless ns is nonempty, positive and strictly increasing.
void require_increasing(std::span<const std::uint64_t> ns);

/// Densities for every n (n = 1 is sampled analytically), computed in parallel.
std::vector<GridDensity> densities_for(const SourceSpec& spec, std::span<const std::uint64_t> ns,
                                       const Grid& grid, const InversionOptions& inversion = {},
                                       unsigned workers = 0);

RateSeries error_series(const SourceSpec& spec, EntropyOrder order, EntropyKind kind,
                        std::span<const std::uint64_t> ns, const SeriesOptions& options = {});

/// Several series over the same ns sharing one density per n.
std::vector<RateSeries> error_series_batch(const SourceSpec& spec,
                                           std::span<const SeriesRequest> requests,
                                           std::span<const std::uint64_t> ns,
                                           const SeriesOptions& options = {});

/// Least squares on (log n, log error) after dropping the first `skip_first`
/// points and any error below kFitErrorFloor. Throws FitError with the text
/// "below tolerance floor" when fewer than 3 points remain.
RateFit fit_loglog(const RateSeries& series, std::size_t skip_first = kDefaultSkipFirst,
                   double gamma = kDefaultGamma);

/// -1/2 for alpha > 1, -(alpha/2 - gamma) otherwise. Throws UsageError unless
/// 0 < gamma < alpha/2 when alpha <= 1.
double theoretical_exponent(EntropyOrder order, double gamma);

/// slope <= theoretical exponent + slack.
bool rate_bound_holds(const RateFit& fit, double slack = 0.1);

/// 2 sup_{0 < x <= 1} |x^g - (1 - 2g) x^g log x|. Throws UsageError unless 0 < g < 1/2.
double q_gamma(double gamma);

struct LemmaSixCertificate {
  double gamma;
  double q_gamma;
  std::size_t search_points;
  double max_violation;  // smallest slack found

  bool holds() const noexcept { return max_violation >= -1e-12; }
};

/// Slack Q|x^(1-g) - y^(1-g)| - |x^g y^(1-g) log x - y^g x^(1-g) log y| on a
/// resolution x resolution lattice over [0, 1]^2. Throws UsageError for
/// resolution < 1000 or gamma outside (0, 1/2).
LemmaSixCertificate verify_lemma6(double gamma, std::size_t resolution);

/// Smallest |b - c|^alpha - |b^alpha - c^alpha| over a deterministic
/// low-discrepancy sample of [0, 1]^2. Throws UsageError unless 0 < alpha <= 1.
double verify_alpha_power_inequality(double alpha, std::size_t samples);

struct ScanResult {
  std::vector<std::uint64_t> ns;
  std::vector<double> values;
  double sup;
  double limit;  // Gaussian value the sequence should approach
};

/// Integral of f_n^alpha per n.
ScanResult lalpha_bound_scan(const SourceSpec& spec, double alpha, std::span<const std::uint64_t> ns,
                             const SeriesOptions& options = {});

/// E|S_n|^k per n. Throws UsageError for k < 2.
ScanResult abs_moment_scan(const SourceSpec& spec, int k, std::span<const std::uint64_t> ns,
                           const SeriesOptions& options = {});

/// E|G|^s = 2^(s/2) Gamma((s+1)/2) / sqrt(pi).
double gaussian_abs_moment(double s);

struct EdgeworthPoint {
  std::uint64_t n;
  double sup_residual;
  double scaled_residual;
};

/// Residual of f_n against the first-order expansion with the source's mu3.
std::vector<EdgeworthPoint> edgeworth_residual_series(const SourceSpec& spec,
                                                      std::span<const std::uint64_t> ns,
                                                      const SeriesOptions& options = {});

struct ContinuityPoint {
  std::uint64_t n;
  double alpha;
  double ratio;  // |T_alpha - H| / |alpha - 1|
};

/// Tsallis-to-Shannon difference quotients for every (n, alpha).
std::vector<ContinuityPoint> tsallis_continuity_scan(const SourceSpec& spec,
                                                     std::span<const double> alphas,
                                                     std::span<const std::uint64_t> ns,
                                                     const SeriesOptions& options = {});

/// Powers of two a, 2a, ..., b. Throws UsageError unless a, b are powers of two with a <= b.
std::vector<std::uint64_t> powers_of_two(std::uint64_t a, std::uint64_t b);

}  // namespace clt
