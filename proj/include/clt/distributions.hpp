#pragma once

#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace clt {

enum class SourceKind { gaussian, uniform, centered_exponential, laplace, gaussian_mixture };

struct MixtureComponent {
  double weight;
  double mean;
  double sd;
};

/// A source law X with E[X] = 0 and E[X^2] = 1. Immutable after construction.
///
/// Uniform is uniform on [-sqrt3, sqrt3], CenteredExponential is E - 1 with
/// E ~ Exp(1), Laplace has scale 1/sqrt2. A Gaussian mixture is given in raw
/// units and rescaled affinely; the raw parameters are kept for serialization.
class SourceSpec {
 public:
  static SourceSpec gaussian();
  static SourceSpec uniform();
  static SourceSpec centered_exponential();
  static SourceSpec laplace();
  /// Throws UsageError on empty input, nonpositive weights or sds.
  static SourceSpec gaussian_mixture(std::vector<MixtureComponent> raw);
  /// Two components at -1 and +1 with sd 0.5 and equal weight.
  static SourceSpec default_mixture();

  SourceKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;

  /// Standardized mixture components (empty for other kinds).
  const std::vector<MixtureComponent>& components() const noexcept { return comps_; }
  /// Mixture components as supplied.
  const std::vector<MixtureComponent>& raw_components() const noexcept { return raw_; }

  bool operator==(const SourceSpec& other) const;

 private:
  explicit SourceSpec(SourceKind kind) : kind_(kind) {}

  SourceKind kind_;
  std::vector<MixtureComponent> raw_;
  std::vector<MixtureComponent> comps_;
};

/// Accepts the canonical names plus the aliases "normal", "exp", "exponential", "mixture".
SourceKind parse_source_kind(std::string_view name);
std::string_view source_kind_name(SourceKind kind);

/// Source of the given kind with default parameters.
SourceSpec default_source(SourceKind kind);

double density_at(const SourceSpec& spec, double x);

/// One-sided limit of the density at x: side < 0 from the left, side > 0 from the right.
double density_limit(const SourceSpec& spec, double x, int side);

/// Points where the density jumps, sorted (empty for continuous densities).
std::vector<double> jump_points(const SourceSpec& spec);

struct SlopeJump {
  double x;
  double jump;  // f'(x+) - f'(x-)
};

/// Points where a continuous density has a kink (empty when there are none).
std::vector<SlopeJump> slope_jumps(const SourceSpec& spec);

/// phi(t) = E exp(itX).
std::complex<double> cf_at(const SourceSpec& spec, double t);

/// Smallest n for which |phi|^n is integrable. Uniform and CenteredExponential
/// decay like 1/|t| and need n >= 2; the others decay fast enough for n = 1.
int min_integrable_power(const SourceSpec& spec);

struct MomentSet {
  double mu3 = 0.0;
  std::map<int, double> abs_moments;  // k -> E|X|^k, k = 1..k_max
};

/// Throws UsageError for k_max < 3.
MomentSet moments(const SourceSpec& spec, int k_max);

/// E|X|^s for real s > 0.
double abs_moment(const SourceSpec& spec, double s);

// Exponential tilting. K(tau) = E exp(tau X) is finite on the open interval
// tilt_domain(spec). The tilted law has density exp(tau x) f(x) / K(tau).

struct Interval {
  double lo;
  double hi;
};

Interval tilt_domain(const SourceSpec& spec);
double log_mgf(const SourceSpec& spec, double tau);
double tilted_mean(const SourceSpec& spec, double tau);
double tilted_variance(const SourceSpec& spec, double tau);

/// Characteristic function of the tilted law at u: phi(u - i tau) / K(tau).
std::complex<double> tilted_cf(const SourceSpec& spec, double u, double tau);

/// tilted_cf with the per-tilt constants computed once, for evaluation in bulk.
class TiltedCf {
 public:
  TiltedCf(const SourceSpec& spec, double tau);
  std::complex<double> operator()(double u) const noexcept;

  /// out[j] = (*this)(u0 + j*du) for j < count; returns max |out[j]|^2.
  /// Phases advance by rotation and are recomputed exactly every few steps.
  double evaluate_progression(double u0, double du, std::size_t count,
                              std::complex<double>* out) const;

  /// Upper bound on |(*this)(u)| for |u| >= v; nonincreasing in v >= 0.
  double envelope(double v) const noexcept;

 private:
  SourceKind kind_;
  double tau_;
  double coth_;   // uniform: coth(sqrt3 tau)
  double scale_;  // exponential: 1 - tau; laplace: 1 - tau^2/2
  struct Term {
    double weight, var, loc;
  };
  std::vector<Term> terms_;  // mixture: tilted weights, variances, shifted means
};

/// Closure of the set of tilted means; endpoints may be infinite.
Interval tilted_mean_range(const SourceSpec& spec);

/// Solves tilted_mean(tau) = mean by bisection. `mean` must lie inside the range.
double tilt_for_mean(const SourceSpec& spec, double mean);

}  // namespace clt
