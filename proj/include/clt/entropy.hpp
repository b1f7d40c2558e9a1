#pragma once

#include <span>
#include <string_view>

#include "clt/density.hpp"

namespace clt {

/// Entropy order alpha > 0. Throws UsageError otherwise.
class EntropyOrder {
 public:
  explicit EntropyOrder(double alpha);
  double alpha() const noexcept { return alpha_; }
  bool is_shannon() const noexcept { return alpha_ == 1.0; }
  bool operator==(const EntropyOrder&) const = default;

 private:
  double alpha_;
};

enum class EntropyKind { shannon, renyi, tsallis };
enum class EntropyMethod { quadrature, closed_form, bijection };

std::string_view entropy_kind_name(EntropyKind kind);
std::string_view entropy_method_name(EntropyMethod method);
EntropyKind parse_entropy_kind(std::string_view name);

/// Value in nats.
struct EntropyValue {
  EntropyOrder order;
  EntropyKind kind;
  double value;
  EntropyMethod method;
};

/// Orders accepted by the grid quadratures.
inline constexpr double kMinSupportedAlpha = 0.1;
inline constexpr double kMaxSupportedAlpha = 16.0;

/// Throws UsageError outside [kMinSupportedAlpha, kMaxSupportedAlpha].
void require_supported_order(EntropyOrder order);

/// Integral of f^alpha over the grid; zero-valued nodes contribute 0.
/// Throws NumericalError if the result underflows to 0.
double power_integral(const GridDensity& gd, EntropyOrder order);

/// Closed form (2 pi)^((1 - alpha)/2) alpha^(-1/2).
double gaussian_power_integral(double alpha);

/// log sqrt(2 pi e).
double gaussian_shannon_entropy();

EntropyValue shannon(const GridDensity& gd);
/// alpha = 1 returns shannon(gd).
EntropyValue renyi(const GridDensity& gd, EntropyOrder order);
/// alpha = 1 returns shannon(gd).
EntropyValue tsallis(const GridDensity& gd, EntropyOrder order);

EntropyValue gaussian_renyi_closed(EntropyOrder order);
EntropyValue gaussian_tsallis_closed(EntropyOrder order);

/// Same-kind closed form for the Gaussian reference.
EntropyValue gaussian_closed(EntropyKind kind, EntropyOrder order);

/// Quadrature entropy of the requested kind. Shannon ignores `order`.
EntropyValue entropy_of(const GridDensity& gd, EntropyKind kind, EntropyOrder order);

/// R = log(1 - (alpha - 1) T) / (1 - alpha). Throws UsageError unless t is a
/// Tsallis value and the log argument is positive.
EntropyValue renyi_from_tsallis(const EntropyValue& t, EntropyOrder order);

/// E|S|^s of the grid density.
double absolute_moment(const GridDensity& gd, double s);

/// Upper bound (1/s) log[E|S|^s (2 Gamma(1/s))^s e s^(1-s)] on the Shannon
/// entropy of a density with the given s-th absolute moment. Throws UsageError for s <= 0.
double shannon_moment_bound(double s, double abs_moment);

/// Same bound with the moment taken from the grid density.
double shannon_moment_bound(const GridDensity& gd, double s);

}  // namespace clt
