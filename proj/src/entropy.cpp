#include "clt/entropy.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "clt/errors.hpp"
#include "clt/kernels.hpp"

namespace clt {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

EntropyOrder::EntropyOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw UsageError("entropy order alpha must be a finite positive number");
}

std::string_view entropy_kind_name(EntropyKind kind) {
  switch (kind) {
    case EntropyKind::shannon: return "shannon";
    case EntropyKind::renyi: return "renyi";
    case EntropyKind::tsallis: return "tsallis";
  }
  return "unknown";
}

std::string_view entropy_method_name(EntropyMethod method) {
  switch (method) {
    case EntropyMethod::quadrature: return "quadrature";
    case EntropyMethod::closed_form: return "closed_form";
    case EntropyMethod::bijection: return "bijection";
  }
  return "unknown";
}

EntropyKind parse_entropy_kind(std::string_view name) {
  if (name == "shannon") return EntropyKind::shannon;
  if (name == "renyi") return EntropyKind::renyi;
  if (name == "tsallis") return EntropyKind::tsallis;
  throw UsageError("unknown entropy kind '" + std::string(name) + "'");
}

void require_supported_order(EntropyOrder order) {
  if (order.alpha() < kMinSupportedAlpha || order.alpha() > kMaxSupportedAlpha)
    throw UsageError("entropy order " + std::to_string(order.alpha()) +
                     " is outside the supported range [0.1, 16]");
}

double power_integral(const GridDensity& gd, EntropyOrder order) {
  const double a = order.alpha();
  std::vector<double> w(gd.values.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double v = gd.values[j];
    w[j] = v > 0.0 ? (a == 2.0 ? v * v : std::pow(v, a)) : 0.0;
  }
  const double total = kernels::active().sum(w.data(), w.size()) * gd.grid.spacing();
  if (!(total > 0.0))
    throw NumericalError("power-integral-underflow",
                         "integral of f^" + std::to_string(a) + " underflowed to 0");
  return total;
}

double gaussian_power_integral(double alpha) {
  return std::pow(2.0 * kPi, 0.5 * (1.0 - alpha)) / std::sqrt(alpha);
}

double gaussian_shannon_entropy() { return 0.5 * std::log(2.0 * kPi * std::numbers::e); }

EntropyValue shannon(const GridDensity& gd) {
  std::vector<double> w(gd.values.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double v = gd.values[j];
    w[j] = v > 0.0 ? -v * std::log(v) : 0.0;
  }
  const double h = kernels::active().sum(w.data(), w.size()) * gd.grid.spacing();
  return {EntropyOrder(1.0), EntropyKind::shannon, h, EntropyMethod::quadrature};
}

EntropyValue renyi(const GridDensity& gd, EntropyOrder order) {
  if (order.is_shannon()) return shannon(gd);
  require_supported_order(order);
  const double a = order.alpha();
  return {order, EntropyKind::renyi, std::log(power_integral(gd, order)) / (1.0 - a),
          EntropyMethod::quadrature};
}

EntropyValue tsallis(const GridDensity& gd, EntropyOrder order) {
  if (order.is_shannon()) return shannon(gd);
  require_supported_order(order);
  const double a = order.alpha();
  return {order, EntropyKind::tsallis, (1.0 - power_integral(gd, order)) / (a - 1.0),
          EntropyMethod::quadrature};
}

EntropyValue gaussian_renyi_closed(EntropyOrder order) {
  const double a = order.alpha();
  const double v = order.is_shannon() ? gaussian_shannon_entropy()
                                      : 0.5 * std::log(2.0 * kPi) + std::log(a) / (2.0 * (a - 1.0));
  return {order, EntropyKind::renyi, v, EntropyMethod::closed_form};
}

EntropyValue gaussian_tsallis_closed(EntropyOrder order) {
  const double a = order.alpha();
  const double v = order.is_shannon() ? gaussian_shannon_entropy()
                                      : (1.0 - gaussian_power_integral(a)) / (a - 1.0);
  return {order, EntropyKind::tsallis, v, EntropyMethod::closed_form};
}

EntropyValue gaussian_closed(EntropyKind kind, EntropyOrder order) {
  switch (kind) {
    case EntropyKind::shannon:
      return {EntropyOrder(1.0), EntropyKind::shannon, gaussian_shannon_entropy(),
              EntropyMethod::closed_form};
    case EntropyKind::renyi: return gaussian_renyi_closed(order);
    case EntropyKind::tsallis: return gaussian_tsallis_closed(order);
  }
  throw UsageError("unknown entropy kind");
}

EntropyValue entropy_of(const GridDensity& gd, EntropyKind kind, EntropyOrder order) {
  switch (kind) {
    case EntropyKind::shannon: return shannon(gd);
    case EntropyKind::renyi: return renyi(gd, order);
    case EntropyKind::tsallis: return tsallis(gd, order);
  }
  throw UsageError("unknown entropy kind");
}

EntropyValue renyi_from_tsallis(const EntropyValue& t, EntropyOrder order) {
  if (t.kind != EntropyKind::tsallis)
    throw UsageError("renyi_from_tsallis expects a Tsallis entropy value");
  const double a = order.alpha();
  if (order.is_shannon()) return {order, EntropyKind::renyi, t.value, EntropyMethod::bijection};
  const double arg = 1.0 - (a - 1.0) * t.value;
  if (!(arg > 0.0))
    throw UsageError("renyi_from_tsallis: log argument " + std::to_string(arg) +
                     " is not positive");
  return {order, EntropyKind::renyi, std::log(arg) / (1.0 - a), EntropyMethod::bijection};
}

double absolute_moment(const GridDensity& gd, double s) {
  if (!(s > 0.0)) throw UsageError("moment order must be positive");
  std::vector<double> w(gd.values.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double x = std::fabs(gd.grid.x(j));
    w[j] = s == 2.0 ? x * x : std::pow(x, s);
  }
  return kernels::active().dot(w.data(), gd.values.data(), w.size()) * gd.grid.spacing();
}

double shannon_moment_bound(double s, double abs_moment) {
  if (!(s > 0.0)) throw UsageError("moment bound needs s > 0");
  if (!(abs_moment > 0.0)) throw UsageError("moment bound needs a positive moment");
  return (std::log(abs_moment) + s * std::log(2.0 * std::tgamma(1.0 / s)) + 1.0 +
          (1.0 - s) * std::log(s)) /
         s;
}

double shannon_moment_bound(const GridDensity& gd, double s) {
  if (!(s > 0.0)) throw UsageError("moment bound needs s > 0");
  return shannon_moment_bound(s, absolute_moment(gd, s));
}

}  // namespace clt
