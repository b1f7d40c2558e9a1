#include "clt/distributions.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "clt/errors.hpp"

namespace clt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt3 = std::sqrt(3.0);
const double kSqrt2 = std::numbers::sqrt2;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
const double kLaplaceScale = 1.0 / std::numbers::sqrt2;

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

// Integrates g over the real line, split at `cuts`, widening the window until
// the added tail mass is below rel_tol of the total.
template <class F>
double integrate_line(F g, std::vector<double> cuts, double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  auto piece = [&](double a, double b) {
    return gauss_kronrod<double, 61>::integrate(g, a, b, 20, 1e-13);
  };
  double window = 8.0;
  for (double c : cuts) window = std::max(window, 2.0 * std::fabs(c));
  cuts.push_back(-window);
  cuts.push_back(window);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += piece(cuts[i], cuts[i + 1]);
  for (int iter = 0; iter < 12; ++iter) {
    const double add = piece(window, 2.0 * window) + piece(-2.0 * window, -window);
    total += add;
    window *= 2.0;
    if (std::fabs(add) <= rel_tol * std::fabs(total)) return total;
  }
  throw NumericalError("moment-quadrature", "tail did not converge");
}

// x coth x - 1 = sum c_k x^(2k), used for small uniform tilts.
constexpr double kCothSeries[] = {1.0 / 3.0, -1.0 / 45.0, 2.0 / 945.0, -1.0 / 4725.0,
                                  2.0 / 93555.0};

struct MixtureTerms {
  std::vector<double> omega;  // tilted weights
  double log_k;
};

MixtureTerms mixture_terms(const std::vector<MixtureComponent>& comps, double tau) {
  MixtureTerms out;
  out.omega.resize(comps.size());
  double peak = -kInf;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto& c = comps[i];
    out.omega[i] = std::log(c.weight) + c.mean * tau + 0.5 * c.sd * c.sd * tau * tau;
    peak = std::max(peak, out.omega[i]);
  }
  double total = 0.0;
  for (double& w : out.omega) total += (w = std::exp(w - peak));
  for (double& w : out.omega) w /= total;
  out.log_k = peak + std::log(total);
  return out;
}

double bisect_mean(const SourceSpec& spec, double target) {
  double lo = -1.0, hi = 1.0;
  while (tilted_mean(spec, lo) > target) lo *= 2.0;
  while (tilted_mean(spec, hi) < target) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (tilted_mean(spec, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SourceSpec SourceSpec::gaussian() { return SourceSpec(SourceKind::gaussian); }
SourceSpec SourceSpec::uniform() { return SourceSpec(SourceKind::uniform); }
SourceSpec SourceSpec::centered_exponential() {
  return SourceSpec(SourceKind::centered_exponential);
}
SourceSpec SourceSpec::laplace() { return SourceSpec(SourceKind::laplace); }

SourceSpec SourceSpec::gaussian_mixture(std::vector<MixtureComponent> raw) {
  if (raw.empty()) throw UsageError("gaussian_mixture needs at least one component");
  double wsum = 0.0;
  for (const auto& c : raw) {
    if (!(c.weight > 0.0) || !std::isfinite(c.weight))
      throw UsageError("gaussian_mixture weights must be positive");
    if (!(c.sd > 0.0) || !std::isfinite(c.sd))
      throw UsageError("gaussian_mixture sds must be positive");
    if (!std::isfinite(c.mean)) throw UsageError("gaussian_mixture means must be finite");
    wsum += c.weight;
  }
  double mean = 0.0, second = 0.0;
  for (const auto& c : raw) {
    mean += c.weight / wsum * c.mean;
    second += c.weight / wsum * (c.sd * c.sd + c.mean * c.mean);
  }
  const double scale = std::sqrt(second - mean * mean);
  SourceSpec spec(SourceKind::gaussian_mixture);
  spec.raw_ = raw;
  for (const auto& c : raw)
    spec.comps_.push_back({c.weight / wsum, (c.mean - mean) / scale, c.sd / scale});
  return spec;
}

SourceSpec SourceSpec::default_mixture() {
  return gaussian_mixture({{0.5, -1.0, 0.5}, {0.5, 1.0, 0.5}});
}

std::string_view SourceSpec::name() const noexcept { return source_kind_name(kind_); }

bool SourceSpec::operator==(const SourceSpec& other) const {
  if (kind_ != other.kind_ || raw_.size() != other.raw_.size()) return false;
  for (std::size_t i = 0; i < raw_.size(); ++i) {
    const auto &a = raw_[i], &b = other.raw_[i];
    if (a.weight != b.weight || a.mean != b.mean || a.sd != b.sd) return false;
  }
  return true;
}

SourceKind parse_source_kind(std::string_view name) {
  if (name == "gaussian" || name == "normal") return SourceKind::gaussian;
  if (name == "uniform") return SourceKind::uniform;
  if (name == "centered_exponential" || name == "exp" || name == "exponential")
    return SourceKind::centered_exponential;
  if (name == "laplace") return SourceKind::laplace;
  if (name == "gaussian_mixture" || name == "mixture") return SourceKind::gaussian_mixture;
  throw UsageError("unknown source kind '" + std::string(name) + "'");
}

std::string_view source_kind_name(SourceKind kind) {
  switch (kind) {
    case SourceKind::gaussian: return "gaussian";
    case SourceKind::uniform: return "uniform";
    case SourceKind::centered_exponential: return "centered_exponential";
    case SourceKind::laplace: return "laplace";
    case SourceKind::gaussian_mixture: return "gaussian_mixture";
  }
  return "unknown";
}

SourceSpec default_source(SourceKind kind) {
  switch (kind) {
    case SourceKind::gaussian: return SourceSpec::gaussian();
    case SourceKind::uniform: return SourceSpec::uniform();
    case SourceKind::centered_exponential: return SourceSpec::centered_exponential();
    case SourceKind::laplace: return SourceSpec::laplace();
    case SourceKind::gaussian_mixture: return SourceSpec::default_mixture();
  }
  throw UsageError("unknown source kind");
}

double density_at(const SourceSpec& spec, double x) {
  switch (spec.kind()) {
    case SourceKind::gaussian: return normal_pdf(x);
    case SourceKind::uniform: return std::fabs(x) <= kSqrt3 ? 0.5 / kSqrt3 : 0.0;
    case SourceKind::centered_exponential: return x >= -1.0 ? std::exp(-1.0 - x) : 0.0;
    case SourceKind::laplace: return std::exp(-std::fabs(x) / kLaplaceScale) / (2.0 * kLaplaceScale);
    case SourceKind::gaussian_mixture: {
      double v = 0.0;
      for (const auto& c : spec.components()) v += c.weight * normal_pdf((x - c.mean) / c.sd) / c.sd;
      return v;
    }
  }
  return 0.0;
}

double density_limit(const SourceSpec& spec, double x, int side) {
  switch (spec.kind()) {
    case SourceKind::uniform: {
      const bool inside = side < 0 ? (x > -kSqrt3 && x <= kSqrt3) : (x >= -kSqrt3 && x < kSqrt3);
      return inside ? 0.5 / kSqrt3 : 0.0;
    }
    case SourceKind::centered_exponential: {
      const bool inside = side < 0 ? x > -1.0 : x >= -1.0;
      return inside ? std::exp(-1.0 - x) : 0.0;
    }
    default: return density_at(spec, x);
  }
}

std::vector<double> jump_points(const SourceSpec& spec) {
  switch (spec.kind()) {
    case SourceKind::uniform: return {-kSqrt3, kSqrt3};
    case SourceKind::centered_exponential: return {-1.0};
    default: return {};
  }
}

std::vector<SlopeJump> slope_jumps(const SourceSpec& spec) {
  // Laplace with scale b = 1/sqrt2: f'(0 +- 0) = -+ 1/(2 b^2).
  if (spec.kind() == SourceKind::laplace) return {{0.0, -2.0}};
  return {};
}

std::complex<double> cf_at(const SourceSpec& spec, double t) {
  using namespace std::complex_literals;
  switch (spec.kind()) {
    case SourceKind::gaussian: return std::exp(-0.5 * t * t);
    case SourceKind::uniform: {
      const double a = kSqrt3 * t;
      return a == 0.0 ? 1.0 : std::sin(a) / a;
    }
    case SourceKind::centered_exponential:
      return std::polar(1.0, -t) / std::complex<double>(1.0, -t);
    case SourceKind::laplace: return 1.0 / (1.0 + 0.5 * t * t);
    case SourceKind::gaussian_mixture: {
      std::complex<double> v = 0.0;
      for (const auto& c : spec.components())
        v += c.weight * std::exp(-0.5 * c.sd * c.sd * t * t) * std::polar(1.0, c.mean * t);
      return v;
    }
  }
  return 0.0;
}

int min_integrable_power(const SourceSpec& spec) {
  switch (spec.kind()) {
    case SourceKind::uniform:
    case SourceKind::centered_exponential: return 2;
    default: return 1;
  }
}

double abs_moment(const SourceSpec& spec, double s) {
  if (!(s > 0.0)) throw UsageError("absolute moment order must be positive");
  switch (spec.kind()) {
    case SourceKind::gaussian:
      return std::pow(2.0, 0.5 * s) * std::tgamma(0.5 * (s + 1.0)) / std::sqrt(std::numbers::pi);
    case SourceKind::uniform: return std::pow(3.0, 0.5 * s) / (s + 1.0);
    case SourceKind::laplace: return std::tgamma(s + 1.0) * std::pow(kLaplaceScale, s);
    case SourceKind::centered_exponential: {
      // Split at X = 0: the part below gives e^{-1} sum_j 1/(j!(s+j+1)).
      double series = 0.0, fact = 1.0;
      for (int j = 0; j < 60; ++j) {
        if (j > 0) fact *= j;
        series += 1.0 / (fact * (s + j + 1.0));
      }
      return (std::tgamma(s + 1.0) + series) / std::numbers::e;
    }
    case SourceKind::gaussian_mixture: {
      std::vector<double> cuts{0.0};
      for (const auto& c : spec.components()) cuts.push_back(c.mean);
      return integrate_line(
          [&](double x) { return std::pow(std::fabs(x), s) * density_at(spec, x); }, cuts, 1e-10);
    }
  }
  return 0.0;
}

MomentSet moments(const SourceSpec& spec, int k_max) {
  if (k_max < 3) throw UsageError("moments requires k_max >= 3");
  MomentSet out;
  switch (spec.kind()) {
    case SourceKind::centered_exponential: out.mu3 = 2.0; break;
    case SourceKind::gaussian_mixture:
      for (const auto& c : spec.components())
        out.mu3 += c.weight * (c.mean * c.mean * c.mean + 3.0 * c.mean * c.sd * c.sd);
      break;
    default: out.mu3 = 0.0;
  }
  for (int k = 1; k <= k_max; ++k) out.abs_moments[k] = abs_moment(spec, k);
  out.abs_moments[2] = 1.0;
  return out;
}

Interval tilt_domain(const SourceSpec& spec) {
  switch (spec.kind()) {
    case SourceKind::centered_exponential: return {-kInf, 1.0};
    case SourceKind::laplace: return {-kSqrt2, kSqrt2};
    default: return {-kInf, kInf};
  }
}

Interval tilted_mean_range(const SourceSpec& spec) {
  switch (spec.kind()) {
    case SourceKind::uniform: return {-kSqrt3, kSqrt3};
    case SourceKind::centered_exponential: return {-1.0, kInf};
    default: return {-kInf, kInf};
  }
}

double log_mgf(const SourceSpec& spec, double tau) {
  switch (spec.kind()) {
    case SourceKind::gaussian: return 0.5 * tau * tau;
    case SourceKind::uniform: {
      const double b = std::fabs(kSqrt3 * tau);
      if (b < 1e-2) return b * b / 6.0 - b * b * b * b / 180.0 + std::pow(b, 6) / 2835.0;
      return b + std::log1p(-std::exp(-2.0 * b)) - std::log(2.0 * b);
    }
    case SourceKind::centered_exponential: return -tau - std::log1p(-tau);
    case SourceKind::laplace: return -std::log1p(-0.5 * tau * tau);
    case SourceKind::gaussian_mixture: return mixture_terms(spec.components(), tau).log_k;
  }
  return 0.0;
}

double tilted_mean(const SourceSpec& spec, double tau) {
  switch (spec.kind()) {
    case SourceKind::gaussian: return tau;
    case SourceKind::uniform: {
      const double x = kSqrt3 * tau;
      if (std::fabs(x) < 0.1) {
        double v = 0.0, p = 1.0;
        for (double c : kCothSeries) v += c * p, p *= x * x;
        return 3.0 * tau * v;
      }
      return kSqrt3 / std::tanh(x) - 1.0 / tau;
    }
    case SourceKind::centered_exponential: return tau / (1.0 - tau);
    case SourceKind::laplace: return tau / (1.0 - 0.5 * tau * tau);
    case SourceKind::gaussian_mixture: {
      const auto terms = mixture_terms(spec.components(), tau);
      double m = 0.0;
      for (std::size_t i = 0; i < terms.omega.size(); ++i) {
        const auto& c = spec.components()[i];
        m += terms.omega[i] * (c.mean + c.sd * c.sd * tau);
      }
      return m;
    }
  }
  return 0.0;
}

double tilted_variance(const SourceSpec& spec, double tau) {
  switch (spec.kind()) {
    case SourceKind::gaussian: return 1.0;
    case SourceKind::uniform: {
      const double x = kSqrt3 * tau;
      if (std::fabs(x) < 0.1) {
        double v = 0.0, p = 1.0;
        int k = 1;
        for (double c : kCothSeries) v += c * 3.0 * (2 * k - 1) * p, p *= x * x, ++k;
        return v;
      }
      const double sh = std::sinh(x);
      return 1.0 / (tau * tau) - 3.0 / (sh * sh);
    }
    case SourceKind::centered_exponential: return 1.0 / ((1.0 - tau) * (1.0 - tau));
    case SourceKind::laplace: {
      const double d = 1.0 - 0.5 * tau * tau;
      return (1.0 + 0.5 * tau * tau) / (d * d);
    }
    case SourceKind::gaussian_mixture: {
      const auto terms = mixture_terms(spec.components(), tau);
      double m = 0.0, m2 = 0.0;
      for (std::size_t i = 0; i < terms.omega.size(); ++i) {
        const auto& c = spec.components()[i];
        const double mu = c.mean + c.sd * c.sd * tau;
        m += terms.omega[i] * mu;
        m2 += terms.omega[i] * (mu * mu + c.sd * c.sd);
      }
      return m2 - m * m;
    }
  }
  return 1.0;
}

TiltedCf::TiltedCf(const SourceSpec& spec, double tau)
    : kind_(spec.kind()), tau_(tau), coth_(0.0), scale_(1.0) {
  switch (kind_) {
    case SourceKind::uniform:
      if (tau != 0.0) coth_ = 1.0 / std::tanh(kSqrt3 * tau);
      break;
    case SourceKind::centered_exponential: scale_ = 1.0 - tau; break;
    case SourceKind::laplace: scale_ = 1.0 - 0.5 * tau * tau; break;
    case SourceKind::gaussian_mixture: {
      const auto mt = mixture_terms(spec.components(), tau);
      for (std::size_t i = 0; i < mt.omega.size(); ++i) {
        const auto& c = spec.components()[i];
        terms_.push_back({mt.omega[i], c.sd * c.sd, c.mean + c.sd * c.sd * tau});
      }
      break;
    }
    default: break;
  }
}

std::complex<double> TiltedCf::operator()(double u) const noexcept {
  const double tau = tau_;
  switch (kind_) {
    case SourceKind::gaussian: {
      const double g = std::exp(-0.5 * u * u);
      return {g * std::cos(u * tau), g * std::sin(u * tau)};
    }
    case SourceKind::uniform: {
      const double a = kSqrt3 * u;
      if (tau == 0.0) return a == 0.0 ? 1.0 : std::sin(a) / a;
      // (sin a coth b - i cos a) * tau / (u - i tau)
      const double A = std::sin(a) * coth_, B = -std::cos(a);
      const double k = tau / (u * u + tau * tau);
      return {k * (A * u - B * tau), k * (A * tau + B * u)};
    }
    case SourceKind::centered_exponential: {
      // exp(-iu) q / (q - iu), q = 1 - tau
      const double q = scale_, c = std::cos(u), sn = std::sin(u);
      const double k = q / (q * q + u * u);
      return {k * (q * c + u * sn), k * (u * c - q * sn)};
    }
    case SourceKind::laplace: {
      // (1 - tau^2/2) / (1 + (u - i tau)^2 / 2)
      const double dr = 1.0 + 0.5 * (u * u - tau * tau), di = -u * tau;
      const double k = scale_ / (dr * dr + di * di);
      return {k * dr, -k * di};
    }
    case SourceKind::gaussian_mixture: {
      double re = 0.0, im = 0.0;
      for (const auto& t : terms_) {
        const double g = t.weight * std::exp(-0.5 * t.var * u * u);
        re += g * std::cos(u * t.loc);
        im += g * std::sin(u * t.loc);
      }
      return {re, im};
    }
  }
  return 0.0;
}

double TiltedCf::evaluate_progression(double u0, double du, std::size_t count,
                                     std::complex<double>* out) const {
  constexpr std::size_t kResync = 32;
  double peak = 0.0;
  // Frequency of the oscillating factor for the kinds that have one.
  double w = 0.0;
  if (kind_ == SourceKind::uniform) w = kSqrt3;
  if (kind_ == SourceKind::centered_exponential) w = 1.0;
  // Near-zero uniform tilts have a huge coth, so rotation rounding would be amplified.
  if (w == 0.0 || (kind_ == SourceKind::uniform && std::fabs(coth_) > 1e4) ||
      (kind_ == SourceKind::uniform && tau_ == 0.0)) {
    for (std::size_t j = 0; j < count; ++j) {
      out[j] = (*this)(u0 + static_cast<double>(j) * du);
      peak = std::max(peak, std::norm(out[j]));
    }
    return peak;
  }
  const double step_c = std::cos(w * du), step_s = std::sin(w * du);
  double c = 0.0, sn = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double u = u0 + static_cast<double>(j) * du;
    if (j % kResync == 0) {
      c = std::cos(w * u);
      sn = std::sin(w * u);
    } else {
      const double nc = c * step_c - sn * step_s;
      sn = sn * step_c + c * step_s;
      c = nc;
    }
    if (kind_ == SourceKind::uniform) {
      const double A = sn * coth_, B = -c;
      const double k = tau_ / (u * u + tau_ * tau_);
      out[j] = {k * (A * u - B * tau_), k * (A * tau_ + B * u)};
    } else {
      const double q = scale_;
      const double k = q / (q * q + u * u);
      out[j] = {k * (q * c + u * sn), k * (u * c - q * sn)};
    }
    peak = std::max(peak, std::norm(out[j]));
  }
  return peak;
}

double TiltedCf::envelope(double v) const noexcept {
  v = std::fabs(v);
  switch (kind_) {
    case SourceKind::gaussian: return std::exp(-0.5 * v * v);
    case SourceKind::uniform:
      if (tau_ == 0.0) return std::min(1.0, 1.0 / (kSqrt3 * v));
      return std::min(1.0, std::fabs(tau_ * coth_) / std::sqrt(v * v + tau_ * tau_));
    case SourceKind::centered_exponential: return scale_ / std::sqrt(scale_ * scale_ + v * v);
    case SourceKind::laplace: {
      const double dr = 1.0 + 0.5 * (v * v - tau_ * tau_), di = v * tau_;
      return scale_ / std::sqrt(dr * dr + di * di);
    }
    case SourceKind::gaussian_mixture: {
      double e = 0.0;
      for (const auto& t : terms_) e += t.weight * std::exp(-0.5 * t.var * v * v);
      return std::min(1.0, e);
    }
  }
  return 1.0;
}

std::complex<double> tilted_cf(const SourceSpec& spec, double u, double tau) {
  if (tau == 0.0) return cf_at(spec, u);
  return TiltedCf(spec, tau)(u);
}

double tilt_for_mean(const SourceSpec& spec, double mean) {
  const Interval range = tilted_mean_range(spec);
  if (!(mean > range.lo && mean < range.hi))
    throw UsageError("tilted mean " + std::to_string(mean) + " is not attainable");
  switch (spec.kind()) {
    case SourceKind::gaussian: return mean;
    case SourceKind::centered_exponential: return mean / (1.0 + mean);
    case SourceKind::laplace: return 2.0 * mean / (1.0 + std::sqrt(1.0 + 2.0 * mean * mean));
    default: return bisect_mean(spec, mean);
  }
}

}  // namespace clt
