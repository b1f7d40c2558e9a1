#include "clt/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "clt/errors.hpp"
#include "clt/fft.hpp"
#include "clt/kernels.hpp"

namespace clt {
namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);

// A band whose largest possible contribution to any node is below this is the last one folded.
constexpr double kFoldTolerance = 1e-18;
// Spacing of tilted means, inset of edge passes from the reachable range, and
// the number of tilted standard deviations that must fit inside the grid.
constexpr double kLadderStep = 2.0;
constexpr double kEdgeInset = 0.25;
constexpr double kTiltWidth = 4.0;
// A tilted law whose moment generating function ends at a finite tilt has an
// exponential tail; its copy one period away must be below exp(-kWrapExponent).
constexpr double kWrapExponent = 40.0;
constexpr std::uint64_t kMaxSummands = std::uint64_t{1} << 40;

struct Pass {
  double mean;  // tilted mean of S_n
  double tau;   // per-summand tilt
  double sd;    // tilted standard deviation of S_n
};

std::vector<Pass> tilt_ladder(const SourceSpec& spec, std::uint64_t n, const Grid& grid,
                              bool tilting) {
  std::vector<Pass> passes{{0.0, 0.0, 1.0}};
  if (!tilting) return passes;
  const double rn = std::sqrt(static_cast<double>(n));
  const Interval range = tilted_mean_range(spec);
  const Interval domain = tilt_domain(spec);
  const double lo = rn * range.lo, hi = rn * range.hi;
  const double L = grid.half_width;
  auto admit = [&](double mu) {
    if (!(mu > lo && mu < hi) || std::fabs(mu) > L) return;
    for (const auto& p : passes)
      if (std::fabs(p.mean - mu) < 0.5 * kLadderStep) return;
    const double tau = tilt_for_mean(spec, mu / rn);
    const double sd = std::sqrt(tilted_variance(spec, tau));
    if (std::fabs(mu) + kTiltWidth * sd > L) return;
    const double reach = 2.0 * L - 2.0 * kLadderStep;
    if (rn * (domain.hi - tau) * reach < kWrapExponent) return;
    if (rn * (tau - domain.lo) * reach < kWrapExponent) return;
    passes.push_back({mu, tau, sd});
  };
  for (double mu = kLadderStep; mu <= L; mu += kLadderStep) {
    admit(mu);
    admit(-mu);
  }
  if (std::isfinite(lo)) admit(lo + kEdgeInset);
  if (std::isfinite(hi)) admit(hi - kEdgeInset);
  return passes;
}

// Smallest |t| beyond which |psi(t)| = |c(t/sqrt n)|^n stays below `floor`.
double negligible_radius(const TiltedCf& cf, std::uint64_t n, double floor) {
  const double nd = static_cast<double>(n), rn = std::sqrt(nd), log_floor = std::log(floor);
  auto below = [&](double t) { return nd * std::log(cf.envelope(t / rn)) < log_floor; };
  double hi = 1.0;
  while (!below(hi)) {
    hi *= 2.0;
    if (hi > 1e300) return INFINITY;
  }
  double lo = 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? hi : lo) = mid;
  }
  return hi;
}

// Folded spectrum of one pass: out[k] = (-1)^k sum_p psi(t_k + p*m*dt), where
// psi(t) = c(t/sqrt n)^n and c is the (tilted) characteristic function. Nodes
// whose envelope is below the fold tolerance are skipped.
void folded_spectrum(const SourceSpec& spec, std::uint64_t n, double tau, const Grid& grid,
                     std::size_t max_folds, std::vector<cplx>& out) {
  const std::size_t m = grid.points;
  const double dt = kPi / grid.half_width;
  const double rn = std::sqrt(static_cast<double>(n));
  const auto& k = kernels::active();
  std::vector<cplx> base(m);
  std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
  const TiltedCf cf(spec, tau);
  const double node_weight = static_cast<double>(m) * dt / (2.0 * kPi);
  const double radius = negligible_radius(cf, n, kFoldTolerance / node_weight);

  // Returns false when the whole band lies beyond the radius.
  auto band = [&](long p) {
    const double first = static_cast<double>(p) * static_cast<double>(m) - static_cast<double>(m / 2);
    const double j_lo = std::max(0.0, std::ceil(-radius / dt - first));
    const double j_hi = std::min(static_cast<double>(m) - 1.0, std::floor(radius / dt - first));
    if (j_lo > j_hi) return false;
    const auto lo = static_cast<std::size_t>(j_lo);
    const auto count = static_cast<std::size_t>(j_hi) - lo + 1;
    cf.evaluate_progression((first + j_lo) * dt / rn, dt / rn, count, base.data() + lo);
    k.pow_accumulate(base.data() + lo, out.data() + lo, count, n);
    return true;
  };

  band(0);
  for (std::size_t p = 1; p <= max_folds; ++p) {
    const bool right = band(static_cast<long>(p));
    const bool left = band(-static_cast<long>(p));
    if (!right && !left) break;
  }
  for (std::size_t j = 1; j < m; j += 2) out[j] = -out[j];
}

void check_clip_and_mass(GridDensity& gd, const InversionOptions& options) {
  const auto& k = kernels::active();
  gd.preclip_min = k.clip_negatives(gd.values.data(), gd.values.size());
  if (gd.preclip_min < -options.negative_floor)
    throw NumericalError("negative-values",
                         "pre-clip minimum " + std::to_string(gd.preclip_min) + " below -" +
                             std::to_string(options.negative_floor) + " (n=" +
                             std::to_string(gd.n) + ")");
  const double mass = k.sum(gd.values.data(), gd.values.size()) * gd.grid.spacing();
  if (std::fabs(mass - 1.0) > options.mass_tolerance)
    throw NumericalError("mass", "total " + std::to_string(mass) + " deviates from 1 (n=" +
                                     std::to_string(gd.n) + ")");
}

void require_grid(const Grid& grid) { (void)build_grid(grid.half_width, grid.points); }

// Four-point Lagrange interpolation of samples v at fractional index u.
double cubic_at(const std::vector<double>& v, double u) {
  const auto i = static_cast<long>(std::floor(u));
  const double s = u - static_cast<double>(i);
  auto at = [&](long idx) {
    return idx >= 0 && idx < static_cast<long>(v.size()) ? v[static_cast<std::size_t>(idx)] : 0.0;
  };
  const double w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
  const double w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  const double w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
  const double w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
  return w0 * at(i - 1) + w1 * at(i) + w2 * at(i + 1) + w3 * at(i + 2);
}

// Linear convolution c[r] = sum_i a[i] b[r - i] of two length-m arrays, r < 2m - 1.
std::vector<double> linear_convolution(const std::vector<double>& a) {
  const std::size_t m = a.size();
  const auto plan = FftPlan::get(2 * m);
  std::vector<cplx> buf(2 * m, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < m; ++i) buf[i] = a[i];
  plan->forward(buf);
  for (auto& v : buf) v *= v;
  plan->inverse(buf);
  std::vector<double> out(2 * m);
  const double scale = 1.0 / static_cast<double>(2 * m);
  for (std::size_t i = 0; i < 2 * m; ++i) out[i] = buf[i].real() * scale;
  return out;
}

// First doubling, from the source law directly. The source is sampled on nodes
// s_i = i*d with d = sqrt2*dx, so sqrt2*x_j falls on a node of the convolution
// and no interpolation is needed. Cells of the convolution integrand that
// contain a jump are re-integrated piecewise with one-sided limits. A kink of f
// at a node puts kinks of the integrand at nodes, which gets the trapezoid
// end correction d^2/12 times the slope jump.
GridDensity first_doubling(const SourceSpec& spec, const Grid& grid) {
  const std::size_t m = grid.points;
  const double d = std::numbers::sqrt2 * grid.spacing();
  const long half = static_cast<long>(m / 2);
  std::vector<double> a(m);
  for (std::size_t i = 0; i < m; ++i)
    a[i] = density_at(spec, static_cast<double>(static_cast<long>(i) - half) * d);
  const std::vector<double> conv = linear_convolution(a);
  const std::vector<double> jumps = jump_points(spec);
  double kink_weight = 0.0;
  for (const auto& k : slope_jumps(spec)) kink_weight += 2.0 * k.jump * d * d / 12.0;

  GridDensity gd{grid, std::vector<double>(m), 2, Provenance::self_convolution, 0.0,
                 std::string(spec.name())};
  // Each jump point carries its partner y - s, kept exact so one-sided limits
  // of the second factor are taken on the correct side.
  struct Jump {
    double s;
    double partner;
  };
  std::vector<Jump> pts;
  for (std::size_t j = 0; j < m; ++j) {
    // Output node y = (j - m/2) d; conv index r has node (r - m) d.
    const long r = static_cast<long>(j) + half;
    const double y = static_cast<double>(static_cast<long>(j) - half) * d;
    double value = conv[static_cast<std::size_t>(r)] * d;
    if (kink_weight != 0.0) value += kink_weight * density_at(spec, y);
    if (!jumps.empty()) {
      pts.clear();
      for (double xi : jumps) {
        pts.push_back({xi, y - xi});
        pts.push_back({y - xi, xi});
      }
      std::sort(pts.begin(), pts.end(), [](const Jump& a, const Jump& b) { return a.s < b.s; });
      auto integrand = [&](double s) { return density_at(spec, s) * density_at(spec, y - s); };
      auto left = [&](const Jump& p) {
        return density_limit(spec, p.s, -1) * density_limit(spec, p.partner, 1);
      };
      auto right = [&](const Jump& p) {
        return density_limit(spec, p.s, 1) * density_limit(spec, p.partner, -1);
      };
      for (std::size_t p = 0; p < pts.size();) {
        const double cell = std::floor(pts[p].s / d);
        std::size_t q = p;
        while (q < pts.size() && std::floor(pts[q].s / d) == cell) ++q;
        const double xa = cell * d, xb = (cell + 1.0) * d;
        const double fa = integrand(xa), fb = integrand(xb);
        double piece = 0.0, prev_x = xa, prev_f = fa;
        for (std::size_t t = p; t < q; ++t) {
          piece += (pts[t].s - prev_x) * (prev_f + left(pts[t])) / 2.0;
          prev_x = pts[t].s;
          prev_f = right(pts[t]);
        }
        piece += (xb - prev_x) * (prev_f + fb) / 2.0;
        value += piece - d * (fa + fb) / 2.0;
        p = q;
      }
    }
    gd.values[j] = std::numbers::sqrt2 * value;
  }
  return gd;
}

// f_{2n}(x) = sqrt2 (f_n * f_n)(sqrt2 x), trapezoid convolution plus cubic rescale.
GridDensity double_density(const GridDensity& in) {
  const Grid& grid = in.grid;
  const std::size_t m = grid.points;
  const double dx = grid.spacing();
  const std::vector<double> conv = linear_convolution(in.values);
  // conv[r] sits at -2L + r*dx.
  GridDensity out{grid, std::vector<double>(m), in.n * 2, Provenance::self_convolution, 0.0,
                  in.source};
  for (std::size_t j = 0; j < m; ++j) {
    const double y = std::numbers::sqrt2 * grid.x(j);
    const double u = (y + 2.0 * grid.half_width) / dx;
    out.values[j] = std::numbers::sqrt2 * dx * cubic_at(conv, u);
  }
  return out;
}

}  // namespace

Grid build_grid(double half_width, std::size_t points) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw UsageError("grid half-width L must be positive");
  if (points < 1024 || !is_power_of_two(points))
    throw UsageError("grid points m must be a power of two >= 1024, got " +
                     std::to_string(points));
  return Grid{half_width, points};
}

Grid default_grid(double alpha_min) {
  if (!(alpha_min > 0.0)) throw UsageError("alpha_min must be positive");
  const double L = std::max(16.0, std::sqrt(2.0 * std::log(1.0 / kTailEpsilon) / alpha_min));
  return build_grid(L, kDefaultPoints);
}

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::cf_inversion: return "cf_inversion";
    case Provenance::self_convolution: return "self_convolution";
    case Provenance::analytic: return "analytic";
  }
  return "unknown";
}

GridDensity gaussian_density(const Grid& grid) {
  require_grid(grid);
  GridDensity gd{grid, std::vector<double>(grid.points), kGaussianLimit, Provenance::analytic,
                 0.0, "gaussian_limit"};
  for (std::size_t j = 0; j < grid.points; ++j) {
    const double x = grid.x(j);
    gd.values[j] = kInvSqrt2Pi * std::exp(-0.5 * x * x);
  }
  gd.preclip_min = *std::min_element(gd.values.begin(), gd.values.end());
  return gd;
}

GridDensity sample_source(const SourceSpec& spec, const Grid& grid) {
  require_grid(grid);
  GridDensity gd{grid, std::vector<double>(grid.points), 1, Provenance::analytic, 0.0,
                 std::string(spec.name())};
  for (std::size_t j = 0; j < grid.points; ++j) gd.values[j] = density_at(spec, grid.x(j));
  // A node whose cell straddles a jump gets the cell average, so sums over the
  // grid see the correct share of mass on each side.
  const double dx = grid.spacing();
  for (double xi : jump_points(spec)) {
    const double u = (xi + grid.half_width) / dx;
    const double j = std::round(u);
    if (j < 0.0 || j >= static_cast<double>(grid.points)) continue;
    const auto idx = static_cast<std::size_t>(j);
    const double a = grid.x(idx) - 0.5 * dx, b = grid.x(idx) + 0.5 * dx;
    const double lw = xi - a, rw = b - xi;
    gd.values[idx] = (lw * density_limit(spec, a + 0.5 * lw, -1) +
                      rw * density_limit(spec, xi + 0.5 * rw, 1)) /
                     dx;
  }
  gd.preclip_min = *std::min_element(gd.values.begin(), gd.values.end());
  return gd;
}

GridDensity density_cf_inversion(const SourceSpec& spec, std::uint64_t n, const Grid& grid,
                                 const InversionOptions& options) {
  require_grid(grid);
  if (n < 1 || n > kMaxSummands) throw UsageError("number of summands n out of range");
  if (n < static_cast<std::uint64_t>(min_integrable_power(spec)))
    throw UsageError("|phi|^n is not integrable for " + std::string(spec.name()) +
                     " at n=" + std::to_string(n) + "; smallest supported n is " +
                     std::to_string(min_integrable_power(spec)));
  const std::size_t m = grid.points;
  const double dt = kPi / grid.half_width;
  const double scale = dt / (2.0 * kPi);
  const double rn = std::sqrt(static_cast<double>(n));
  const double nd = static_cast<double>(n);
  const auto plan = FftPlan::get(m);
  const std::vector<Pass> passes = tilt_ladder(spec, n, grid, options.tail_tilting);

  // A pass recovers f(x) = exp(n log K - theta x) h(x); the FFT noise floor of h
  // scales like 1/sd. Each node takes the pass with the smallest amplified floor,
  // ties to the smaller |mean|.
  std::vector<double> log_k(passes.size()), theta(passes.size());
  for (std::size_t p = 0; p < passes.size(); ++p) {
    theta[p] = rn * passes[p].tau;
    log_k[p] = passes[p].tau == 0.0 ? 0.0 : nd * log_mgf(spec, passes[p].tau);
  }
  std::vector<double> log_sd(passes.size());
  for (std::size_t p = 0; p < passes.size(); ++p) log_sd[p] = std::log(passes[p].sd);
  auto floor_exponent = [&](std::size_t p, double x) { return log_k[p] - theta[p] * x - log_sd[p]; };
  std::vector<std::size_t> owner(m, 0);
  for (std::size_t j = 0; j < m; ++j) {
    const double x = grid.x(j);
    double best = floor_exponent(0, x);
    for (std::size_t p = 1; p < passes.size(); ++p) {
      const double e = floor_exponent(p, x);
      if (e < best || (e == best && std::fabs(passes[p].mean) < std::fabs(passes[owner[j]].mean))) {
        best = e;
        owner[j] = p;
      }
    }
  }

  GridDensity gd{grid, std::vector<double>(m), n, Provenance::cf_inversion, 0.0,
                 std::string(spec.name())};
  std::vector<cplx> buf(m);
  for (std::size_t p = 0; p < passes.size(); ++p) {
    if (std::find(owner.begin(), owner.end(), p) == owner.end()) continue;
    const double tau = passes[p].tau;
    folded_spectrum(spec, n, tau, grid, options.max_folds, buf);
    plan->forward(buf);
    for (std::size_t j = 0; j < m; ++j) {
      if (owner[j] != p) continue;
      const double h = (j % 2 == 0 ? 1.0 : -1.0) * scale * buf[j].real();
      gd.values[j] = tau == 0.0 ? h : std::exp(log_k[p] - theta[p] * grid.x(j)) * h;
    }
  }
  check_clip_and_mass(gd, options);
  return gd;
}

std::vector<GridDensity> self_convolution_chain(const SourceSpec& spec, int k, const Grid& grid,
                                                const InversionOptions& options) {
  require_grid(grid);
  if (k < 1 || k > 40) throw UsageError("self-convolution level k must be in [1, 40]");
  std::vector<GridDensity> chain;
  chain.push_back(first_doubling(spec, grid));
  check_clip_and_mass(chain.back(), options);
  for (int level = 2; level <= k; ++level) {
    chain.push_back(double_density(chain.back()));
    check_clip_and_mass(chain.back(), options);
  }
  return chain;
}

GridDensity density_self_convolution(const SourceSpec& spec, int k, const Grid& grid,
                                     const InversionOptions& options) {
  auto chain = self_convolution_chain(spec, k, grid, options);
  return std::move(chain.back());
}

GridDensity density_for(const SourceSpec& spec, std::uint64_t n, const Grid& grid,
                        const InversionOptions& options) {
  if (n == 1) return sample_source(spec, grid);
  return density_cf_inversion(spec, n, grid, options);
}

DensityDiagnostics validate_density(const GridDensity& gd) {
  const auto& k = kernels::active();
  const std::size_t m = gd.values.size();
  const double dx = gd.grid.spacing();
  std::vector<double> x(m), x2(m);
  for (std::size_t j = 0; j < m; ++j) {
    x[j] = gd.grid.x(j);
    x2[j] = x[j] * x[j];
  }
  const double mass = k.sum(gd.values.data(), m) * dx;
  const double mean = k.dot(x.data(), gd.values.data(), m) * dx;
  const double second = k.dot(x2.data(), gd.values.data(), m) * dx;
  const double peak = m ? *std::max_element(gd.values.begin(), gd.values.end()) : 0.0;
  return {mass, mean, second - mean * mean, peak, gd.preclip_min};
}

double sup_distance(const GridDensity& a, const GridDensity& b) {
  if (!(a.grid == b.grid)) throw UsageError("sup_distance: grids differ");
  double sup = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j)
    sup = std::max(sup, std::fabs(a.values[j] - b.values[j]));
  return sup;
}

}  // namespace clt
