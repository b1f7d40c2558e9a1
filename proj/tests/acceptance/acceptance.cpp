// Acceptance suite: one PASS/FAIL line per criterion. Exit status 0 iff all pass.
// Usage: acceptance [criterion ...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "clt/analysis.hpp"
#include "clt/density.hpp"
#include "clt/distributions.hpp"
#include "clt/edgeworth.hpp"
#include "clt/entropy.hpp"
#include "clt/errors.hpp"
#include "clt/kernels.hpp"

using namespace clt;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "!! ") + what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

double ref_gaussian_entropy() { return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e); }

std::vector<std::uint64_t> pow2(std::uint64_t a, std::uint64_t b) { return powers_of_two(a, b); }

// 1. Quadrature entropies of the analytic Gaussian grid against closed forms.
Outcome criterion_gaussian_reference() {
  Outcome o;
  const Grid grid = default_grid();
  const GridDensity g = gaussian_density(grid);
  const double h = shannon(g).value, r2 = renyi(g, EntropyOrder(2)).value,
               t2 = tsallis(g, EntropyOrder(2)).value;
  // Published value log sqrt(2 pi e) = 1.4189385 and the derived second-order values.
  o.require(std::fabs(ref_gaussian_entropy() - 1.4189385) < 5e-8, "H(G) closed form = 1.4189385");
  o.require(std::fabs(h - ref_gaussian_entropy()) < 1e-10, "|H - log sqrt(2 pi e)| = " + sci(std::fabs(h - ref_gaussian_entropy())));
  const double r2_ref = 0.5 * std::log(2.0 * std::numbers::pi) + std::log(2.0) / 2.0;
  const double t2_ref = 1.0 - 1.0 / (2.0 * std::sqrt(std::numbers::pi));
  o.require(std::fabs(r2_ref - 1.2655121) < 5e-8 && std::fabs(t2_ref - 0.7179052) < 5e-8,
            "R2, T2 references = 1.2655121, 0.7179052");
  o.require(std::fabs(r2 - r2_ref) < 1e-10, "|R2 - ref| = " + sci(std::fabs(r2 - r2_ref)));
  o.require(std::fabs(t2 - t2_ref) < 1e-10, "|T2 - ref| = " + sci(std::fabs(t2 - t2_ref)));
  return o;
}

// 2. Gaussian source is a fixed point: every entropy error below 1e-9.
Outcome criterion_fixed_point() {
  Outcome o;
  const auto ns = pow2(1, 4096);
  const std::vector<SeriesRequest> req{{EntropyOrder(1), EntropyKind::shannon},
                                       {EntropyOrder(0.5), EntropyKind::renyi},
                                       {EntropyOrder(2), EntropyKind::renyi},
                                       {EntropyOrder(4), EntropyKind::renyi},
                                       {EntropyOrder(0.5), EntropyKind::tsallis},
                                       {EntropyOrder(2), EntropyKind::tsallis},
                                       {EntropyOrder(4), EntropyKind::tsallis}};
  double worst = 0.0;
  for (const auto& s : error_series_batch(SourceSpec::gaussian(), req, ns))
    for (const auto& p : s.points) worst = std::max(worst, p.error);
  o.require(worst < 1e-9, "max error over n=1..4096, 7 entropies = " + sci(worst));
  return o;
}

// 3. CF inversion and self-convolution agree.
Outcome criterion_cross_path() {
  Outcome o;
  const Grid grid = default_grid();
  for (const auto& spec : {SourceSpec::uniform(), SourceSpec::centered_exponential()}) {
    const auto chain = self_convolution_chain(spec, 6, grid);
    double worst = 0.0;
    for (int k : {1, 4, 6})
      worst = std::max(worst, sup_distance(density_cf_inversion(spec, 1ull << k, grid), chain[k - 1]));
    o.require(worst < 1e-6, std::string(spec.name()) + " sup gap (n=2,16,64) = " + sci(worst));
  }
  return o;
}

Outcome rate_criterion(std::vector<double> alphas, double r2_min, bool fixed_bound) {
  Outcome o;
  const auto ns = pow2(16, 4096);
  const SourceSpec spec = SourceSpec::centered_exponential();
  std::vector<SeriesRequest> req;
  for (double a : alphas)
    req.push_back({EntropyOrder(a), a == 1.0 ? EntropyKind::shannon : EntropyKind::renyi});
  for (const auto& s : error_series_batch(spec, req, ns)) {
    const RateFit fit = fit_loglog(s, kDefaultSkipFirst, 0.05);
    const double a = s.order.alpha();
    const double bound = fixed_bound ? -0.40 : -(a / 2.0 - 0.05) + 0.1;
    o.require(fit.slope <= bound && fit.r_squared >= r2_min,
              "alpha=" + fmt("%g", a) + " slope=" + fmt("%.4f", fit.slope) + " (bound " +
                  fmt("%.2f", bound) + ", theory " + fmt("%.2f", fit.theoretical_exponent) +
                  ") r2=" + fmt("%.5f", fit.r_squared));
  }
  return o;
}

// 4. alpha > 1.
Outcome criterion_rate_large_alpha() { return rate_criterion({2.0, 4.0}, 0.98, true); }

// 5. alpha <= 1 with gamma = 0.05.
Outcome criterion_rate_small_alpha() { return rate_criterion({0.5, 1.0}, 0.95, false); }

// 6. Scaled Edgeworth residual decreases.
Outcome criterion_edgeworth() {
  Outcome o;
  const SourceSpec spec = SourceSpec::centered_exponential();
  o.require(moments(spec, 3).mu3 == 2.0, "mu3 = 2");
  const std::vector<std::uint64_t> ns{16, 64, 256, 1024};
  const auto pts = edgeworth_residual_series(spec, ns);
  std::string seq;
  bool decreasing = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    seq += (i ? "," : "") + fmt("%.5f", pts[i].scaled_residual);
    if (i > 0 && !(pts[i].scaled_residual < pts[i - 1].scaled_residual)) decreasing = false;
  }
  o.require(decreasing, "sqrt(n) sup residual = " + seq + " strictly decreasing");
  const double ratio = pts.back().scaled_residual / pts.front().scaled_residual;
  o.require(ratio < 0.5, "final/initial = " + fmt("%.4f", ratio));
  return o;
}

// 7. Q_gamma lattice certificates.
Outcome criterion_lemma6() {
  Outcome o;
  for (double g : {0.05, 0.15, 0.25, 0.35, 0.45}) {
    const auto cert = verify_lemma6(g, 2000);
    o.require(cert.max_violation >= -1e-12,
              "gamma=" + fmt("%.2f", g) + " min slack " + sci(cert.max_violation));
  }
  const double q = q_gamma(0.25);
  o.require(std::fabs(q - 2.4261226) <= 1e-6, "Q_0.25 = " + fmt("%.9f", q));
  return o;
}

// 8. Integrals of f_n^alpha are bounded and reach the Gaussian value by n = 1024.
Outcome criterion_lalpha() {
  Outcome o;
  const auto ns = pow2(2, 1024);
  for (const auto& spec : {SourceSpec::centered_exponential(), SourceSpec::uniform()}) {
    for (double a : {0.25, 0.5, 2.0, 4.0}) {
      const ScanResult r = lalpha_bound_scan(spec, a, ns);
      const double gap = std::fabs(r.values.back() - r.limit);
      o.require(std::isfinite(r.sup) && gap <= 1e-5,
                std::string(spec.name()) + " alpha=" + fmt("%g", a) + " sup=" + fmt("%.6f", r.sup) +
                    " gap@1024=" + sci(gap));
    }
  }
  return o;
}

// 9. |T_alpha - H| / |alpha - 1| is uniform in n.
Outcome criterion_continuity() {
  Outcome o;
  const auto ns = pow2(2, 1024);
  const std::vector<double> alphas{0.9, 0.95, 1.05, 1.1};
  for (const auto& spec : {SourceSpec::centered_exponential(), SourceSpec::uniform()}) {
    const auto pts = tsallis_continuity_scan(spec, alphas, ns);
    for (double a : alphas) {
      double lo = INFINITY, hi = 0.0;
      for (const auto& p : pts)
        if (p.alpha == a && p.n >= 8) lo = std::min(lo, p.ratio), hi = std::max(hi, p.ratio);
      const double spread = (hi - lo) / lo;
      o.require(spread < 0.10, std::string(spec.name()) + " alpha=" + fmt("%g", a) +
                                   " spread=" + fmt("%.4f", spread));
    }
  }
  return o;
}

// 10. Shannon entropy below the s = 2 moment bound, tight only for the Gaussian.
Outcome criterion_moment_bound() {
  Outcome o;
  const std::vector<std::uint64_t> ns{1, 2, 4, 16, 64, 256, 1024};
  const Grid grid = default_grid();
  const double cap = ref_gaussian_entropy() + 1e-8;
  for (auto kind : {SourceKind::gaussian, SourceKind::uniform, SourceKind::centered_exponential,
                    SourceKind::laplace, SourceKind::gaussian_mixture}) {
    const SourceSpec spec = default_source(kind);
    const auto dens = densities_for(spec, ns, grid);
    bool ok = true;
    double min_gap = INFINITY, max_gap = 0.0;
    for (const auto& d : dens) {
      const double h = shannon(d).value, bound = shannon_moment_bound(d, 2.0);
      const double gap = bound - h;
      min_gap = std::min(min_gap, gap);
      max_gap = std::max(max_gap, std::fabs(gap));
      ok = ok && h <= cap && h <= bound + 1e-12;
      ok = ok && (kind == SourceKind::gaussian ? std::fabs(gap) <= 1e-9 : gap > 1e-9);
    }
    o.require(ok, std::string(spec.name()) + (kind == SourceKind::gaussian ? " max|bound-H|=" + sci(max_gap)
                                                                             : " min(bound-H)=" + sci(min_gap)));
  }
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "Gaussian reference entropies", 1.0, criterion_gaussian_reference},
      {2, "Gaussian fixed point", 10.0, criterion_fixed_point},
      {3, "Cross-path density agreement", 20.0, criterion_cross_path},
      {4, "Rate bound alpha > 1", 60.0, criterion_rate_large_alpha},
      {5, "Rate bound alpha <= 1", 60.0, criterion_rate_small_alpha},
      {6, "Edgeworth o(1/sqrt n)", 30.0, criterion_edgeworth},
      {7, "Q_gamma lattice certificates", 10.0, criterion_lemma6},
      {8, "L^alpha boundedness and limit", 30.0, criterion_lalpha},
      {9, "Tsallis-Shannon continuity", 30.0, criterion_continuity},
      {10, "Shannon moment bound", 5.0, criterion_moment_bound},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  std::printf("kernels: %s\n", kernels::active().name);
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.require(secs < c.budget_s, "runtime " + fmt("%.2f", secs) + " s (budget " + fmt("%g", c.budget_s) + " s)");
    if (!out.pass) ++failed;
    std::printf("%s [%d] %s: %s\n", out.pass ? "PASS" : "FAIL", c.id, c.title, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
