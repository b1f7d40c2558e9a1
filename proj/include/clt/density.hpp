#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "clt/distributions.hpp"

namespace clt {

/// Uniform symmetric grid x_j = -L + j*dx, j = 0..m-1, dx = 2L/m.
struct Grid {
  double half_width = 16.0;
  std::size_t points = std::size_t{1} << 17;

  double spacing() const noexcept { return 2.0 * half_width / static_cast<double>(points); }
  double x(std::size_t j) const noexcept {
    return -half_width + static_cast<double>(j) * spacing();
  }
  bool operator==(const Grid&) const = default;
};

/// Throws UsageError unless L > 0 and m is a power of two >= 1024.
Grid build_grid(double half_width, std::size_t points);

inline constexpr std::size_t kDefaultPoints = std::size_t{1} << 17;
inline constexpr double kTailEpsilon = 1e-12;

/// L = max(16, sqrt(2 ln(1/eps) / alpha_min)) with m = 2^17.
Grid default_grid(double alpha_min = 1.0);

enum class Provenance { cf_inversion, self_convolution, analytic };
std::string_view provenance_name(Provenance p);

/// n value that marks the Gaussian limit density g.
inline constexpr std::uint64_t kGaussianLimit = std::numeric_limits<std::uint64_t>::max();

struct GridDensity {
  Grid grid;
  std::vector<double> values;
  std::uint64_t n = 1;
  Provenance provenance = Provenance::analytic;
  double preclip_min = 0.0;
  std::string source;
};

struct InversionOptions {
  /// Recover far tails from exponentially tilted transforms.
  bool tail_tilting = true;
  /// Upper bound on the number of alias bands folded on each side.
  std::size_t max_folds = 128;
  /// Most negative value tolerated before clipping.
  double negative_floor = 1e-9;
  /// Largest tolerated |mass - 1|.
  double mass_tolerance = 1e-6;
};

GridDensity gaussian_density(const Grid& grid);

/// Samples density_at on the grid (the n = 1 density, analytic provenance).
GridDensity sample_source(const SourceSpec& spec, const Grid& grid);

/// Density of S_n by powering the characteristic function and inverting with an FFT.
/// Alias bands of the spectrum are folded in before the transform so that the
/// result samples the density itself rather than a band-limited copy. Throws
/// UsageError for n below min_integrable_power(spec) and NumericalError when the
/// negative-value or mass check fails.
GridDensity density_cf_inversion(const SourceSpec& spec, std::uint64_t n, const Grid& grid,
                                 const InversionOptions& options = {});

/// Density of S_{2^k} by repeated self-convolution. Independent of the
/// characteristic function. Throws UsageError for k < 1.
GridDensity density_self_convolution(const SourceSpec& spec, int k, const Grid& grid,
                                     const InversionOptions& options = {});

/// Every level of the self-convolution path: n = 2, 4, ..., 2^k.
std::vector<GridDensity> self_convolution_chain(const SourceSpec& spec, int k, const Grid& grid,
                                                const InversionOptions& options = {});

/// n = 1 gives sample_source, otherwise density_cf_inversion.
GridDensity density_for(const SourceSpec& spec, std::uint64_t n, const Grid& grid,
                        const InversionOptions& options = {});

struct DensityDiagnostics {
  double mass;
  double mean;
  double variance;
  double max_value;
  double preclip_min;
};

DensityDiagnostics validate_density(const GridDensity& gd);

/// Throws UsageError when the grids differ.
double sup_distance(const GridDensity& a, const GridDensity& b);

}  // namespace clt
