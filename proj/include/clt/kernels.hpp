#pragma once

// Hot inner loops behind a function-pointer table. The scalar table is the
// reference; the AVX2 table is chosen at runtime when the CPU supports it.
// Set CLT_KERNELS=scalar in the environment to force the reference path.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace clt::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

struct Table {
  Isa isa;
  const char* name;

  /// One radix-2 decimation-in-time stage over `size` points.
  /// Butterflies span `half`; twiddles[j] = exp(-i*pi*j/half), j < half.
  void (*fft_stage)(cplx* data, std::size_t size, std::size_t half, const cplx* twiddles);

  /// acc[i] += base[i]^exponent (exponent >= 1), by repeated squaring.
  void (*pow_accumulate)(const cplx* base, cplx* acc, std::size_t count, std::uint64_t exponent);

  /// a[i] *= b[i].
  void (*mul_inplace)(cplx* a, const cplx* b, std::size_t count);

  /// Compensated sum.
  double (*sum)(const double* v, std::size_t count);

  /// Compensated dot product.
  double (*dot)(const double* a, const double* b, std::size_t count);

  /// Replaces negatives by 0 and returns the minimum seen before clipping
  /// (+inf for count == 0).
  double (*clip_negatives)(double* v, std::size_t count);

  /// min over j of q*|b_i - b[j]| - |p_i*b[j] - p[j]*b_i|.
  double (*lemma6_row_min)(double q, double b_i, double p_i, const double* b, const double* p,
                           std::size_t count);
};

const Table& scalar_table();

/// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const Table* avx2_table();

/// The table used by the library. Chosen once on first use.
const Table& active();

/// Overrides the active table. Throws UsageError if `isa` is unavailable.
void select(Isa isa);

/// Parses "scalar", "avx2" or "auto".
Isa parse_isa(std::string_view name);

}  // namespace clt::kernels
