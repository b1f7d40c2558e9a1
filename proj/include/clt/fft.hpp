#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace clt {

using cplx = std::complex<double>;

/// Iterative radix-2 FFT. Plans are immutable and safe to share between threads.
class FftPlan {
 public:
  /// `size` must be a power of two >= 2.
  explicit FftPlan(std::size_t size);

  std::size_t size() const noexcept { return size_; }

  /// In place: X_k = sum_j x_j exp(-2 pi i j k / N).
  void forward(std::span<cplx> data) const;

  /// In place, unnormalized: x_j = sum_k X_k exp(+2 pi i j k / N).
  void inverse(std::span<cplx> data) const;

  /// Process-wide cache keyed by size.
  static std::shared_ptr<const FftPlan> get(std::size_t size);

 private:
  void bit_reverse(std::span<cplx> data) const;

  std::size_t size_;
  std::size_t log2_;
  std::vector<cplx> twiddles_;  // stage with half-width h stored at offset h - 1
};

bool is_power_of_two(std::size_t v) noexcept;

}  // namespace clt
