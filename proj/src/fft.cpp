#include "clt/fft.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "clt/errors.hpp"
#include "clt/kernels.hpp"

namespace clt {

bool is_power_of_two(std::size_t v) noexcept { return std::has_single_bit(v); }

FftPlan::FftPlan(std::size_t size) : size_(size), log2_(0) {
  if (size < 2 || !is_power_of_two(size))
    throw UsageError("FFT size must be a power of two >= 2, got " + std::to_string(size));
  log2_ = static_cast<std::size_t>(std::countr_zero(size));
  twiddles_.resize(size - 1);
  for (std::size_t h = 1; h < size; h <<= 1) {
    for (std::size_t j = 0; j < h; ++j) {
      const double angle = -std::numbers::pi * static_cast<double>(j) / static_cast<double>(h);
      twiddles_[h - 1 + j] = {std::cos(angle), std::sin(angle)};
    }
  }
}

void FftPlan::bit_reverse(std::span<cplx> data) const {
  for (std::size_t i = 1, j = 0; i < size_; ++i) {
    std::size_t bit = size_ >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
}

void FftPlan::forward(std::span<cplx> data) const {
  if (data.size() != size_) throw UsageError("FFT input length does not match plan size");
  bit_reverse(data);
  const auto& k = kernels::active();
  for (std::size_t h = 1; h < size_; h <<= 1) k.fft_stage(data.data(), size_, h, &twiddles_[h - 1]);
}

void FftPlan::inverse(std::span<cplx> data) const {
  for (auto& v : data) v = std::conj(v);
  forward(data);
  for (auto& v : data) v = std::conj(v);
}

std::shared_ptr<const FftPlan> FftPlan::get(std::size_t size) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const FftPlan>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[size];
  if (!slot) slot = std::make_shared<const FftPlan>(size);
  return slot;
}

}  // namespace clt
