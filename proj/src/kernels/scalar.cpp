#include <algorithm>
#include <cmath>
#include <limits>

#include "clt/kernels.hpp"
#include "common.hpp"

namespace clt::kernels {
namespace {

using detail::two_sum;

inline void cmul(double ar, double ai, double br, double bi, double& re, double& im) {
  re = ar * br - ai * bi;
  im = ar * bi + ai * br;
}

void fft_stage(cplx* data, std::size_t size, std::size_t half, const cplx* tw) {
  auto* a = reinterpret_cast<double*>(data);
  const auto* w = reinterpret_cast<const double*>(tw);
  for (std::size_t start = 0; start < size; start += 2 * half) {
    for (std::size_t j = 0; j < half; ++j) {
      double* u = a + 2 * (start + j);
      double* v = a + 2 * (start + j + half);
      double tr, ti;
      cmul(v[0], v[1], w[2 * j], w[2 * j + 1], tr, ti);
      const double ur = u[0], ui = u[1];
      u[0] = ur + tr;
      u[1] = ui + ti;
      v[0] = ur - tr;
      v[1] = ui - ti;
    }
  }
}

void pow_accumulate(const cplx* base, cplx* acc, std::size_t count, std::uint64_t exponent) {
  const auto* b = reinterpret_cast<const double*>(base);
  auto* out = reinterpret_cast<double*>(acc);
  for (std::size_t i = 0; i < count; ++i) {
    double xr = b[2 * i], xi = b[2 * i + 1];
    double rr = 1.0, ri = 0.0;
    for (std::uint64_t e = exponent;;) {
      if (e & 1u) cmul(rr, ri, xr, xi, rr, ri);
      e >>= 1;
      if (e == 0) break;
      cmul(xr, xi, xr, xi, xr, xi);
    }
    out[2 * i] += rr;
    out[2 * i + 1] += ri;
  }
}

void mul_inplace(cplx* a, const cplx* b, std::size_t count) {
  auto* x = reinterpret_cast<double*>(a);
  const auto* y = reinterpret_cast<const double*>(b);
  for (std::size_t i = 0; i < count; ++i) {
    double re, im;
    cmul(x[2 * i], x[2 * i + 1], y[2 * i], y[2 * i + 1], re, im);
    x[2 * i] = re;
    x[2 * i + 1] = im;
  }
}

double sum(const double* v, std::size_t count) {
  double s[4] = {0, 0, 0, 0}, c[4] = {0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    for (int l = 0; l < 4; ++l) {
      double e;
      two_sum(s[l], v[i + l], s[l], e);
      c[l] += e;
    }
  }
  for (int l = 0; i < count; ++i, ++l) {
    double e;
    two_sum(s[l], v[i], s[l], e);
    c[l] += e;
  }
  return detail::fold_lanes(s, c);
}

double dot(const double* a, const double* b, std::size_t count) {
  double s[4] = {0, 0, 0, 0}, c[4] = {0, 0, 0, 0};
  std::size_t i = 0;
  auto step = [&](int l, std::size_t k) {
    const double p = a[k] * b[k];
    const double pe = std::fma(a[k], b[k], -p);
    double e;
    two_sum(s[l], p, s[l], e);
    c[l] += e + pe;
  };
  for (; i + 4 <= count; i += 4)
    for (int l = 0; l < 4; ++l) step(l, i + l);
  for (int l = 0; i < count; ++i, ++l) step(l, i);
  return detail::fold_lanes(s, c);
}

double clip_negatives(double* v, std::size_t count) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    lo = std::min(lo, v[i]);
    if (v[i] < 0.0) v[i] = 0.0;
  }
  return lo;
}

double lemma6_row_min(double q, double b_i, double p_i, const double* b, const double* p,
                      std::size_t count) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < count; ++j) {
    const double lhs = q * std::fabs(b_i - b[j]);
    const double rhs = std::fabs(p_i * b[j] - p[j] * b_i);
    lo = std::min(lo, lhs - rhs);
  }
  return lo;
}

}  // namespace

const Table& scalar_table() {
  static const Table table{Isa::scalar, "scalar", fft_stage,      pow_accumulate, mul_inplace,
                           sum,         dot,      clip_negatives, lemma6_row_min};
  return table;
}

}  // namespace clt::kernels
