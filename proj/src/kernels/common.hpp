#pragma once

#include <cmath>

namespace clt::kernels::detail {

// Knuth two-sum: s + err == a + b exactly.
inline void two_sum(double a, double b, double& s, double& err) {
  s = a + b;
  const double bp = s - a;
  err = (a - (s - bp)) + (b - bp);
}

// Folds four (sum, compensation) lanes in a fixed order shared by all ISAs.
inline double fold_lanes(const double* s, const double* c) {
  double s01, e01, s23, e23, total, e;
  two_sum(s[0], s[1], s01, e01);
  two_sum(s[2], s[3], s23, e23);
  two_sum(s01, s23, total, e);
  const double comp = ((c[0] + c[1]) + (c[2] + c[3])) + (e01 + e23) + e;
  return total + comp;
}

}  // namespace clt::kernels::detail
