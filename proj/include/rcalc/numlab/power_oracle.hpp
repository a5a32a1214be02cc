#pragma once

#include "rcalc/core/rational.hpp"

#include <cmath>

namespace rcalc::numlab {

/// Membership of |x|^a in A_p on R^n: -n < a < n(p - 1) for 1 < p < inf.
/// Extensions beyond that range: p = 1 uses the standard boundary form
/// -n < a <= 0, and p = inf (the union of all A_p) gives -n < a.
inline bool power_ap_oracle(double a, int n, double p) {
  if (n < 1) throw Error("dimension must be a positive integer");
  if (!(p >= 1)) throw Error("A_p needs p >= 1");
  if (std::isinf(p)) return a > -n;
  if (p == 1) return a > -n && a <= 0;
  return a > -n && a < n * (p - 1);
}

}  // namespace rcalc::numlab
