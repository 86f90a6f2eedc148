#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace shiftspec {

// Symmetric tridiagonal matrices with zero diagonal, given by their
// off-diagonal entries b_0 .. b_{n-2}; the matrix has n = b.size() + 1 rows.

// Number of eigenvalues strictly below x (Sturm sequence of the LDL^T pivots).
inline std::size_t sturm_count(const std::vector<double>& b, double x) {
  const double pivmin = std::numeric_limits<double>::min() * 4.0;
  std::size_t count = 0;
  double d = -x;
  if (std::fabs(d) < pivmin) d = -pivmin;
  if (d < 0) ++count;
  for (double bi : b) {
    d = -x - bi * bi / d;
    if (std::fabs(d) < pivmin) d = -pivmin;
    if (d < 0) ++count;
  }
  return count;
}

// Largest eigenvalue to absolute accuracy `tol` by bisection.
// Procedure: Gershgorin gives [0, G]; the spectrum is symmetric about 0, so
// the top eigenvalue is nonnegative.
inline double largest_eigenvalue(const std::vector<double>& b, double tol) {
  const std::size_t n = b.size() + 1;
  if (b.empty()) return 0.0;
  double g = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double left = i > 0 ? std::fabs(b[i - 1]) : 0.0;
    double right = i + 1 < n ? std::fabs(b[i]) : 0.0;
    g = std::max(g, left + right);
  }
  double lo = 0.0, hi = g * (1.0 + 1e-15) + 1e-300;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(b, mid) == n)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace shiftspec
