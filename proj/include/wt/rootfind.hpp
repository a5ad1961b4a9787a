#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace wt {

// Bisection for a monotone function on [lo,hi]; solves f(x) = target to an
// interval width of xtol. The bracket need not be ordered by f-value.
inline double bisect_monotone(const std::function<double(double)>& f,
                              double lo, double hi, double target,
                              double xtol) {
  double flo = f(lo);
  double fhi = f(hi);
  const bool increasing = flo <= fhi;
  if (increasing) {
    if (target <= flo) return lo;
    if (target >= fhi) return hi;
  } else {
    if (target >= flo) return lo;
    if (target <= fhi) return hi;
  }
  for (int it = 0; it < 200 && hi - lo > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((increasing && fm < target) || (!increasing && fm > target)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace wt
