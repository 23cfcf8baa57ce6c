#pragma once

#include <cmath>
#include <concepts>

namespace giv {

/// Bisection for the boundary of a predicate that is true on (-inf, t*) and
/// false on [t*, inf) (or the mirrored closed/open variant, depending on the
/// predicate). Requires pred(lo) == true and pred(hi) == false; returns the
/// bracket end `hi` once hi - lo <= tol.
template <std::predicate<double> Pred>
double bisect_boundary(Pred pred, double lo, double hi, double tol = 1e-13) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

/// Sign-change bisection for a continuous function with f(lo) and f(hi) of
/// opposite sign.
template <typename F>
double bisect_root(F f, double lo, double hi, double tol = 1e-13) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace giv
