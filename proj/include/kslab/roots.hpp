#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

namespace kslab::roots {

struct Bracket {
  double lo;
  double hi;
  double f_lo;
  double f_hi;
};

/// Plain bisection on a sign change. Runs until the bracket collapses to
/// adjacent floating point numbers, |f| drops below `ftol`, or the width
/// falls under `xtol`. Returns the endpoint with the smaller |f|.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol = 0.0, double ftol = 0.0,
              std::size_t max_iter = 400) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  for (std::size_t it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= std::min(lo, hi) || mid >= std::max(lo, hi)) break;
    if (std::abs(hi - lo) <= xtol) break;
    const double fm = f(mid);
    if (fm == 0.0 || std::abs(fm) < ftol) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

/// Brent's method (inverse quadratic interpolation with bisection
/// fallback). Requires f(a) and f(b) of opposite sign.
template <class F>
double brent(F&& f, double a, double b, double fa, double fb, double xtol,
             std::size_t max_iter = 200) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (std::size_t it = 0; it < max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  return b;
}

template <class F>
double brent(F&& f, double a, double b, double xtol) {
  const double fa = f(a);
  const double fb = f(b);
  return brent(f, a, b, fa, fb, xtol);
}

}  // namespace kslab::roots
