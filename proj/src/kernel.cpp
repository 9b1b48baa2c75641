#include "kslab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "kslab/equilibria.hpp"
#include "kslab/errors.hpp"

namespace kslab {

namespace {

using cplx = std::complex<double>;

double adaptive_simpson(const auto& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_simpson(const auto& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 50);
}

// int_{zeta_max}^inf K(sigma - zeta) e^{-2x}(A x + B) d sigma with
// x = sigma - zeta_max and d = zeta_max - zeta >= 0.
double tail_integral(const KernelParams& p, KernelSide side, double d, double A, double B) {
  const double half_alpha = 0.5 * p.alpha;
  switch (p.regime) {
    case KernelRegime::oscillatory: {
      const cplx s(-half_alpha, p.beta);
      const cplx q = 2.0 - s;
      const cplx base = std::exp(s * d) * (B / q + A / (q * q)) / p.beta;
      return side == KernelSide::value ? base.imag() : (s * base).imag();
    }
    case KernelRegime::hyperbolic: {
      auto mode = [&](double s) {
        const double q = 2.0 - s;
        const double v = std::exp(s * d) * (B / q + A / (q * q));
        return side == KernelSide::value ? v : s * v;
      };
      return (mode(-half_alpha + p.beta) - mode(-half_alpha - p.beta)) / (2.0 * p.beta);
    }
    case KernelRegime::critical: {
      const double s = -half_alpha;
      const double q = 2.0 - s;
      const double e = std::exp(s * d);
      const double z_moment = e * (2.0 * A / (q * q * q) + (B + A * d) / (q * q) + B * d / q);
      if (side == KernelSide::value) return z_moment;
      return e * (B / q + A / (q * q)) + s * z_moment;
    }
  }
  return 0.0;
}

}  // namespace

KernelParams kernel_params(int dimension, double lambda) {
  const ProblemParams pp = ProblemParams::make(dimension, lambda);
  KernelParams k;
  k.dimension = pp.dimension;
  k.lambda = pp.lambda;
  const double n = dimension;
  k.alpha = n - 2.0;
  k.beta = std::sqrt((n - 2.0) * std::abs(n - 10.0) / 4.0);
  k.regime = dimension < 10    ? KernelRegime::oscillatory
             : dimension == 10 ? KernelRegime::critical
                               : KernelRegime::hyperbolic;
  k.m = std::sqrt(2.0 * (n - 2.0) / lambda);
  return k;
}

double green_value(const KernelParams& p, double z) {
  if (z < 0.0) return 0.0;
  const double decay = std::exp(-0.5 * p.alpha * z);
  switch (p.regime) {
    case KernelRegime::oscillatory: return decay * std::sin(p.beta * z) / p.beta;
    case KernelRegime::critical: return decay * z;
    case KernelRegime::hyperbolic: return decay * std::sinh(p.beta * z) / p.beta;
  }
  return 0.0;
}

double green_derivative(const KernelParams& p, double z) {
  if (z < 0.0) return 0.0;
  const double half_alpha = 0.5 * p.alpha;
  const double decay = std::exp(-half_alpha * z);
  switch (p.regime) {
    case KernelRegime::oscillatory:
      return decay * (std::cos(p.beta * z) - half_alpha * std::sin(p.beta * z) / p.beta);
    case KernelRegime::critical: return decay * (1.0 - half_alpha * z);
    case KernelRegime::hyperbolic:
      return decay * (std::cosh(p.beta * z) - half_alpha * std::sinh(p.beta * z) / p.beta);
  }
  return 0.0;
}

double green_l1_norm(const KernelParams& p) {
  if (p.regime != KernelRegime::oscillatory) return 1.0 / (2.0 * p.alpha);
  const double lobe = std::numbers::pi / p.beta;
  auto abs_g = [&](double z) { return std::abs(green_value(p, z)); };
  double total = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double piece = integrate_simpson(abs_g, k * lobe, (k + 1) * lobe, 1e-16);
    total += piece;
    if (piece < 1e-18 * total) break;
  }
  return total;
}

SemiInfiniteGrid SemiInfiniteGrid::with_span(double zeta0, double span, double step) {
  SemiInfiniteGrid grid;
  grid.zeta0 = zeta0;
  grid.step = step;
  grid.size = static_cast<std::size_t>(std::llround(span / step)) + 1;
  return grid;
}

std::vector<double> SemiInfiniteGrid::nodes() const {
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = node(i);
  return out;
}

double default_grid_step(const KernelParams& p) {
  if (p.regime == KernelRegime::oscillatory) {
    return std::min(0.01, std::min(1.0 / p.beta, 1.0) / 8.0);
  }
  return 0.01;
}

std::vector<double> convolve_tail(const KernelParams& p, const SemiInfiniteGrid& grid,
                                  std::span<const double> g, KernelSide side) {
  const std::size_t n = grid.size;
  if (g.size() != n) {
    throw Error(ErrorKind::ValidationError, "sample count does not match the grid");
  }
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  const double h = grid.step;

  std::vector<double> kern(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double z = h * static_cast<double>(k);
    kern[k] = side == KernelSide::value ? green_value(p, z) : green_derivative(p, z);
  }

  // Fitted tail e^{-2x}(A x + B), x = sigma - zeta_max.
  double A = 0.0;
  double B = g[n - 1];
  bool samples_grow = false;
  if (n >= 2) {
    const std::size_t back = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(1.0 / h)), 1, n - 1);
    const double dx = h * static_cast<double>(back);
    const double g_back = g[n - 1 - back];
    A = (B - g_back * std::exp(-2.0 * dx)) / dx;
    samples_grow = std::abs(B) > std::abs(g_back);
  }
  const double tail_slope = A - 2.0 * B;
  if (samples_grow || (B != 0.0 && tail_slope * B > 0.0) || (B == 0.0 && A != 0.0)) {
    throw Error(ErrorKind::TailNotDecaying, "fitted tail of the source term grows beyond zeta_max");
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t intervals = n - 1 - i;
    const double* gi = g.data() + i;
    double sum = 0.0;
    if (intervals == 1) {
      sum = 0.5 * h * (kern[0] * gi[0] + kern[1] * gi[1]);
    } else if (intervals >= 2) {
      const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
      double acc = kern[0] * gi[0];
      for (std::size_t k = 1; k < simpson_end; ++k) {
        acc += (k % 2 == 1 ? 4.0 : 2.0) * kern[k] * gi[k];
      }
      if (simpson_end > 0) acc += kern[simpson_end] * gi[simpson_end];
      sum = h / 3.0 * (simpson_end > 0 ? acc : 0.0);
      if (simpson_end != intervals) {
        const std::size_t s = simpson_end;
        sum += 3.0 * h / 8.0 *
               (kern[s] * gi[s] + 3.0 * kern[s + 1] * gi[s + 1] + 3.0 * kern[s + 2] * gi[s + 2] +
                kern[s + 3] * gi[s + 3]);
      }
    }
    const double d = h * static_cast<double>(intervals);
    out[i] = sum + tail_integral(p, side, d, A, B);
  }
  return out;
}

std::vector<double> apply_operator(const KernelParams& p, const SemiInfiniteGrid& grid,
                                   std::span<const double> eta) {
  const std::size_t n = eta.size();
  std::vector<double> out(n, 0.0);
  const double h = grid.step;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double d1 = (-eta[i + 2] + 8.0 * eta[i + 1] - 8.0 * eta[i - 1] + eta[i - 2]) / (12.0 * h);
    const double d2 = (-eta[i + 2] + 16.0 * eta[i + 1] - 30.0 * eta[i] + 16.0 * eta[i - 1] -
                       eta[i - 2]) /
                      (12.0 * h * h);
    out[i] = d2 - p.alpha * d1 + 2.0 * p.alpha * eta[i];
  }
  return out;
}

}  // namespace kslab
