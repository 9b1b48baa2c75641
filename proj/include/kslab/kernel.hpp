#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kslab {

enum class KernelRegime { oscillatory, critical, hyperbolic };

/// Constants of the constant-coefficient operator
///   L eta = eta'' - (N-2) eta' + 2(N-2) eta
/// and the scale m = sqrt(2(N-2)/lambda) of the logarithmic change of
/// variables r = m e^{-zeta}.
struct KernelParams {
  int dimension = 3;
  double lambda = 0.1;
  double alpha = 1.0;  ///< N - 2
  double beta = 0.0;   ///< sqrt((N-2)|N-10|/4)
  KernelRegime regime = KernelRegime::oscillatory;
  double m = 0.0;
};

KernelParams kernel_params(int dimension, double lambda);

/// Green's function of L with G(z) = 0 for z < 0, G(0) = 0, G'(0+) = 1.
double green_value(const KernelParams& params, double z);
/// dG/dz; the right limit 1 is returned at z = 0.
double green_derivative(const KernelParams& params, double z);
/// Integral of |G| over [0, inf). Closed form 1/(2(N-2)) when G >= 0
/// (N >= 10), lobe-wise adaptive Simpson otherwise.
double green_l1_norm(const KernelParams& params);

/// Uniform grid zeta0, zeta0 + h, ..., discretising [zeta0, inf).
struct SemiInfiniteGrid {
  double zeta0 = 0.0;
  double step = 0.01;
  std::size_t size = 0;

  static SemiInfiniteGrid with_span(double zeta0, double span, double step);

  double node(std::size_t i) const noexcept { return zeta0 + step * static_cast<double>(i); }
  double zeta_max() const noexcept { return node(size - 1); }
  std::vector<double> nodes() const;
};

/// Grid step used for the kernel: min(0.01, min(1/beta, 1)/8).
double default_grid_step(const KernelParams& params);

enum class KernelSide { value, derivative };

/// (K * g)(zeta) = int_zeta^inf K(sigma - zeta) g(sigma) d sigma at every
/// node, with K = G (side = value) or K = G' (side = derivative).
/// Composite Simpson (3/8 rule on an odd leftover) over the grid plus a
/// closed-form tail beyond zeta_max, where g is replaced by the fitted mode
/// e^{-2 sigma}(a sigma + b). Throws TailNotDecaying if the fit grows.
std::vector<double> convolve_tail(const KernelParams& params, const SemiInfiniteGrid& grid,
                                  std::span<const double> g, KernelSide side = KernelSide::value);

/// Fourth-order finite-difference application of L on interior nodes
/// (two nodes dropped at each end; those entries are set to 0).
std::vector<double> apply_operator(const KernelParams& params, const SemiInfiniteGrid& grid,
                                   std::span<const double> eta);

}  // namespace kslab
