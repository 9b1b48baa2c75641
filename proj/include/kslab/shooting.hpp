#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "kslab/equilibria.hpp"
#include "kslab/ode.hpp"
#include "kslab/radial.hpp"
#include "kslab/singular.hpp"

namespace kslab {

struct SeriesStart {
  double u;
  double u_prime;
};

/// u = gamma + c r0^2/(2N), u' = c r0/N with c = gamma - lambda e^gamma.
SeriesStart series_start(const ProblemParams& params, double gamma, double r0);

/// Step-off radius: min(1e-4, sqrt(2N 1e-8/|c|)), so the dropped O(r^4)
/// terms stay far below the integration tolerance.
double default_step_off(const ProblemParams& params, double gamma);

struct ShootOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
  /// Step-off radius; 0 selects default_step_off.
  double r_start = 0.0;
  /// Above this gamma the rescaled variables s = t + gamma/2, v = u - gamma
  /// are integrated.
  double hat_threshold = 25.0;
};

/// Regular solution u(., gamma): series on [0, r_start], ODE in t = ln r on
/// [r_start, r_max].
class RegularProfile {
 public:
  RegularProfile() = default;
  RegularProfile(ProblemParams params, double gamma, double r_start, bool rescaled,
                 ode::Trajectory log_trajectory);

  const ProblemParams& params() const noexcept { return params_; }
  double gamma() const noexcept { return gamma_; }
  double r_start() const noexcept { return r_start_; }
  double r_max() const;
  bool rescaled() const noexcept { return rescaled_; }
  const ode::Trajectory& log_trajectory() const noexcept { return traj_; }

  /// Value at any r in [0, r_max]; the series is used below r_start.
  RadialPoint eval(double r) const;
  std::vector<RadialPoint> nodes() const;
  RadialSamples samples(double r_lo, double r_hi) const;

  /// Ascending radii in (0, r_hi] where u' = 0 (simple roots only).
  std::vector<double> critical_radii(double r_hi = 0.0) const;
  /// Ascending radii in (0, r_hi] where u = level.
  std::vector<double> crossing_radii(double level, double r_hi = 0.0) const;

 private:
  ProblemParams params_{};
  double gamma_ = 0.0;
  double r_start_ = 0.0;
  bool rescaled_ = false;
  ode::Trajectory traj_{};
};

/// Throws StepUnderflow when the integrator fails.
RegularProfile shoot_regular(const ProblemParams& params, double gamma, double r_max,
                             const ShootOptions& options = {});

/// u_hat(rho) = u(e^{-gamma/2} rho) - gamma sampled on the profile nodes,
/// with the origin prepended.
struct HatProfile {
  double gamma = 0.0;
  double lambda = 0.0;
  std::vector<double> rho;
  std::vector<double> u_hat;
  std::vector<double> u_hat_prime;
};

HatProfile rescale_hat(const RegularProfile& profile);
/// Inverse of rescale_hat: (r, u, u') samples.
RadialSamples unscale_hat(const HatProfile& hat);

/// E(rho) = u_hat'^2/2 - e^{-gamma} u_hat^2/2 + lambda e^{u_hat} - e^{-gamma} gamma u_hat.
std::vector<double> energy_hat(const HatProfile& hat);
/// Limit gamma -> inf: u_hat'^2/2 + lambda e^{u_hat}.
std::vector<double> energy_emden(const std::vector<double>& u, const std::vector<double>& u_prime,
                                 double lambda);

/// Regular solution of u'' + (N-1)/rho u' + lambda_inf e^u = 0, u(0) = u0.
/// The trajectory stores w = u + 2t - k in t = ln rho, k = ln(2(N-2)/lambda_inf),
/// which solves the autonomous equation w_tt + (N-2) w_t + 2(N-2)(e^w - 1) = 0
/// and equals u - u* for the singular solution u* = -2 ln rho + k.
class EmdenProfile {
 public:
  EmdenProfile() = default;
  EmdenProfile(int dimension, double lambda_inf, double u0, double rho_start, ode::Trajectory w);

  int dimension() const noexcept { return dimension_; }
  double lambda_inf() const noexcept { return lambda_inf_; }
  double u0() const noexcept { return u0_; }
  double rho_start() const noexcept { return rho_start_; }
  double rho_max() const;
  double k() const noexcept { return k_; }
  const ode::Trajectory& w_trajectory() const noexcept { return traj_; }

  /// (rho, u, u', u'') for rho in [0, rho_max].
  RadialPoint eval(double rho) const;
  /// u - u* and its rho-derivative, rho > 0.
  double difference(double rho) const;
  double difference_slope(double rho) const;
  RadialSamples samples() const;

 private:
  int dimension_ = 3;
  double lambda_inf_ = 1.0;
  double u0_ = 0.0;
  double rho_start_ = 0.0;
  double k_ = 0.0;
  ode::Trajectory traj_{};
};

EmdenProfile shoot_emden(int dimension, double lambda_inf, double rho_max,
                         const ShootOptions& options = {}, double u0 = 0.0);

/// -2 ln rho + ln(2(N-2)/lambda).
double emden_singular(int dimension, double lambda, double rho);

struct ZeroCount {
  double a = 0.0;
  double b = 0.0;
  std::size_t count = 0;
  std::vector<double> zeros;
  bool all_simple = true;
};

using ScalarFn = std::function<double(double)>;

struct ZeroScanOptions {
  std::size_t samples = 2000;
  bool log_spacing = false;
  /// Zeros with |slope| below this are degenerate.
  double slope_tol = 1e-10;
  double xtol = 1e-13;
  std::size_t max_refinements = 6;
};

/// Zeros of f on (a, b): sign scan on a grid refined until consecutive zeros
/// are at least three samples apart and the count is stable, then Brent.
/// Throws DegenerateZero if a refined zero has |f'| below slope_tol.
ZeroCount count_zeros(const ScalarFn& f, const ScalarFn& df, double a, double b,
                      const ZeroScanOptions& options = {});

/// Zeros of u(., gamma) - U* on (0, r_hi) for each gamma of the ladder.
std::vector<ZeroCount> zero_growth_regular(const SingularProfile& singular,
                                           const std::vector<double>& gammas, double r_hi,
                                           const ShootOptions& options = {});
/// Same for one already-shot regular profile.
ZeroCount regular_singular_zeros(const SingularProfile& singular, const RegularProfile& regular,
                                 double r_hi);

struct ConvergenceRow {
  double gamma;
  double value_distance;
  double derivative_distance;
};

/// sup over [a, b] of |u(., gamma) - U*| and |u'(., gamma) - U*'|.
std::vector<ConvergenceRow> convergence_report(const SingularProfile& singular,
                                               const std::vector<double>& gammas, double a,
                                               double b, std::size_t samples = 2001,
                                               const ShootOptions& options = {});

/// eta(zeta) = u(r) - 2 zeta and z = eta'(zeta) with r = m e^{-zeta}.
struct EtaSamples {
  std::vector<double> zeta;
  std::vector<double> eta;
  std::vector<double> z;
};

/// Transformed samples of a regular profile on [zeta_lo, zeta_hi], ascending in zeta.
EtaSamples eta_from_regular(const RegularProfile& profile, double zeta_lo, double zeta_hi,
                            std::size_t count);
/// eta_hat(tau) = u_hat(rho) - 2 tau with tau = ln m - ln rho, from the hat profile.
EtaSamples eta_hat_from_hat(const HatProfile& hat, double m);

/// Largest zeta >= 2 with m^2 e^{-2 zeta}(1 + 2 zeta)^2 / 2 <= eps / 2 beyond it.
double trapping_zeta_star(double m, double eps);

struct TrapReport {
  double zeta_star = 0.0;
  double zeta_bar = 0.0;
  double eps = 0.0;
  /// (eta, z)(zeta_bar) lies in Gamma_eps.
  bool entered = false;
  /// (eta, z) stays in Gamma_{2 eps} on (zeta_star, zeta_bar).
  bool trapped = false;
  double max_level = 0.0;
  std::vector<double> zeta;
  std::vector<double> modified_energy;
};

/// Checks the trapping property on samples of (eta, z). Throws
/// PreconditionViolated if zeta_star < 2 or the tail condition fails there.
TrapReport trapping_check(const EtaSamples& samples, int dimension, double m, double eps,
                          double zeta_star, double zeta_bar);

}  // namespace kslab
