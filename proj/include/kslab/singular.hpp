#pragma once

#include <cstddef>
#include <vector>

#include "kslab/equilibria.hpp"
#include "kslab/kernel.hpp"
#include "kslab/ode.hpp"
#include "kslab/radial.hpp"

namespace kslab {

struct PicardOptions {
  double tol = 1e-13;
  /// Grid step; 0 selects default_grid_step.
  double step = 0.0;
  double span = 30.0;
  std::size_t max_iterations = 200;
  /// zeta0 starts at ln m + 2 and may rise by at most this much.
  double zeta0_max_offset = 12.0;
  /// Multiplier of the forcing m^2 e^{-2 zeta}(eta + 2 zeta); 0 removes it.
  double forcing_scale = 1.0;
};

/// Fixed point eta of eta = G * g(eta) on [zeta0, zeta0 + span], where
///   g(eta)(zeta) = m^2 e^{-2 zeta}(eta + 2 zeta) - 2(N-2)(e^eta - 1 - eta).
struct EtaProfile {
  KernelParams params;
  SemiInfiniteGrid grid;
  std::vector<double> eta;
  std::vector<double> eta_prime;
  std::vector<double> eta_second;
  std::size_t iterations = 0;
  /// Largest observed ratio of successive sup-distances.
  double contraction_ratio = 0.0;
  /// 2 ||F(0)||_inf, the radius of the ball the iteration is confined to.
  double ball_radius = 0.0;
  double forcing_scale = 1.0;

  double zeta0() const noexcept { return grid.zeta0; }
  /// r0 = m e^{-zeta0}, where the integral representation hands over to the ODE.
  double r0() const noexcept;
  double sup_abs_eta() const;
  /// Source g(eta) on the grid.
  std::vector<double> source() const;
};

EtaProfile picard_solve(const ProblemParams& params, const PicardOptions& options = {});

/// m^2/(2(N-1)) e^{-2 zeta}(zeta + (N-2)/(4(N-1))).
double correction_f(const KernelParams& params, double zeta);
/// Largest zeta with correction_f = level (-infinity if f < level everywhere).
double correction_f_root(const KernelParams& params, double level = 1.1);

/// The singular solution U* on [r_min, r_max]: grid part (r < r0) mapped from
/// the eta profile and ODE part (r >= r0) integrated in t = ln r.
class SingularProfile {
 public:
  SingularProfile() = default;
  SingularProfile(ProblemParams params, EtaProfile source, ode::Trajectory log_trajectory);

  const ProblemParams& params() const noexcept { return params_; }
  const EtaProfile& source() const noexcept { return source_; }
  /// Trajectory of u in t = ln r.
  const ode::Trajectory& log_trajectory() const noexcept { return traj_; }

  double r_min() const;
  double r0() const noexcept { return source_.r0(); }
  double r_max() const;
  bool covers(double r_lo, double r_hi) const;

  RadialPoint eval(double r) const;
  /// All stored nodes as radial points, ascending in r.
  std::vector<RadialPoint> nodes() const;
  RadialSamples samples(double r_lo, double r_hi) const;

 private:
  ProblemParams params_{};
  EtaProfile source_{};
  ode::Trajectory traj_{};
};

struct ExtendOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
};

/// Builds the singular profile on [m e^{-zeta_max}, r_max]. Throws
/// BlowupBeforeRmax if integration of the ODE part fails.
SingularProfile extend_to_radial(const ProblemParams& params, const EtaProfile& eta, double r_max,
                                 const ExtendOptions& options = {});

/// Picard solve and radial extension in one call.
SingularProfile singular_profile(int dimension, double lambda, double r_max,
                                 const PicardOptions& options = {});

struct LyapunovReport {
  std::vector<double> r;
  std::vector<double> v;
  /// max over consecutive samples of (V_{k+1} - V_k)/max(1, |V_k|).
  double max_relative_increase = 0.0;
};

/// V(r) = ((u')^2 - u^2)/2 + lambda e^u on the given samples.
LyapunovReport lyapunov_scan(double lambda, const RadialSamples& samples);
/// Scan over the stored nodes of the profile with r in [r_lo, r_hi].
LyapunovReport lyapunov_scan(const SingularProfile& profile, double r_lo, double r_hi);

enum class CriticalKind { min, max };

struct CriticalSet {
  std::vector<double> critical_radii;
  std::vector<CriticalKind> kinds;
  std::vector<double> crossing_radii;
  /// Roots rejected by the simplicity guard.
  std::size_t degenerate = 0;
};

/// Critical radii of u and crossings of u with `level` on [r_lo, r_hi] of the
/// dense output (defaults: the whole profile).
CriticalSet find_critical_set(const SingularProfile& profile, double level, double r_lo = 0.0,
                              double r_hi = 0.0);

struct SturmSamples {
  std::vector<double> r;
  std::vector<double> w;
  std::vector<double> coefficient;
};

/// F(u) = (u - lambda e^u)/(u - level) with level = lambda e^{level};
/// continuous at u = level with value 1 - level.
double sturm_ratio(double u, double level);

/// w = r^{(N-1)/2}(u - level) and the coefficient
/// F(u) + (N-1)(N-3)/(4 r^2), so that w'' = coefficient * w.
SturmSamples sturm_transform(const SingularProfile& profile, double level, double r_lo,
                             double r_hi, std::size_t count);

}  // namespace kslab
