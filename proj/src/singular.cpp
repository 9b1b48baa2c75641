#include "kslab/singular.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kslab/errors.hpp"
#include "kslab/roots.hpp"
#include "kslab/scan.hpp"

namespace kslab {

namespace {

double sup_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

struct SourceTerm {
  const KernelParams& params;
  const std::vector<double>& zeta;
  std::vector<double> r2;
  double scale;

  SourceTerm(const KernelParams& p, const std::vector<double>& z, double forcing_scale)
      : params(p), zeta(z), r2(z.size()), scale(forcing_scale) {
    const double log_m = std::log(p.m);
    for (std::size_t i = 0; i < z.size(); ++i) r2[i] = std::exp(2.0 * (log_m - z[i]));
  }

  std::vector<double> operator()(const std::vector<double>& eta) const {
    std::vector<double> g(eta.size());
    const double two_alpha = 2.0 * params.alpha;
    for (std::size_t i = 0; i < eta.size(); ++i) {
      const double e = eta[i];
      g[i] = scale * r2[i] * (e + 2.0 * zeta[i]) - two_alpha * (std::expm1(e) - e);
    }
    return g;
  }
};

}  // namespace

double EtaProfile::r0() const noexcept { return params.m * std::exp(-grid.zeta0); }

double EtaProfile::sup_abs_eta() const { return sup_abs(eta); }

std::vector<double> EtaProfile::source() const {
  const auto zeta = grid.nodes();
  return SourceTerm(params, zeta, forcing_scale)(eta);
}

EtaProfile picard_solve(const ProblemParams& problem, const PicardOptions& opt) {
  const KernelParams kp = kernel_params(problem.dimension, problem.lambda);
  const double h = opt.step > 0.0 ? opt.step : default_grid_step(kp);
  const double zeta_start = std::log(kp.m) + 2.0;
  constexpr double noise = 1e-15;

  for (double offset = 0.0; offset <= opt.zeta0_max_offset + 1e-12; offset += 1.0) {
    const SemiInfiniteGrid grid = SemiInfiniteGrid::with_span(zeta_start + offset, opt.span, h);
    const std::vector<double> zeta = grid.nodes();
    const SourceTerm source(kp, zeta, opt.forcing_scale);

    std::vector<double> eta(grid.size, 0.0);
    std::vector<double> next;
    try {
      next = convolve_tail(kp, grid, source(eta));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TailNotDecaying) throw;
      continue;
    }
    const double ball = 2.0 * sup_abs(next);

    double prev_d = -1.0;
    double max_ratio = 0.0;
    bool converged = false;
    bool failed = false;
    std::size_t it = 0;
    while (it < opt.max_iterations) {
      ++it;
      double d = 0.0;
      for (std::size_t i = 0; i < eta.size(); ++i) d = std::max(d, std::abs(next[i] - eta[i]));
      if (prev_d > noise && d > noise) {
        max_ratio = std::max(max_ratio, d / prev_d);
        if (max_ratio >= 0.5) {
          failed = true;
          break;
        }
      }
      eta.swap(next);
      if (d < opt.tol) {
        converged = true;
        break;
      }
      prev_d = d;
      try {
        next = convolve_tail(kp, grid, source(eta));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::TailNotDecaying) throw;
        failed = true;
        break;
      }
      if (!all_finite(next)) {
        failed = true;
        break;
      }
    }
    if (failed || !converged) continue;

    EtaProfile out;
    out.params = kp;
    out.grid = grid;
    out.iterations = it;
    out.contraction_ratio = max_ratio;
    out.ball_radius = ball;
    out.forcing_scale = opt.forcing_scale;
    const std::vector<double> g = source(eta);
    const std::vector<double> dconv = convolve_tail(kp, grid, g, KernelSide::derivative);
    out.eta_prime.resize(grid.size);
    out.eta_second.resize(grid.size);
    for (std::size_t i = 0; i < grid.size; ++i) {
      out.eta_prime[i] = -dconv[i];
      out.eta_second[i] = g[i] + kp.alpha * out.eta_prime[i] - 2.0 * kp.alpha * eta[i];
    }
    out.eta = std::move(eta);
    return out;
  }
  throw Error(ErrorKind::NoContraction,
              "no zeta0 up to ln m + " + std::to_string(2.0 + opt.zeta0_max_offset) +
                  " gave a contraction ratio below 1/2 (lambda = " +
                  std::to_string(problem.lambda) + ")");
}

double correction_f(const KernelParams& p, double zeta) {
  const double n = p.dimension;
  return p.m * p.m / (2.0 * (n - 1.0)) * std::exp(-2.0 * zeta) *
         (zeta + (n - 2.0) / (4.0 * (n - 1.0)));
}

double correction_f_root(const KernelParams& p, double level) {
  const double n = p.dimension;
  // f' = 0 at zeta = 1/2 - (N-2)/(4(N-1)); f decreases to 0 beyond it.
  const double peak = 0.5 - (n - 2.0) / (4.0 * (n - 1.0));
  if (correction_f(p, peak) < level) return -INFINITY;
  double hi = peak + 1.0;
  while (correction_f(p, hi) > level) hi += 1.0;
  auto f = [&](double z) { return correction_f(p, z) - level; };
  return roots::bisect(f, peak, hi, 0.0);
}

SingularProfile::SingularProfile(ProblemParams params, EtaProfile source,
                                 ode::Trajectory log_trajectory)
    : params_(params), source_(std::move(source)), traj_(std::move(log_trajectory)) {}

double SingularProfile::r_min() const { return std::exp(traj_.x_front()); }
double SingularProfile::r_max() const { return std::exp(traj_.x_back()); }

bool SingularProfile::covers(double r_lo, double r_hi) const {
  const double slack = 1e-12;
  return !traj_.empty() && std::log(r_lo) >= traj_.x_front() - slack &&
         std::log(r_hi) <= traj_.x_back() + slack;
}

RadialPoint SingularProfile::eval(double r) const {
  if (!(r > 0.0) || !covers(r, r)) {
    throw Error(ErrorKind::ProfileCoverage,
                "r = " + std::to_string(r) + " outside the singular profile window");
  }
  const double t = std::clamp(std::log(r), traj_.x_front(), traj_.x_back());
  RadialPoint p = to_radial(traj_.eval(t));
  p.r = r;
  return p;
}

std::vector<RadialPoint> SingularProfile::nodes() const {
  std::vector<RadialPoint> out;
  out.reserve(traj_.size());
  for (const auto& n : traj_.nodes()) out.push_back(to_radial(n));
  return out;
}

RadialSamples SingularProfile::samples(double r_lo, double r_hi) const {
  RadialSamples s;
  for (const auto& n : traj_.nodes()) {
    const RadialPoint p = to_radial(n);
    if (p.r < r_lo || p.r > r_hi) continue;
    s.r.push_back(p.r);
    s.u.push_back(p.u);
    s.u_prime.push_back(p.u_prime);
  }
  return s;
}

SingularProfile extend_to_radial(const ProblemParams& params, const EtaProfile& eta, double r_max,
                                 const ExtendOptions& options) {
  const double r0 = eta.r0();
  if (!(r_max > r0)) {
    throw Error(ErrorKind::PreconditionViolated,
                "r_max must exceed r0 = " + std::to_string(r0));
  }
  const double log_m = std::log(eta.params.m);
  ode::Trajectory traj;
  for (std::size_t k = eta.grid.size; k-- > 0;) {
    const double zeta = eta.grid.node(k);
    traj.push_back({log_m - zeta, eta.eta[k] + 2.0 * zeta, -(eta.eta_prime[k] + 2.0),
                    eta.eta_second[k]});
  }
  const ode::Node start = traj.nodes().back();

  const double alpha = params.dimension - 2.0;
  const double log_lambda = std::log(params.lambda);
  auto rhs = [&](double t, double u, double ut) { return log_radial_rhs(alpha, log_lambda, t, u, ut); };
  ode::IntegratorOptions io;
  io.rtol = options.rtol;
  io.atol = options.atol;
  io.h_init = 1e-3;
  try {
    traj.append(ode::integrate(rhs, start.x, start.y, start.dy, std::log(r_max), io));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::StepUnderflow) throw;
    throw Error(ErrorKind::BlowupBeforeRmax, e.what());
  }
  return SingularProfile(params, eta, std::move(traj));
}

SingularProfile singular_profile(int dimension, double lambda, double r_max,
                                 const PicardOptions& options) {
  const ProblemParams params = ProblemParams::make(dimension, lambda);
  return extend_to_radial(params, picard_solve(params, options), r_max);
}

LyapunovReport lyapunov_scan(double lambda, const RadialSamples& s) {
  LyapunovReport rep;
  rep.r = s.r;
  rep.v.resize(s.r.size());
  for (std::size_t i = 0; i < s.r.size(); ++i) {
    rep.v[i] = 0.5 * (s.u_prime[i] * s.u_prime[i] - s.u[i] * s.u[i]) + lambda * std::exp(s.u[i]);
  }
  for (std::size_t i = 1; i < rep.v.size(); ++i) {
    const double inc = (rep.v[i] - rep.v[i - 1]) / std::max(1.0, std::abs(rep.v[i - 1]));
    rep.max_relative_increase = std::max(rep.max_relative_increase, inc);
  }
  return rep;
}

LyapunovReport lyapunov_scan(const SingularProfile& profile, double r_lo, double r_hi) {
  return lyapunov_scan(profile.params().lambda, profile.samples(r_lo, r_hi));
}

CriticalSet find_critical_set(const SingularProfile& profile, double level, double r_lo,
                              double r_hi) {
  CriticalSet out;
  const auto& traj = profile.log_trajectory();
  if (traj.size() < 2) return out;
  const double t_lo = r_lo > 0.0 ? std::log(r_lo) : traj.x_front();
  const double t_hi = r_hi > 0.0 ? std::log(r_hi) : traj.x_back();
  // Output spacing of at most 0.01 in r, never coarser than 0.05 in t.
  auto spacing = [](double t) { return std::min(0.05, 0.01 * std::exp(-t)); };
  constexpr double xtol = 1e-12;
  constexpr double guard = 1e-12;

  const auto crit = scan::trajectory_roots(
      traj, [](const ode::Node& n) { return n.dy; }, [](const ode::Node& n) { return n.d2y; },
      t_lo, t_hi, spacing, xtol);
  double last = -INFINITY;
  for (const auto& root : crit) {
    const double r = std::exp(root.x);
    const double u_second = root.slope / (r * r);  // u_t = 0 here
    if (std::abs(u_second) <= guard) {
      ++out.degenerate;
      continue;
    }
    if (root.x - last < 1e-10) continue;
    last = root.x;
    out.critical_radii.push_back(r);
    out.kinds.push_back(u_second > 0.0 ? CriticalKind::min : CriticalKind::max);
  }

  const auto cross = scan::trajectory_roots(
      traj, [level](const ode::Node& n) { return n.y - level; },
      [](const ode::Node& n) { return n.dy; }, t_lo, t_hi, spacing, xtol);
  last = -INFINITY;
  for (const auto& root : cross) {
    const double r = std::exp(root.x);
    if (std::abs(root.slope / r) <= guard) {
      ++out.degenerate;
      continue;
    }
    if (root.x - last < 1e-10) continue;
    last = root.x;
    out.crossing_radii.push_back(r);
  }
  return out;
}

double sturm_ratio(double u, double level) {
  const double d = u - level;
  if (std::abs(d) < 1e-8) return 1.0 - level * (1.0 + 0.5 * d);
  return 1.0 - level * std::expm1(d) / d;
}

SturmSamples sturm_transform(const SingularProfile& profile, double level, double r_lo,
                             double r_hi, std::size_t count) {
  SturmSamples out;
  const double n = profile.params().dimension;
  const double a = 0.5 * (n - 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const double r =
        count == 1 ? r_lo : r_lo + (r_hi - r_lo) * static_cast<double>(i) / (count - 1);
    const RadialPoint p = profile.eval(r);
    out.r.push_back(r);
    out.w.push_back(std::pow(r, a) * (p.u - level));
    out.coefficient.push_back(sturm_ratio(p.u, level) + (n - 1.0) * (n - 3.0) / (4.0 * r * r));
  }
  return out;
}

}  // namespace kslab
