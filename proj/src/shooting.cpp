#include "kslab/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kslab/errors.hpp"
#include "kslab/roots.hpp"
#include "kslab/scan.hpp"

namespace kslab {

namespace {

// Simplicity guard on the t-derivative of the root function; in r it would
// scale like 1/r^2 and admit rounding noise of nearly constant solutions.
constexpr double kSimpleGuard = 1e-12;

double spacing_in_t(double t) { return std::min(0.05, 0.01 * std::exp(-t)); }

std::vector<double> simple_roots(const ode::Trajectory& traj, const scan::NodeFn& value,
                                 const scan::NodeFn& slope_in_t, double t_lo, double t_hi) {
  std::vector<double> out;
  const auto found = scan::trajectory_roots(traj, value, slope_in_t, t_lo, t_hi, spacing_in_t, 1e-12);
  double last = -INFINITY;
  for (const auto& root : found) {
    if (std::abs(root.slope) <= kSimpleGuard || root.x - last < 1e-10) continue;
    last = root.x;
    out.push_back(std::exp(root.x));
  }
  return out;
}

}  // namespace

SeriesStart series_start(const ProblemParams& params, double gamma, double r0) {
  const double c = gamma - std::exp(std::log(params.lambda) + gamma);
  const double n = params.dimension;
  return {gamma + c * r0 * r0 / (2.0 * n), c * r0 / n};
}

double default_step_off(const ProblemParams& params, double gamma) {
  const double c = std::abs(gamma - std::exp(std::log(params.lambda) + gamma));
  if (c == 0.0) return 1e-4;
  const double bound = std::exp(0.5 * (std::log(2.0 * params.dimension * 1e-8) - std::log(c)));
  return std::min(1e-4, bound);
}

RegularProfile::RegularProfile(ProblemParams params, double gamma, double r_start, bool rescaled,
                               ode::Trajectory log_trajectory)
    : params_(params),
      gamma_(gamma),
      r_start_(r_start),
      rescaled_(rescaled),
      traj_(std::move(log_trajectory)) {}

double RegularProfile::r_max() const { return std::exp(traj_.x_back()); }

RadialPoint RegularProfile::eval(double r) const {
  if (r < 0.0 || r > r_max() * (1.0 + 1e-12)) {
    throw Error(ErrorKind::ProfileCoverage,
                "r = " + std::to_string(r) + " outside the regular profile window");
  }
  if (r <= r_start_) {
    const double c = gamma_ - std::exp(std::log(params_.lambda) + gamma_);
    const double n = params_.dimension;
    return {r, gamma_ + c * r * r / (2.0 * n), c * r / n, c / n};
  }
  RadialPoint p = to_radial(traj_.eval(std::min(std::log(r), traj_.x_back())));
  p.r = r;
  return p;
}

std::vector<RadialPoint> RegularProfile::nodes() const {
  std::vector<RadialPoint> out;
  out.reserve(traj_.size());
  for (const auto& n : traj_.nodes()) out.push_back(to_radial(n));
  return out;
}

RadialSamples RegularProfile::samples(double r_lo, double r_hi) const {
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

std::vector<double> RegularProfile::critical_radii(double r_hi) const {
  const double t_hi = r_hi > 0.0 ? std::log(r_hi) : traj_.x_back();
  return simple_roots(
      traj_, [](const ode::Node& n) { return n.dy; },
      [](const ode::Node& n) { return n.d2y; }, traj_.x_front(), t_hi);
}

std::vector<double> RegularProfile::crossing_radii(double level, double r_hi) const {
  const double t_hi = r_hi > 0.0 ? std::log(r_hi) : traj_.x_back();
  return simple_roots(
      traj_, [level](const ode::Node& n) { return n.y - level; },
      [](const ode::Node& n) { return n.dy; }, traj_.x_front(), t_hi);
}

RegularProfile shoot_regular(const ProblemParams& params, double gamma, double r_max,
                             const ShootOptions& options) {
  if (!(gamma > 0.0)) throw Error(ErrorKind::ValidationError, "gamma must be positive");
  const double r_start = options.r_start > 0.0 ? options.r_start : default_step_off(params, gamma);
  if (!(r_max > r_start)) {
    throw Error(ErrorKind::PreconditionViolated, "r_max must exceed the step-off radius");
  }
  const double alpha = params.dimension - 2.0;
  const double log_lambda = std::log(params.lambda);
  const double n = params.dimension;
  const double c = gamma - std::exp(log_lambda + gamma);
  const double t0 = std::log(r_start);
  const double t1 = std::log(r_max);
  const double bump = c * r_start * r_start / (2.0 * n);  // u - gamma at r_start
  const double ut0 = c * r_start * r_start / n;            // r u'

  ode::IntegratorOptions io;
  io.rtol = options.rtol;
  io.atol = options.atol;
  io.h_init = 1e-3;

  const bool rescaled = gamma > options.hat_threshold;
  ode::Trajectory traj;
  if (std::abs(c) <= 1e-13 * std::max(1.0, gamma)) {
    // gamma is an equilibrium to solver tolerance: the solution is constant.
    traj = ode::Trajectory(std::vector<ode::Node>{{t0, gamma, 0.0, 0.0}, {t1, gamma, 0.0, 0.0}});
  } else if (!rescaled) {
    auto rhs = [&](double t, double u, double ut) { return log_radial_rhs(alpha, log_lambda, t, u, ut); };
    traj = ode::integrate(rhs, t0, gamma + bump, ut0, t1, io);
  } else {
    // s = t + gamma/2, v = u - gamma.
    const double shift = 0.5 * gamma;
    auto rhs = [&](double s, double v, double vs) {
      return -alpha * vs + std::exp(2.0 * s - gamma) * (v + gamma) - std::exp(2.0 * s + v + log_lambda);
    };
    const ode::Trajectory hat = ode::integrate(rhs, t0 + shift, bump, ut0, t1 + shift, io);
    std::vector<ode::Node> nodes;
    nodes.reserve(hat.size());
    for (const auto& h : hat.nodes()) nodes.push_back({h.x - shift, h.y + gamma, h.dy, h.d2y});
    nodes.front().x = t0;
    nodes.back().x = t1;
    traj = ode::Trajectory(std::move(nodes));
  }
  return RegularProfile(params, gamma, r_start, rescaled, std::move(traj));
}

HatProfile rescale_hat(const RegularProfile& profile) {
  HatProfile hat;
  hat.gamma = profile.gamma();
  hat.lambda = profile.params().lambda;
  const double scale = std::exp(0.5 * hat.gamma);
  hat.rho.push_back(0.0);
  hat.u_hat.push_back(0.0);
  hat.u_hat_prime.push_back(0.0);
  for (const auto& n : profile.log_trajectory().nodes()) {
    const RadialPoint p = to_radial(n);
    hat.rho.push_back(scale * p.r);
    hat.u_hat.push_back(p.u - hat.gamma);
    hat.u_hat_prime.push_back(p.u_prime / scale);
  }
  return hat;
}

RadialSamples unscale_hat(const HatProfile& hat) {
  RadialSamples s;
  const double scale = std::exp(0.5 * hat.gamma);
  for (std::size_t i = 0; i < hat.rho.size(); ++i) {
    s.r.push_back(hat.rho[i] / scale);
    s.u.push_back(hat.u_hat[i] + hat.gamma);
    s.u_prime.push_back(hat.u_hat_prime[i] * scale);
  }
  return s;
}

std::vector<double> energy_hat(const HatProfile& hat) {
  const double eg = std::exp(-hat.gamma);
  std::vector<double> e(hat.rho.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double u = hat.u_hat[i];
    const double up = hat.u_hat_prime[i];
    e[i] = 0.5 * up * up - 0.5 * eg * u * u + hat.lambda * std::exp(u) - eg * hat.gamma * u;
  }
  return e;
}

std::vector<double> energy_emden(const std::vector<double>& u, const std::vector<double>& u_prime,
                                 double lambda) {
  std::vector<double> e(u.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = 0.5 * u_prime[i] * u_prime[i] + lambda * std::exp(u[i]);
  }
  return e;
}

EmdenProfile::EmdenProfile(int dimension, double lambda_inf, double u0, double rho_start,
                           ode::Trajectory w)
    : dimension_(dimension),
      lambda_inf_(lambda_inf),
      u0_(u0),
      rho_start_(rho_start),
      k_(std::log(2.0 * (dimension - 2.0) / lambda_inf)),
      traj_(std::move(w)) {}

double EmdenProfile::rho_max() const { return std::exp(traj_.x_back()); }

RadialPoint EmdenProfile::eval(double rho) const {
  if (rho < 0.0 || rho > rho_max() * (1.0 + 1e-12)) {
    throw Error(ErrorKind::ProfileCoverage, "rho outside the Emden profile window");
  }
  const double n = dimension_;
  if (rho <= rho_start_) {
    const double c = -lambda_inf_ * std::exp(u0_);
    return {rho, u0_ + c * rho * rho / (2.0 * n), c * rho / n, c / n};
  }
  const double t = std::min(std::log(rho), traj_.x_back());
  const ode::Node w = traj_.eval(t);
  const double ut = w.dy - 2.0;
  return {rho, w.y - 2.0 * t + k_, ut / rho, (w.d2y - ut) / (rho * rho)};
}

double EmdenProfile::difference(double rho) const {
  return traj_.eval(std::clamp(std::log(rho), traj_.x_front(), traj_.x_back())).y;
}

double EmdenProfile::difference_slope(double rho) const {
  return traj_.eval(std::clamp(std::log(rho), traj_.x_front(), traj_.x_back())).dy / rho;
}

RadialSamples EmdenProfile::samples() const {
  RadialSamples s;
  for (const auto& w : traj_.nodes()) {
    const double rho = std::exp(w.x);
    s.r.push_back(rho);
    s.u.push_back(w.y - 2.0 * w.x + k_);
    s.u_prime.push_back((w.dy - 2.0) / rho);
  }
  return s;
}

EmdenProfile shoot_emden(int dimension, double lambda_inf, double rho_max,
                         const ShootOptions& options, double u0) {
  const ProblemParams params = ProblemParams::make(dimension, lambda_inf);
  const double n = dimension;
  const double c = -lambda_inf * std::exp(u0);
  const double rho_start =
      options.r_start > 0.0 ? options.r_start
                            : std::min(1e-4, std::sqrt(2.0 * n * 1e-8 / std::abs(c)));
  if (!(rho_max > rho_start)) {
    throw Error(ErrorKind::PreconditionViolated, "rho_max must exceed the step-off radius");
  }
  const double alpha = n - 2.0;
  const double k = std::log(2.0 * alpha / params.lambda);
  const double t0 = std::log(rho_start);
  const double u_start = u0 + c * rho_start * rho_start / (2.0 * n);
  const double ut_start = c * rho_start * rho_start / n;
  auto rhs = [alpha](double, double w, double wt) { return -alpha * wt - 2.0 * alpha * std::expm1(w); };
  ode::IntegratorOptions io;
  io.rtol = options.rtol;
  io.atol = options.atol;
  io.h_init = 1e-3;
  auto traj = ode::integrate(rhs, t0, u_start + 2.0 * t0 - k, ut_start + 2.0, std::log(rho_max), io);
  return EmdenProfile(dimension, lambda_inf, u0, rho_start, std::move(traj));
}

double emden_singular(int dimension, double lambda, double rho) {
  return -2.0 * std::log(rho) + std::log(2.0 * (dimension - 2.0) / lambda);
}

ZeroCount count_zeros(const ScalarFn& f, const ScalarFn& df, double a, double b,
                      const ZeroScanOptions& opt) {
  if (!(b > a)) throw Error(ErrorKind::ValidationError, "empty zero-count interval");
  if (opt.log_spacing && !(a > 0.0)) {
    throw Error(ErrorKind::ValidationError, "log spacing needs a > 0");
  }
  auto node = [&](std::size_t i, std::size_t n) {
    if (i == 0) return a;
    if (i == n) return b;
    const double s = static_cast<double>(i) / static_cast<double>(n);
    return opt.log_spacing ? a * std::exp(s * std::log(b / a)) : a + s * (b - a);
  };
  // Bracket = index i with a sign change on [x_i, x_{i+1}] or f(x_i) = 0.
  struct Scan {
    std::vector<double> x;
    std::vector<double> fx;
    std::vector<std::size_t> brackets;
  };
  auto scan = [&](std::size_t n) {
    Scan s;
    s.x.resize(n + 1);
    s.fx.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s.x[i] = node(i, n);
      s.fx[i] = f(s.x[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && s.fx[i] == 0.0) {
        s.brackets.push_back(i);
      } else if (s.fx[i] != 0.0 && s.fx[i + 1] != 0.0 && (s.fx[i] < 0.0) != (s.fx[i + 1] < 0.0)) {
        s.brackets.push_back(i);
      }
    }
    return s;
  };
  auto well_separated = [](const Scan& s) {
    for (std::size_t k = 1; k < s.brackets.size(); ++k) {
      if (s.brackets[k] - s.brackets[k - 1] < 3) return false;
    }
    return true;
  };

  std::size_t n = std::max<std::size_t>(opt.samples, 8);
  Scan current = scan(n);
  for (std::size_t level = 0; level < opt.max_refinements; ++level) {
    Scan finer = scan(2 * n);
    const bool stable = finer.brackets.size() == current.brackets.size();
    current = std::move(finer);
    n *= 2;
    if (stable && well_separated(current)) break;
  }

  ZeroCount out;
  out.a = a;
  out.b = b;
  for (std::size_t i : current.brackets) {
    double z;
    if (current.fx[i] == 0.0) {
      z = current.x[i];
    } else {
      z = roots::brent(f, current.x[i], current.x[i + 1], current.fx[i], current.fx[i + 1], opt.xtol);
    }
    const double slope = df(z);
    if (!(std::abs(slope) > opt.slope_tol)) {
      out.all_simple = false;
      throw Error(ErrorKind::DegenerateZero,
                  "zero at " + std::to_string(z) + " has slope " + std::to_string(slope));
    }
    out.zeros.push_back(z);
  }
  out.count = out.zeros.size();
  return out;
}

ZeroCount regular_singular_zeros(const SingularProfile& singular, const RegularProfile& regular,
                                 double r_hi) {
  const double a = std::max(regular.r_start(), singular.r_min() * (1.0 + 1e-9));
  const double b = std::min(r_hi, std::min(regular.r_max(), singular.r_max()));
  auto f = [&](double r) { return regular.eval(r).u - singular.eval(r).u; };
  auto df = [&](double r) { return regular.eval(r).u_prime - singular.eval(r).u_prime; };
  ZeroScanOptions opt;
  opt.log_spacing = true;
  opt.samples = static_cast<std::size_t>(std::ceil(100.0 * std::log(b / a))) + 100;
  opt.slope_tol = 1e-12;
  opt.max_refinements = 3;
  ZeroCount zc = count_zeros(f, df, a, b, opt);
  zc.a = 0.0;
  return zc;
}

std::vector<ZeroCount> zero_growth_regular(const SingularProfile& singular,
                                           const std::vector<double>& gammas, double r_hi,
                                           const ShootOptions& options) {
  std::vector<ZeroCount> out;
  for (double gamma : gammas) {
    const RegularProfile reg = shoot_regular(singular.params(), gamma, r_hi * 1.01, options);
    out.push_back(regular_singular_zeros(singular, reg, r_hi));
  }
  return out;
}

std::vector<ConvergenceRow> convergence_report(const SingularProfile& singular,
                                               const std::vector<double>& gammas, double a,
                                               double b, std::size_t samples,
                                               const ShootOptions& options) {
  if (!(a > 0.0) || !(b > a)) throw Error(ErrorKind::ValidationError, "need 0 < a < b");
  std::vector<ConvergenceRow> out;
  for (double gamma : gammas) {
    const RegularProfile reg = shoot_regular(singular.params(), gamma, b * 1.01, options);
    ConvergenceRow row{gamma, 0.0, 0.0};
    for (std::size_t i = 0; i < samples; ++i) {
      const double r = a + (b - a) * static_cast<double>(i) / static_cast<double>(samples - 1);
      const RadialPoint p = reg.eval(r);
      const RadialPoint q = singular.eval(r);
      row.value_distance = std::max(row.value_distance, std::abs(p.u - q.u));
      row.derivative_distance = std::max(row.derivative_distance, std::abs(p.u_prime - q.u_prime));
    }
    out.push_back(row);
  }
  return out;
}

EtaSamples eta_from_regular(const RegularProfile& profile, double zeta_lo, double zeta_hi,
                            std::size_t count) {
  const double m = std::sqrt(2.0 * (profile.params().dimension - 2.0) / profile.params().lambda);
  EtaSamples s;
  for (std::size_t i = 0; i < count; ++i) {
    const double zeta =
        count == 1 ? zeta_lo
                   : zeta_lo + (zeta_hi - zeta_lo) * static_cast<double>(i) / (count - 1);
    const RadialPoint p = profile.eval(m * std::exp(-zeta));
    s.zeta.push_back(zeta);
    s.eta.push_back(p.u - 2.0 * zeta);
    s.z.push_back(-p.r * p.u_prime - 2.0);
  }
  return s;
}

EtaSamples eta_hat_from_hat(const HatProfile& hat, double m) {
  EtaSamples s;
  const double log_m = std::log(m);
  for (std::size_t i = hat.rho.size(); i-- > 0;) {
    const double rho = hat.rho[i];
    if (!(rho > 0.0)) continue;
    const double tau = log_m - std::log(rho);
    s.zeta.push_back(tau);
    s.eta.push_back(hat.u_hat[i] - 2.0 * tau);
    s.z.push_back(-rho * hat.u_hat_prime[i] - 2.0);
  }
  return s;
}

namespace {

// ln(m^2 e^{-2 zeta}(1 + 2 zeta)^2).
double log_tail_term(double m, double zeta) {
  return 2.0 * std::log(m) - 2.0 * zeta + 2.0 * std::log1p(2.0 * zeta);
}

}  // namespace

double trapping_zeta_star(double m, double eps) {
  const double target = std::log(eps);
  // The tail term decreases for zeta > 1/2.
  double lo = 0.5;
  if (log_tail_term(m, lo) <= target) return 2.0;
  double hi = lo + 1.0;
  while (log_tail_term(m, hi) > target) hi += 1.0;
  const double root = roots::bisect([&](double z) { return log_tail_term(m, z) - target; }, lo, hi);
  return std::max(2.0, root);
}

TrapReport trapping_check(const EtaSamples& s, int dimension, double m, double eps,
                          double zeta_star, double zeta_bar) {
  if (zeta_star < 2.0 || log_tail_term(m, zeta_star) > std::log(eps) + 1e-12) {
    throw Error(ErrorKind::PreconditionViolated,
                "tail condition m^2 e^{-2 zeta}(1 + 2 zeta)^2 <= eps fails at zeta* = " +
                    std::to_string(zeta_star));
  }
  const double alpha = dimension - 2.0;
  TrapReport rep;
  rep.zeta_star = zeta_star;
  rep.zeta_bar = zeta_bar;
  rep.eps = eps;
  rep.trapped = true;
  double bar_level = INFINITY;
  double bar_gap = INFINITY;
  for (std::size_t i = 0; i < s.zeta.size(); ++i) {
    const double zeta = s.zeta[i];
    const double eta = s.eta[i];
    const double z = s.z[i];
    const double level = 2.0 * alpha * (std::expm1(eta) - eta) + 0.5 * z * z;
    const double tail = std::exp(2.0 * std::log(m) - 2.0 * zeta) * (eta + 2.0 * zeta) * (eta + 2.0 * zeta);
    if (zeta >= zeta_star && zeta <= zeta_bar) {
      rep.zeta.push_back(zeta);
      rep.modified_energy.push_back(level - 0.5 * tail);
      rep.max_level = std::max(rep.max_level, level);
      if (zeta > zeta_star && zeta < zeta_bar && level > 2.0 * eps) rep.trapped = false;
    }
    if (std::abs(zeta - zeta_bar) < bar_gap) {
      bar_gap = std::abs(zeta - zeta_bar);
      bar_level = level;
    }
  }
  rep.entered = bar_level <= eps;
  return rep;
}

}  // namespace kslab
