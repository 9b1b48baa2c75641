#include "kslab/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "kslab/errors.hpp"
#include "kslab/ode.hpp"
#include "kslab/scan.hpp"

namespace kslab {

namespace {

// phi'' = -(N-1)/r phi' - kappa^2 phi on [r_s, R] from the series at r_s.
ode::Trajectory shoot_neumann(int dimension, double radius, double kappa) {
  const double n = dimension;
  const double k2 = kappa * kappa;
  const double rs = 1e-6 * radius;
  auto rhs = [n, k2](double r, double phi, double dphi) { return -(n - 1.0) / r * dphi - k2 * phi; };
  ode::IntegratorOptions io;
  io.h_init = 1e-3 * radius;
  return ode::integrate(rhs, rs, 1.0 - k2 * rs * rs / (2.0 * n), -k2 * rs / n, radius, io);
}

std::size_t derivative_zero_count(int dimension, double radius, double kappa) {
  const auto traj = shoot_neumann(dimension, radius, kappa);
  const double dx = std::min(radius / 50.0, 0.05 / std::max(kappa, 1e-300));
  const auto roots = scan::trajectory_roots(
      traj, [](const ode::Node& n) { return n.dy; }, [](const ode::Node&) { return 0.0; },
      traj.x_front(), traj.x_back(), [dx](double) { return dx; }, 1e-14 * radius);
  std::size_t count = 0;
  for (const auto& r : roots) {
    if (r.x < radius) ++count;
  }
  return count;
}

double simpson_uniform(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (y[0] + y[1]);
  if (n == 3) return h / 3.0 * (y[0] + 4.0 * y[1] + y[2]);
  std::size_t last = n - 1;
  double tail = 0.0;
  if ((n - 1) % 2 == 1) {
    // 3/8 rule on the final three intervals.
    tail = 3.0 * h / 8.0 * (y[n - 4] + 3.0 * y[n - 3] + 3.0 * y[n - 2] + y[n - 1]);
    last = n - 4;
  }
  double s = y[0] + y[last];
  for (std::size_t i = 1; i < last; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * y[i];
  return s * h / 3.0 + tail;
}

double lambda_exp_u(const SingularProfile& profile, double r) {
  return std::exp(std::log(profile.params().lambda) + profile.eval(r).u);
}

}  // namespace

std::vector<double> neumann_radial_eigs(int dimension, double radius, std::size_t k) {
  if (dimension < 1) throw Error(ErrorKind::ValidationError, "dimension must be positive");
  if (!(radius > 0.0)) throw Error(ErrorKind::ValidationError, "radius must be positive");
  std::vector<double> out;
  if (k == 0) return out;
  out.push_back(1.0);
  for (std::size_t i = 2; i <= k; ++i) {
    const std::size_t want = i - 1;
    double lo = out.size() > 1 ? std::sqrt(out.back() - 1.0) : 0.0;
    double hi = std::max(lo, 1.0 / radius) * 1.5 + std::numbers::pi / radius;
    while (derivative_zero_count(dimension, radius, hi) < want) hi *= 1.5;
    while (hi - lo > 1e-14 * hi) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (derivative_zero_count(dimension, radius, mid) >= want) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    const double kappa = 0.5 * (lo + hi);
    out.push_back(1.0 + kappa * kappa);
  }
  return out;
}

RadialSamples neumann_eigenfunction(int dimension, double radius, double eigenvalue,
                                    std::size_t count) {
  const double kappa = std::sqrt(std::max(0.0, eigenvalue - 1.0));
  const auto traj = shoot_neumann(dimension, radius, kappa);
  RadialSamples s;
  for (std::size_t i = 0; i < count; ++i) {
    const double r = radius * static_cast<double>(i) / static_cast<double>(count - 1);
    s.r.push_back(r);
    if (r <= traj.x_front()) {
      const double k2 = kappa * kappa;
      s.u.push_back(1.0 - k2 * r * r / (2.0 * dimension));
      s.u_prime.push_back(-k2 * r / dimension);
    } else {
      const auto n = traj.eval(std::min(r, traj.x_back()));
      s.u.push_back(n.y);
      s.u_prime.push_back(n.dy);
    }
  }
  return s;
}

double DiscretizedForm::node_radius(std::size_t i) const {
  return std::exp(std::log(inner_cutoff) + step * static_cast<double>(i));
}

DiscretizedForm assemble_form(const SingularProfile& profile, double eps, double radius,
                              std::size_t elements, bool zero_potential) {
  if (!(eps > 0.0) || !(radius > eps)) {
    throw Error(ErrorKind::ValidationError, "need 0 < eps < R");
  }
  if (elements < 2) throw Error(ErrorKind::ValidationError, "need at least two elements");
  if (!profile.covers(eps, radius)) {
    throw Error(ErrorKind::ProfileCoverage, "profile does not cover [" + std::to_string(eps) + ", " +
                                                std::to_string(radius) + "]");
  }
  DiscretizedForm form;
  form.dimension = profile.params().dimension;
  form.lambda = profile.params().lambda;
  form.inner_cutoff = eps;
  form.outer_radius = radius;
  form.node_count = elements;
  const double t0 = std::log(eps);
  const double h = (std::log(radius) - t0) / static_cast<double>(elements);
  form.step = h;
  const double n = form.dimension;
  const double alpha = n - 2.0;

  form.potential.resize(elements + 1);
  for (std::size_t i = 0; i <= elements; ++i) {
    form.potential[i] = zero_potential ? 0.0 : lambda_exp_u(profile, form.node_radius(i)) - 1.0;
  }

  // Three-point Gauss rule on each element for the potential part.
  const std::array<double, 3> gx{0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
  const std::array<double, 3> gw{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

  // Free nodes 1..elements map to matrix rows 0..elements-1.
  form.diagonal.assign(elements, 0.0);
  form.off_diagonal.assign(elements - 1, 0.0);
  for (std::size_t e = 0; e < elements; ++e) {
    const double ta = t0 + h * static_cast<double>(e);
    const double tb = ta + h;
    const double w = (std::exp(alpha * tb) - std::exp(alpha * ta)) / alpha;
    const double stiff = w / (h * h);
    double maa = 0.0;
    double mab = 0.0;
    double mbb = 0.0;
    if (!zero_potential) {
      for (std::size_t q = 0; q < 3; ++q) {
        const double t = ta + gx[q] * h;
        const double v = 1.0 - lambda_exp_u(profile, std::exp(t));
        const double weight = gw[q] * h * v * std::exp(n * t);
        const double pa = 1.0 - gx[q];
        const double pb = gx[q];
        maa += weight * pa * pa;
        mab += weight * pa * pb;
        mbb += weight * pb * pb;
      }
    }
    // Element nodes e and e + 1; node 0 is the Dirichlet node.
    if (e >= 1) {
      form.diagonal[e - 1] += stiff + maa;
      form.off_diagonal[e - 1] += -stiff + mab;
    }
    form.diagonal[e] += stiff + mbb;
  }
  return form;
}

InertiaResult negative_count(const DiscretizedForm& form) {
  InertiaResult res;
  res.cutoff = form.inner_cutoff;
  res.node_count = form.node_count;
  double d_prev = 0.0;
  for (std::size_t i = 0; i < form.diagonal.size(); ++i) {
    double d = form.diagonal[i];
    if (i > 0) d -= form.off_diagonal[i - 1] * form.off_diagonal[i - 1] / d_prev;
    if (d == 0.0) {
      d = 1e-300 * std::max(1.0, std::abs(form.diagonal[i]));
      res.pivot_perturbed = true;
    }
    if (d < 0.0) ++res.negative_count;
    d_prev = d;
  }
  return res;
}

RefinedInertia negative_count_refined(const SingularProfile& profile, double eps, double radius,
                                      const RefineOptions& options) {
  RefinedInertia out;
  const double span = std::log(radius / eps);
  auto elements = static_cast<std::size_t>(std::ceil(options.elements_per_unit * span));
  elements = std::max<std::size_t>(elements, 8);
  while (elements <= options.max_elements) {
    const auto res = negative_count(assemble_form(profile, eps, radius, elements));
    out.result = res;
    out.history.push_back(res.negative_count);
    out.elements.push_back(elements);
    const std::size_t need = options.stable_doublings + 1;
    if (out.history.size() >= need &&
        std::all_of(out.history.end() - static_cast<std::ptrdiff_t>(need), out.history.end(),
                    [&](std::size_t c) { return c == out.history.back(); })) {
      out.converged = true;
      break;
    }
    elements *= 2;
  }
  return out;
}

std::vector<MorseRung> morse_ladder(const SingularProfile& profile, double radius,
                                    const std::vector<double>& cutoffs, const RefineOptions& options) {
  if (profile.params().dimension == 10) {
    throw Error(ErrorKind::UnsupportedBorderline, "N = 10 is the open borderline case of the Morse dichotomy");
  }
  std::vector<MorseRung> out;
  for (double eps : cutoffs) {
    const auto refined = negative_count_refined(profile, eps, radius, options);
    out.push_back({eps, refined.result.node_count, refined.result.negative_count, refined.converged});
  }
  return out;
}

double hardy_radius(std::size_t j, double eps0) {
  return std::exp(-2.0 * std::numbers::pi * static_cast<double>(j) / eps0);
}

TestFunction hardy_test_function(std::size_t j, double eps0, int dimension, std::size_t samples) {
  if (dimension < 3 || dimension > 9) {
    throw Error(ErrorKind::NotApplicable, "Hardy test functions need 3 <= N <= 9");
  }
  if (!(eps0 > 0.0)) throw Error(ErrorKind::ValidationError, "eps0 must be positive");
  samples = std::max<std::size_t>(samples, 3);
  const double a = 0.5 * (dimension - 2.0);
  const double b = 0.5 * eps0;
  const double t_hi = std::log(hardy_radius(j, eps0));
  const double t_lo = std::log(hardy_radius(j + 1, eps0));
  TestFunction f;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = t_lo + (t_hi - t_lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double r = std::exp(t);
    const double s = std::sin(b * t);
    const double c = std::cos(b * t);
    f.r.push_back(r);
    f.f.push_back(std::exp(-a * t) * s);
    f.f_prime.push_back(std::exp(-(a + 1.0) * t) * (-a * s + b * c));
  }
  // Exact zeros at the support ends.
  f.f.front() = 0.0;
  f.f.back() = 0.0;
  return f;
}

double hardy_eps0(const SingularProfile& profile, double r_cut) {
  if (!(r_cut > 0.0)) r_cut = profile.r0();
  const double n = profile.params().dimension;
  const double hardy = 0.25 * (n - 2.0) * (n - 2.0);
  const double log_lambda = std::log(profile.params().lambda);
  double best = INFINITY;
  for (const auto& p : profile.nodes()) {
    if (p.r > r_cut) break;
    const double r2 = p.r * p.r;
    const double value = std::exp(2.0 * std::log(p.r) + log_lambda + p.u) - r2 - hardy;
    best = std::min(best, value);
  }
  if (!(best > 0.0)) {
    throw Error(ErrorKind::NotApplicable, "potential does not exceed the Hardy constant near the origin");
  }
  return std::sqrt(best);
}

double evaluate_J(const TestFunction& f, const SingularProfile& profile) {
  if (f.r.size() < 2) return 0.0;
  const double n = profile.params().dimension;
  const double lambda = profile.params().lambda;
  const double h = std::log(f.r[1] / f.r[0]);
  std::vector<double> y(f.r.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = f.r[i];
    const double v = 1.0 - lambda * std::exp(profile.eval(r).u);
    y[i] = (f.f_prime[i] * f.f_prime[i] + v * f.f[i] * f.f[i]) * std::pow(r, n);
  }
  return simpson_uniform(y, h);
}

double weighted_mass(const TestFunction& f, int dimension, int power) {
  if (f.r.size() < 2) return 0.0;
  const double h = std::log(f.r[1] / f.r[0]);
  std::vector<double> y(f.r.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = f.f[i] * f.f[i] * std::pow(f.r[i], dimension - 2.0 * power);
  }
  return simpson_uniform(y, h);
}

}  // namespace kslab
