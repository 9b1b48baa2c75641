#include "kslab/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "kslab/errors.hpp"
#include "kslab/roots.hpp"
#include "kslab/singular.hpp"

namespace kslab {

namespace {

double level_for(double lambda) {
  return lambda <= 1.0 / std::numbers::e ? solve_equilibria(lambda).u_upper : 1.0;
}

std::vector<double> singular_critical_radii(int dimension, double lambda, double r_max) {
  const auto profile = singular_profile(dimension, lambda, r_max);
  return find_critical_set(profile, level_for(lambda), 0.0, r_max).critical_radii;
}

struct Probe {
  double lambda;
  double miss;
};

}  // namespace

double R_of_lambda(int dimension, std::size_t i, double lambda, const WindowOptions& options) {
  if (i == 0) throw Error(ErrorKind::ValidationError, "critical radius index starts at 1");
  double window = options.r_window;
  for (std::size_t k = 0; k <= options.max_doublings; ++k, window *= 2.0) {
    const auto radii = singular_critical_radii(dimension, lambda, window);
    if (radii.size() >= i) return radii[i - 1];
  }
  throw Error(ErrorKind::NotEnoughCriticalPoints,
              "fewer than " + std::to_string(i) + " critical radii of U* up to r = " + std::to_string(window / 2.0));
}

std::size_t i_star(int dimension, double radius, double lambda_ref, const WindowOptions& options) {
  double window = std::max(options.r_window, 2.0 * radius);
  for (std::size_t k = 0; k <= options.max_doublings; ++k, window *= 2.0) {
    const auto radii = singular_critical_radii(dimension, lambda_ref, window);
    const auto below = static_cast<std::size_t>(
        std::count_if(radii.begin(), radii.end(), [radius](double r) { return r <= radius; }));
    if (below < radii.size()) return below + 1;
  }
  throw Error(ErrorKind::NotEnoughCriticalPoints, "no critical radius of U* beyond R");
}

LambdaTarget find_lambda_i(int dimension, double radius, std::size_t i, const LambdaSearchOptions& options) {
  const double lambda_ref = options.lambda_ref > 0.0 ? options.lambda_ref : 0.5 * lambda_star(dimension);
  auto miss = [&](double lambda) { return R_of_lambda(dimension, i, lambda, options.window) - radius; };

  const double miss_hi = miss(lambda_ref);
  if (!(miss_hi > 0.0)) {
    throw Error(ErrorKind::BracketFailure, "R^" + std::to_string(i) + " at the reference lambda " +
                                               std::to_string(lambda_ref) + " does not exceed R");
  }
  double lo = lambda_ref;
  double miss_lo = miss_hi;
  double hi = lambda_ref;
  while (miss_lo > 0.0) {
    hi = lo;
    lo *= 0.5;
    if (lo < options.lambda_floor) {
      throw Error(ErrorKind::BracketFailure, "R^" + std::to_string(i) + " stays above R down to the lambda floor");
    }
    miss_lo = miss(lo);
  }
  LambdaTarget target;
  target.dimension = dimension;
  target.index_i = i;
  target.radius = radius;
  target.bracket_lo = lo;
  target.bracket_hi = hi;
  const double miss_at_hi = hi == lambda_ref ? miss_hi : miss(hi);
  double a = lo;
  double b = hi;
  double fa = miss_lo;
  double fb = miss_at_hi;
  // Brent narrows the bracket; bisection finishes when Brent stalls.
  double root = roots::brent(miss, a, b, fa, fb, 1e-15 * b);
  double residual = miss(root);
  for (int it = 0; it < 200 && std::abs(residual) >= options.residual_tol; ++it) {
    if ((residual < 0.0) == (fa < 0.0)) {
      a = root;
      fa = residual;
    } else {
      b = root;
      fb = residual;
    }
    root = 0.5 * (a + b);
    if (root <= a || root >= b) break;
    residual = miss(root);
  }
  target.lambda_i = root;
  target.residual = std::abs(residual);
  return target;
}

double r_of(const ProblemParams& params, double gamma, std::size_t i, const WindowOptions& options) {
  if (i == 0) throw Error(ErrorKind::ValidationError, "critical radius index starts at 1");
  double window = options.r_window;
  for (std::size_t k = 0; k <= options.max_doublings; ++k, window *= 2.0) {
    const auto profile = shoot_regular(params, gamma, window);
    const auto radii = profile.critical_radii(window);
    if (radii.size() >= i) return radii[i - 1];
  }
  throw Error(ErrorKind::NotEnoughCriticalPoints, "fewer than " + std::to_string(i) +
                                                      " critical radii of u(., gamma) up to r = " +
                                                      std::to_string(window / 2.0));
}

BranchSample branch_solve(int dimension, double radius, std::size_t i, double gamma,
                          std::pair<double, double> bracket, const BranchOptions& options) {
  auto miss = [&](double lambda) {
    return r_of(ProblemParams::make(dimension, lambda), gamma, i, options.window) - radius;
  };
  double a = std::min(bracket.first, bracket.second);
  double b = std::max(bracket.first, bracket.second);
  std::vector<Probe> probes;
  const std::size_t n = std::max<std::size_t>(options.probes, 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double lambda = a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
    probes.push_back({lambda, miss(lambda)});
  }
  std::size_t changes = 0;
  std::size_t where = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if ((probes[k].miss < 0.0) != (probes[k + 1].miss < 0.0)) {
      ++changes;
      where = k;
    }
  }
  if (changes == 0) {
    throw Error(ErrorKind::NoRootInBracket, "no sign change of r^i - R in [" + std::to_string(a) + ", " +
                                                std::to_string(b) + "] at gamma = " + std::to_string(gamma));
  }
  if (changes > 1) {
    throw Error(ErrorKind::MultipleRoots, std::to_string(changes) + " sign changes of r^i - R at gamma = " +
                                              std::to_string(gamma));
  }
  a = probes[where].lambda;
  b = probes[where + 1].lambda;
  double fa = probes[where].miss;
  double fb = probes[where + 1].miss;
  double root = roots::brent(miss, a, b, fa, fb, 1e-15 * b);
  double residual = miss(root);
  for (int it = 0; it < 200 && std::abs(residual) >= options.residual_tol; ++it) {
    if ((residual < 0.0) == (fa < 0.0)) {
      a = root;
      fa = residual;
    } else {
      b = root;
      fb = residual;
    }
    root = 0.5 * (a + b);
    if (root <= a || root >= b) break;
    residual = miss(root);
  }
  return {gamma, root, i, std::abs(residual)};
}

std::size_t count_sign_changes(const std::vector<double>& values, double centre, double dead_band) {
  std::size_t changes = 0;
  int last = 0;
  for (double v : values) {
    const double d = v - centre;
    if (std::abs(d) <= dead_band) continue;
    const int s = d > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

BranchTrace branch_trace(int dimension, double radius, std::size_t i, double lambda_i,
                         const std::vector<double>& gammas, const TraceOptions& options) {
  BranchTrace trace;
  trace.lambda_i = lambda_i;
  std::vector<double> order(gammas);
  std::sort(order.begin(), order.end(), std::greater<>());
  double centre = lambda_i;
  const double cap = 1.0 / std::numbers::e;
  for (double gamma : order) {
    double width = options.relative_width;
    bool done = false;
    for (std::size_t w = 0; w <= options.max_widenings && !done; ++w, width *= 2.0) {
      const double a = centre / (1.0 + width);
      const double b = std::min(centre * (1.0 + width), cap);
      try {
        trace.samples.push_back(branch_solve(dimension, radius, i, gamma, {a, b}, options.solve));
        done = true;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::MultipleRoots) {
          // Both sides of a fold are inside: narrow the bracket instead.
          width *= 0.25;
        } else if (e.kind() != ErrorKind::NoRootInBracket) {
          throw;
        }
      }
    }
    if (done) {
      centre = trace.samples.back().lambda;
    } else {
      trace.unsolved.push_back(gamma);
    }
  }
  std::reverse(trace.samples.begin(), trace.samples.end());
  std::reverse(trace.unsolved.begin(), trace.unsolved.end());
  std::vector<double> lambdas;
  for (const auto& s : trace.samples) lambdas.push_back(s.lambda);
  trace.sign_changes = count_sign_changes(lambdas, lambda_i, options.dead_band);
  return trace;
}

std::vector<MuPoint> export_mu_plane(const std::vector<BranchSample>& trace) {
  std::vector<MuPoint> out;
  for (const auto& s : trace) {
    const double mu = mu_lambda_bridge(s.lambda, BridgeDirection::lambda_to_mu);
    out.push_back({mu, s.gamma / mu});
  }
  return out;
}

std::size_t regular_crossing_count(const ProblemParams& params, double gamma, double radius) {
  const double level = solve_equilibria(params.lambda).u_upper;
  const auto profile = shoot_regular(params, gamma, radius);
  const auto radii = profile.crossing_radii(level, radius);
  return static_cast<std::size_t>(std::count_if(radii.begin(), radii.end(), [radius](double r) { return r < radius; }));
}

}  // namespace kslab
