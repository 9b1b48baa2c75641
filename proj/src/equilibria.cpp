#include "kslab/equilibria.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kslab/errors.hpp"
#include "kslab/roots.hpp"

namespace kslab {

namespace {

constexpr double kInvE = 1.0 / std::numbers::e;

void require_dimension(int dimension) {
  if (dimension < 3) {
    throw Error(ErrorKind::UnsupportedDimension,
                "dimension must be >= 3, got " + std::to_string(dimension));
  }
}

}  // namespace

ProblemParams ProblemParams::make(int dimension, double lambda) {
  require_dimension(dimension);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::ValidationError, "lambda must be positive, got " + std::to_string(lambda));
  }
  return ProblemParams{dimension, lambda};
}

EquilibriumPair solve_equilibria(double lambda, double tol) {
  if (!(lambda > 0.0)) {
    throw Error(ErrorKind::ValidationError, "lambda must be positive");
  }
  if (std::abs(lambda - kInvE) < 1e-14) return {1.0, 1.0};
  if (lambda > kInvE) {
    throw Error(ErrorKind::NoEquilibrium,
                "lambda = " + std::to_string(lambda) + " exceeds 1/e; no constant solution");
  }
  // ln(lambda) + u - ln(u) vanishes exactly at the roots, is decreasing on
  // (0, 1) and increasing on (1, inf); the log form never overflows.
  const double log_lambda = std::log(lambda);
  auto h = [&](double u) { return log_lambda + u - std::log(u); };

  // lambda e^u - u = u (e^{h(u)} - 1), evaluated without overflow.
  auto residual = [&](double u) { return u * std::expm1(h(u)); };

  const double tiny = std::numeric_limits<double>::min();
  const double lower = roots::bisect(residual, tiny, 1.0, 0.0, tol);
  double cap = 50.0;
  while (h(cap) < 0.0) cap *= 2.0;
  const double upper = roots::bisect(residual, 1.0, cap, 0.0, tol);
  return {lower, upper};
}

double lambda_star(int dimension) {
  require_dimension(dimension);
  switch (dimension) {
    case 3: return 0.16;
    case 4: return 0.35;
    case 5: return 0.36;
    default: return kInvE;
  }
}

double pohozaev_f(int dimension, double u_lower, double x) {
  const double n = dimension;
  const double em1 = std::expm1(x);
  return x * x - u_lower * (n * (em1 - x) - 0.5 * (n - 2.0) * x * em1);
}

double pohozaev_f_prime(int dimension, double u_lower, double x) {
  const double n = dimension;
  const double ex = std::exp(x);
  // d/dx [N(e^x - 1 - x) - (N-2)/2 x(e^x - 1)] = N(e^x - 1) - (N-2)/2 (e^x - 1 + x e^x)
  return 2.0 * x - u_lower * (n * std::expm1(x) - 0.5 * (n - 2.0) * (std::expm1(x) + x * ex));
}

double pohozaev_f_second(int dimension, double u_lower, double x) {
  const double n = dimension;
  const double ex = std::exp(x);
  return 2.0 - u_lower * (2.0 * ex - 0.5 * (n - 2.0) * x * ex);
}

double pohozaev_threshold(int dimension) {
  require_dimension(dimension);
  if (dimension >= 6) {
    throw Error(ErrorKind::NotApplicable,
                "f'' > 0 holds for every u_lower < 1 when N >= 6");
  }
  const double n = dimension;
  return 4.0 / (n - 2.0) * std::exp(-(6.0 - n) / (n - 2.0));
}

double pohozaev_f_second_argmin(int dimension) {
  require_dimension(dimension);
  if (dimension >= 6) return 0.0;
  const double n = dimension;
  return (6.0 - n) / (n - 2.0);
}

double mu_lambda_bridge(double value, BridgeDirection direction) {
  if (!(value > 0.0)) {
    throw Error(ErrorKind::ValidationError, "bridge input must be positive");
  }
  if (direction == BridgeDirection::mu_to_lambda) return value * std::exp(-value);
  return solve_equilibria(value).u_upper;
}

}  // namespace kslab
