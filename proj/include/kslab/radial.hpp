#pragma once

#include <cmath>
#include <vector>

#include "kslab/ode.hpp"

namespace kslab {

/// Radial sample (r, u, u', u'').
struct RadialPoint {
  double r;
  double u;
  double u_prime;
  double u_second;
};

/// Right-hand side of -u'' - (N-1)/r u' + u = lambda e^u in t = ln r:
///   u_tt = -(N-2) u_t + e^{2t} u - e^{2t + u + ln lambda}.
/// The exponent is assembled before exponentiation, so large u does not
/// overflow unless the product itself does.
inline double log_radial_rhs(double alpha, double log_lambda, double t, double u, double ut) {
  return -alpha * ut + std::exp(2.0 * t) * u - std::exp(2.0 * t + u + log_lambda);
}

/// Converts a node of a trajectory in t = ln r to radial derivatives.
inline RadialPoint to_radial(const ode::Node& n) {
  const double r = std::exp(n.x);
  return {r, n.y, n.dy / r, (n.d2y - n.dy) / (r * r)};
}

/// Residual -u'' - (N-1)/r u' + u - lambda e^u.
inline double radial_residual(int dimension, double lambda, const RadialPoint& p) {
  return -p.u_second - (dimension - 1.0) / p.r * p.u_prime + p.u - lambda * std::exp(p.u);
}

/// Samples of a profile, with helpers shared by the diagnostics.
struct RadialSamples {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> u_prime;
};

}  // namespace kslab
