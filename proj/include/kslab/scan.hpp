#pragma once

#include <functional>
#include <vector>

#include "kslab/ode.hpp"

namespace kslab::scan {

struct Root {
  double x;
  double slope;
};

using NodeFn = std::function<double(const ode::Node&)>;
using SpacingFn = std::function<double(double x)>;

/// Zeros of value(node) along the dense output of `traj` in [x_lo, x_hi].
/// Each segment is sampled at spacing <= max_dx(x); sign changes are refined
/// by Brent's method on the segment interpolant to `xtol`. `slope` is
/// evaluated at every refined root.
std::vector<Root> trajectory_roots(const ode::Trajectory& traj, const NodeFn& value,
                                   const NodeFn& slope, double x_lo, double x_hi,
                                   const SpacingFn& max_dx, double xtol);

/// Zeros of linearly interpolated samples (x_i, f_i): sign changes refined by
/// the secant through the bracketing pair.
std::vector<double> sample_roots(const std::vector<double>& x, const std::vector<double>& f);

}  // namespace kslab::scan
