#include "kslab/scan.hpp"

#include <algorithm>
#include <cmath>

#include "kslab/roots.hpp"

namespace kslab::scan {

std::vector<Root> trajectory_roots(const ode::Trajectory& traj, const NodeFn& value,
                                   const NodeFn& slope, double x_lo, double x_hi,
                                   const SpacingFn& max_dx, double xtol) {
  std::vector<Root> out;
  if (traj.size() < 2) return out;
  x_lo = std::max(x_lo, traj.x_front());
  x_hi = std::min(x_hi, traj.x_back());
  if (!(x_hi > x_lo)) return out;

  const std::size_t k_first = traj.segment_of(x_lo);
  const std::size_t k_last = traj.segment_of(x_hi);
  double x_prev = x_lo;
  double f_prev = value(traj.eval_segment(k_first, x_lo));
  if (f_prev == 0.0) out.push_back({x_lo, slope(traj.eval_segment(k_first, x_lo))});

  for (std::size_t k = k_first; k <= k_last; ++k) {
    const double a = std::max(traj.nodes()[k].x, x_lo);
    const double b = std::min(traj.nodes()[k + 1].x, x_hi);
    if (!(b > a)) continue;
    const double dx = max_dx(a);
    const auto pieces =
        static_cast<std::size_t>(std::clamp(std::ceil((b - a) / dx), 1.0, 100000.0));
    auto f_at = [&](double x) { return value(traj.eval_segment(k, x)); };
    for (std::size_t j = 1; j <= pieces; ++j) {
      const double x = j == pieces ? b : a + (b - a) * static_cast<double>(j) / pieces;
      const double f = f_at(x);
      if (f == 0.0) {
        out.push_back({x, slope(traj.eval_segment(k, x))});
      } else if (f_prev != 0.0 && (f < 0.0) != (f_prev < 0.0)) {
        // x_prev is either an earlier sample of segment k or its left node.
        const double root = roots::brent(f_at, x_prev, x, f_prev, f, xtol);
        out.push_back({root, slope(traj.eval_segment(k, root))});
      }
      x_prev = x;
      f_prev = f;
    }
  }
  return out;
}

std::vector<double> sample_roots(const std::vector<double>& x, const std::vector<double>& f) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (f[i] == 0.0) {
      out.push_back(x[i]);
    } else if (f[i + 1] != 0.0 && (f[i] < 0.0) != (f[i + 1] < 0.0)) {
      out.push_back(x[i] - f[i] * (x[i + 1] - x[i]) / (f[i + 1] - f[i]));
    }
  }
  if (!f.empty() && f.back() == 0.0) out.push_back(x.back());
  return out;
}

}  // namespace kslab::scan
