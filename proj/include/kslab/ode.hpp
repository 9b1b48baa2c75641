#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace kslab::ode {

/// Sample of a scalar second-order trajectory y(x) with its first two
/// derivatives.
struct Node {
  double x;
  double y;
  double dy;
  double d2y;
};

/// Piecewise quintic Hermite interpolant through accepted nodes. Each
/// segment matches y, y' and y'' at both ends, so y is C^2 across nodes.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<Node> nodes);

  void push_back(const Node& node);
  /// Appends `other`, dropping its first node when it repeats our last x.
  void append(const Trajectory& other);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }
  double x_front() const { return nodes_.front().x; }
  double x_back() const { return nodes_.back().x; }
  bool contains(double x) const noexcept;

  /// Interpolated node at x; x must lie within [x_front, x_back].
  Node eval(double x) const;
  /// Interpolation restricted to segment k = [nodes[k], nodes[k+1]].
  Node eval_segment(std::size_t k, double x) const;
  /// Index k with nodes[k].x <= x <= nodes[k+1].x.
  std::size_t segment_of(double x) const;

 private:
  std::vector<Node> nodes_;
};

/// Right-hand side y'' = F(x, y, y').
using SecondOrderRhs = std::function<double(double x, double y, double dy)>;

struct IntegratorOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
  double h_init = 1e-3;
  double h_max = std::numeric_limits<double>::infinity();
  /// Steps below h_min_rel * max(1, |x|) count as controller underflow.
  double h_min_rel = 1e-14;
  std::size_t max_steps = 5'000'000;
  /// Optional guard evaluated after every accepted step; returning false
  /// stops integration early (the trajectory keeps the accepted nodes).
  std::function<bool(const Node&)> keep_going;
};

/// Adaptive Dormand-Prince 5(4) integration of y'' = F(x, y, y') from x0 to
/// x1 (x1 > x0). Throws Error(StepUnderflow) when the controller collapses
/// or the state stops being finite.
Trajectory integrate(const SecondOrderRhs& rhs, double x0, double y0, double dy0, double x1,
                     const IntegratorOptions& options = {});

}  // namespace kslab::ode
