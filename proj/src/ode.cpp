#include "kslab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kslab/errors.hpp"

namespace kslab::ode {

Trajectory::Trajectory(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

void Trajectory::push_back(const Node& node) { nodes_.push_back(node); }

void Trajectory::append(const Trajectory& other) {
  auto first = other.nodes_.begin();
  if (!nodes_.empty() && first != other.nodes_.end() && first->x == nodes_.back().x) ++first;
  nodes_.insert(nodes_.end(), first, other.nodes_.end());
}

bool Trajectory::contains(double x) const noexcept {
  return !nodes_.empty() && x >= nodes_.front().x && x <= nodes_.back().x;
}

std::size_t Trajectory::segment_of(double x) const {
  if (nodes_.size() < 2) return 0;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x,
                             [](double v, const Node& n) { return v < n.x; });
  std::size_t k = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
  if (k == 0) return 0;
  return std::min(k - 1, nodes_.size() - 2);
}

Node Trajectory::eval(double x) const {
  if (nodes_.size() == 1) return nodes_.front();
  return eval_segment(segment_of(x), x);
}

Node Trajectory::eval_segment(std::size_t k, double x) const {
  const Node& a = nodes_[k];
  const Node& b = nodes_[k + 1];
  const double h = b.x - a.x;
  const double s = (x - a.x) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double s4 = s3 * s;
  const double s5 = s4 * s;

  // Quintic Hermite basis and its first two derivatives in s.
  const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
  const double h2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
  const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
  const double h5 = 0.5 * (s3 - 2 * s4 + s5);

  const double d0 = -30 * s2 + 60 * s3 - 30 * s4;
  const double d1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
  const double d2 = 0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4);
  const double d4 = -12 * s2 + 28 * s3 - 15 * s4;
  const double d5 = 0.5 * (3 * s2 - 8 * s3 + 5 * s4);

  const double dd0 = -60 * s + 180 * s2 - 120 * s3;
  const double dd1 = -36 * s + 96 * s2 - 60 * s3;
  const double dd2 = 0.5 * (2 - 18 * s + 36 * s2 - 20 * s3);
  const double dd4 = -24 * s + 84 * s2 - 60 * s3;
  const double dd5 = 0.5 * (6 * s - 24 * s2 + 20 * s3);

  const double dy_ab = b.y - a.y;
  Node out;
  out.x = x;
  out.y = a.y + dy_ab * (1.0 - h0) + h * (a.dy * h1 + b.dy * h4) +
          h * h * (a.d2y * h2 + b.d2y * h5);
  out.dy = (-dy_ab * d0) / h + (a.dy * d1 + b.dy * d4) + h * (a.d2y * d2 + b.d2y * d5);
  out.d2y = (-dy_ab * dd0) / (h * h) + (a.dy * dd1 + b.dy * dd4) / h + (a.d2y * dd2 + b.d2y * dd5);
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct State {
  double y;
  double v;
};

}  // namespace

Trajectory integrate(const SecondOrderRhs& rhs, double x0, double y0, double dy0, double x1,
                     const IntegratorOptions& opt) {
  Trajectory traj;
  auto deriv = [&](double x, const State& s) { return State{s.v, rhs(x, s.y, s.v)}; };

  double x = x0;
  State s{y0, dy0};
  State k1 = deriv(x, s);
  traj.push_back({x, s.y, s.v, k1.v});
  if (!(x1 > x0)) return traj;

  double h = std::min({opt.h_init, opt.h_max, x1 - x0});
  std::size_t steps = 0;
  double err_prev = 1e-4;

  while (x < x1) {
    if (++steps > opt.max_steps) {
      throw Error(ErrorKind::StepUnderflow, "step budget exhausted at x = " + std::to_string(x));
    }
    const double h_min = opt.h_min_rel * std::max(1.0, std::abs(x));
    bool last = false;
    if (x + h >= x1 || x1 - (x + h) < h_min) {
      h = x1 - x;
      last = true;
    }
    auto add = [](const State& base, double hh, std::initializer_list<std::pair<double, State>> ks) {
      State out = base;
      for (const auto& [c, k] : ks) {
        out.y += hh * c * k.y;
        out.v += hh * c * k.v;
      }
      return out;
    };
    const State k2 = deriv(x + c2 * h, add(s, h, {{a21, k1}}));
    const State k3 = deriv(x + c3 * h, add(s, h, {{a31, k1}, {a32, k2}}));
    const State k4 = deriv(x + c4 * h, add(s, h, {{a41, k1}, {a42, k2}, {a43, k3}}));
    const State k5 = deriv(x + c5 * h, add(s, h, {{a51, k1}, {a52, k2}, {a53, k3}, {a54, k4}}));
    const State k6 =
        deriv(x + h, add(s, h, {{a61, k1}, {a62, k2}, {a63, k3}, {a64, k4}, {a65, k5}}));
    const State s_new = add(s, h, {{b1, k1}, {b3, k3}, {b4, k4}, {b5, k5}, {b6, k6}});
    const State k7 = deriv(x + h, s_new);

    const double err_y = h * (e1 * k1.y + e3 * k3.y + e4 * k4.y + e5 * k5.y + e6 * k6.y + e7 * k7.y);
    const double err_v = h * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v + e6 * k6.v + e7 * k7.v);
    const double sc_y = opt.atol + opt.rtol * std::max(std::abs(s.y), std::abs(s_new.y));
    const double sc_v = opt.atol + opt.rtol * std::max(std::abs(s.v), std::abs(s_new.v));
    const double err =
        std::sqrt(0.5 * ((err_y / sc_y) * (err_y / sc_y) + (err_v / sc_v) * (err_v / sc_v)));

    const bool finite = std::isfinite(err) && std::isfinite(s_new.y) && std::isfinite(s_new.v) &&
                        std::isfinite(k7.v);
    if (finite && err <= 1.0) {
      x = last ? x1 : x + h;
      s = s_new;
      k1 = k7;
      const Node node{x, s.y, s.v, k1.v};
      traj.push_back(node);
      // PI step-size control (Hairer, Norsett & Wanner).
      const double e = std::max(err, 1e-10);
      double factor = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      factor = std::clamp(factor, 0.2, 5.0);
      err_prev = e;
      h = std::min(h * factor, opt.h_max);
      if (opt.keep_going && !opt.keep_going(node)) break;
      if (last) break;
    } else {
      const double factor = finite ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.25;
      h *= factor;
      if (h < h_min) {
        throw Error(ErrorKind::StepUnderflow,
                    "step size underflow at x = " + std::to_string(x));
      }
    }
  }
  return traj;
}

}  // namespace kslab::ode
