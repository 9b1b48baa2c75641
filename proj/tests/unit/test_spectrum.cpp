#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "kslab/errors.hpp"
#include "kslab/spectrum.hpp"

using namespace kslab;

namespace {

void expect_kind(const std::function<void()>& f, ErrorKind kind) {
  try {
    f();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == kind);
  }
}

// k-th positive root of tan x = x by bisection on (k pi, k pi + pi/2).
double tan_root(int k) {
  double a = k * std::numbers::pi + 1e-12;
  double b = k * std::numbers::pi + 0.5 * std::numbers::pi - 1e-12;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    (std::tan(m) - m < 0.0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

const SingularProfile& profile3() {
  static const SingularProfile p = singular_profile(3, 0.1, 2.0);
  return p;
}

const SingularProfile& profile11() {
  static const SingularProfile p = singular_profile(11, 0.1, 2.0);
  return p;
}

}  // namespace

TEST_CASE("Neumann eigenvalues of the ball in three dimensions") {
  // For N = 3 the radial eigenfunctions are sin(kr)/r with tan(kR) = kR.
  const auto ev = neumann_radial_eigs(3, 1.0, 4);
  REQUIRE(ev.size() == 4);
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (int k = 1; k < 4; ++k) {
    const double x = tan_root(k);
    CHECK(ev[k] == doctest::Approx(1.0 + x * x).epsilon(1e-9));
  }
  CHECK(ev[1] == doctest::Approx(21.19072855643).epsilon(1e-11));
}

TEST_CASE("Neumann eigenvalues scale with the radius") {
  for (int n : {3, 5}) {
    const auto a = neumann_radial_eigs(n, 1.0, 3);
    const auto b = neumann_radial_eigs(n, 2.0, 3);
    for (std::size_t i = 1; i < 3; ++i) CHECK((b[i] - 1.0) * 4.0 == doctest::Approx(a[i] - 1.0).epsilon(1e-8));
  }
}

TEST_CASE("Neumann eigenfunctions have i-1 nodal zeros") {
  const auto ev = neumann_radial_eigs(4, 1.0, 4);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const auto s = neumann_eigenfunction(4, 1.0, ev[i], 2001);
    std::size_t changes = 0;
    for (std::size_t k = 0; k + 1 < s.u.size(); ++k) {
      if ((s.u[k] < 0.0) != (s.u[k + 1] < 0.0)) ++changes;
    }
    CHECK(changes == i);
    CHECK(std::abs(s.u_prime.back()) < 1e-9 * (1.0 + ev[i]));
  }
}

TEST_CASE("stiffness alone has no negative direction") {
  const auto form = assemble_form(profile3(), 1e-3, 1.0, 400, true);
  CHECK(negative_count(form).negative_count == 0);
}

TEST_CASE("assembled form is symmetric positive on the stiffness part") {
  const auto form = assemble_form(profile3(), 1e-2, 1.0, 64, true);
  REQUIRE(form.diagonal.size() == form.node_count);
  REQUIRE(form.off_diagonal.size() + 1 == form.node_count);
  for (double d : form.diagonal) CHECK(d > 0.0);
  for (double o : form.off_diagonal) CHECK(o < 0.0);
  CHECK(form.node_radius(0) == doctest::Approx(1e-2));
  CHECK(form.node_radius(form.node_count) == doctest::Approx(1.0));
}

TEST_CASE("negative count is stable under refinement") {
  const auto r = negative_count_refined(profile3(), 1e-3, 1.0);
  CHECK(r.converged);
  REQUIRE(r.history.size() >= 4);
  for (std::size_t k = r.history.size() - 4; k < r.history.size(); ++k) CHECK(r.history[k] == r.result.negative_count);
  for (std::size_t k = 1; k < r.elements.size(); ++k) CHECK(r.elements[k] == 2 * r.elements[k - 1]);
}

TEST_CASE("Morse index grows without bound below dimension ten") {
  const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  const auto ladder = morse_ladder(profile3(), 1.0, eps);
  REQUIRE(ladder.size() == eps.size());
  for (std::size_t k = 0; k < ladder.size(); ++k) CHECK(ladder[k].converged);
  for (std::size_t k = 1; k < ladder.size(); ++k) CHECK(ladder[k].negative_count > ladder[k - 1].negative_count);
}

TEST_CASE("Morse index stays bounded above dimension ten") {
  const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  const auto ladder = morse_ladder(profile11(), 1.0, eps);
  for (const auto& rung : ladder) {
    CHECK(rung.converged);
    CHECK(rung.negative_count == ladder.front().negative_count);
  }
}

TEST_CASE("dimension ten is refused by the Morse ladder") {
  const auto p = singular_profile(10, 0.1, 2.0);
  expect_kind([&] { morse_ladder(p, 1.0, {1e-2}); }, ErrorKind::UnsupportedBorderline);
}

TEST_CASE("uncovered window is rejected") {
  expect_kind([] { assemble_form(profile3(), 1e-3, 5.0, 100); }, ErrorKind::ProfileCoverage);
}

TEST_CASE("Hardy test functions") {
  const double eps0 = hardy_eps0(profile3());
  CHECK(eps0 > 1.0);
  CHECK(eps0 < std::sqrt(7.0) / 2.0 + 1e-6);
  for (std::size_t j = 1; j <= 3; ++j) {
    const auto f = hardy_test_function(j, eps0, 3);
    CHECK(f.r.front() == doctest::Approx(hardy_radius(j + 1, eps0)).epsilon(1e-12));
    CHECK(f.r.back() == doctest::Approx(hardy_radius(j, eps0)).epsilon(1e-12));
    double scale = 0.0;
    for (double v : f.f) scale = std::max(scale, std::abs(v));
    CHECK(std::abs(f.f.front()) < 1e-12 * scale);
    CHECK(std::abs(f.f.back()) < 1e-12 * scale);

    // In t = ln r, f = e^{-a t/2} sin(b t) with a = N-2, b = eps0/2, and
    // f_tt + a f_t + (a^2/4 + b^2) f = 0.
    const double a = 1.0;
    const double b = 0.5 * eps0;
    double worst = 0.0;
    for (std::size_t k = 0; k < f.r.size(); k += 50) {
      const double t = std::log(f.r[k]);
      const double e = std::exp(-0.5 * a * t);
      const double ft = f.r[k] * f.f_prime[k];
      const double ftt = e * ((0.25 * a * a - b * b) * std::sin(b * t) - a * b * std::cos(b * t));
      const double res = ftt + a * ft + (0.25 * a * a + b * b) * f.f[k];
      worst = std::max(worst, std::abs(res) / (e * (1.0 + a * a + b * b)));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("Hardy supports are disjoint") {
  const double eps0 = hardy_eps0(profile3());
  for (std::size_t j = 1; j <= 4; ++j) CHECK(hardy_radius(j + 1, eps0) < hardy_radius(j, eps0));
  const auto f1 = hardy_test_function(1, eps0, 3);
  const auto f2 = hardy_test_function(2, eps0, 3);
  CHECK(f2.r.back() <= f1.r.front() * (1.0 + 1e-12));
}

TEST_CASE("potential dominates the Hardy constant near the origin") {
  const auto& p = profile3();
  const double eps0 = hardy_eps0(p);
  for (double r : {1e-8, 1e-5, 1e-3, 0.5 * p.r0()}) {
    const double pot = 0.1 * std::exp(p.eval(r).u) - 1.0;
    CHECK(pot * r * r >= (0.25 + eps0 * eps0) * (1.0 - 1e-6));
  }
}

TEST_CASE("J is negative on the Hardy functions and below the weighted bound") {
  const auto& p = profile3();
  const double eps0 = hardy_eps0(p);
  for (std::size_t j = 1; j <= 3; ++j) {
    if (hardy_radius(j, eps0) > p.r0()) continue;
    const auto f = hardy_test_function(j, eps0, 3);
    const double J = evaluate_J(f, p);
    const double bound = -0.75 * eps0 * eps0 * weighted_mass(f, 3, 1) + weighted_mass(f, 3, 0);
    CHECK(J < 0.0);
    CHECK(J <= bound + 1e-9 * std::abs(bound));
  }
}

TEST_CASE("Hardy functions outside their dimension range") {
  expect_kind([] { hardy_test_function(1, 1.0, 10); }, ErrorKind::NotApplicable);
  expect_kind([] { hardy_test_function(1, 1.0, 2); }, ErrorKind::NotApplicable);
}

TEST_CASE("potential near the origin against the borderline constants") {
  const double delta = 0.1;
  const auto& p3 = profile3();
  for (const auto& n : p3.nodes()) {
    if (n.r >= 1e-3) break;
    CHECK((0.1 * std::exp(n.u) - 1.0) * n.r * n.r >= 2.0 * (1.0 - delta));
  }
  const auto& p11 = profile11();
  for (const auto& n : p11.nodes()) {
    if (n.r >= 1e-3) break;
    CHECK((0.1 * std::exp(n.u) - 1.0) * n.r * n.r <= 81.0 / 4.0);
  }
}

TEST_CASE("Morse counts at the first target lambda") {
  // lambda^1 for N = 3, R = 1.
  const auto p = singular_profile(3, 4.72606065790903e-4, 2.0);
  const auto ladder = morse_ladder(p, 1.0, {1e-1, 1e-2, 1e-3});
  for (std::size_t k = 1; k < ladder.size(); ++k) CHECK(ladder[k].negative_count > ladder[k - 1].negative_count);
}

TEST_CASE("J vanishes on the zero function") {
  auto f = hardy_test_function(1, hardy_eps0(profile3()), 3);
  std::fill(f.f.begin(), f.f.end(), 0.0);
  std::fill(f.f_prime.begin(), f.f_prime.end(), 0.0);
  CHECK(evaluate_J(f, profile3()) == 0.0);
}
