#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kslab/equilibria.hpp"
#include "kslab/errors.hpp"

using namespace kslab;

namespace {

// Newton on u - lambda e^u in long double, started on the requested side.
long double newton_root(long double lambda, long double start) {
  long double u = start;
  for (int i = 0; i < 200; ++i) {
    const long double f = u - lambda * std::exp(u);
    const long double df = 1.0L - lambda * std::exp(u);
    const long double next = u - f / df;
    if (std::fabs(next - u) < 1e-18L) return next;
    u = next;
  }
  return u;
}

}  // namespace

TEST_CASE("equilibria at lambda = 0.1 match an independent Newton oracle") {
  const auto eq = solve_equilibria(0.1, 1e-13);
  const long double lo = newton_root(0.1L, 0.0L);
  const long double hi = newton_root(0.1L, 6.0L);
  CHECK(eq.u_lower == doctest::Approx(static_cast<double>(lo)).epsilon(1e-12));
  CHECK(eq.u_upper == doctest::Approx(static_cast<double>(hi)).epsilon(1e-12));
  CHECK(eq.u_lower == doctest::Approx(0.11183).epsilon(1e-4));
  CHECK(eq.u_upper == doctest::Approx(3.57715).epsilon(1e-5));
}

TEST_CASE("tangent case and empty case") {
  const auto eq = solve_equilibria(1.0 / std::numbers::e);
  CHECK(eq.u_lower == 1.0);
  CHECK(eq.u_upper == 1.0);
  CHECK_THROWS_AS(solve_equilibria(0.5), Error);
  try {
    solve_equilibria(0.5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoEquilibrium);
  }
}

TEST_CASE("residuals stay below 1e-12 over a sweep of lambda") {
  for (double lambda : {0.36, 0.3, 0.2, 0.1, 0.05, 0.01, 1e-3, 1e-4, 1e-6, 1e-10}) {
    const auto eq = solve_equilibria(lambda, 1e-13);
    CHECK(std::abs(lambda * std::exp(eq.u_lower) - eq.u_lower) < 1e-12);
    CHECK(std::abs(lambda * std::exp(eq.u_upper) - eq.u_upper) < 1e-12 * eq.u_upper);
    CHECK(eq.u_lower < 1.0);
    CHECK(eq.u_upper > 1.0);
  }
}

TEST_CASE("u_upper decreases and u_lower increases with lambda") {
  double prev_hi = INFINITY;
  double prev_lo = 0.0;
  for (double lambda = 1e-6; lambda < 0.36; lambda *= 1.7) {
    const auto eq = solve_equilibria(lambda);
    CHECK(eq.u_upper < prev_hi);
    CHECK(eq.u_lower > prev_lo);
    prev_hi = eq.u_upper;
    prev_lo = eq.u_lower;
  }
}

TEST_CASE("u_upper brackets around -ln lambda for small lambda") {
  for (double lambda : {1e-3, 1e-4, 1e-6, 1e-8}) {
    const double l = -std::log(lambda);
    const double mu = solve_equilibria(lambda).u_upper;
    CHECK(mu >= 0.5 * l);
    if (lambda <= 1e-4) {
      CHECK(mu > l + std::log(l));
      CHECK(mu <= 1.5 * l);
    }
  }
}

TEST_CASE("lambda_star table") {
  CHECK(lambda_star(3) == 0.16);
  CHECK(lambda_star(4) == 0.35);
  CHECK(lambda_star(5) == 0.36);
  CHECK(lambda_star(7) == doctest::Approx(1.0 / std::numbers::e));
  CHECK_THROWS_AS(lambda_star(2), Error);
}

TEST_CASE("table entries are the thresholds truncated to two decimals") {
  for (int n : {3, 4, 5}) {
    const double u = pohozaev_threshold(n);
    const double lambda = u * std::exp(-u);
    CHECK(lambda_star(n) <= lambda);
    CHECK(lambda - lambda_star(n) < 0.01);
  }
  const double l3 = pohozaev_threshold(3) * std::exp(-pohozaev_threshold(3));
  CHECK(l3 == doctest::Approx(0.163).epsilon(1e-3));
}

TEST_CASE("pohozaev thresholds") {
  CHECK(pohozaev_threshold(3) == doctest::Approx(0.19915).epsilon(1e-4));
  CHECK(pohozaev_threshold(4) == doctest::Approx(0.7358).epsilon(1e-3));
  CHECK(pohozaev_threshold(5) == doctest::Approx(0.955).epsilon(1e-3));
  CHECK_THROWS_AS(pohozaev_threshold(6), Error);
}

TEST_CASE("pohozaev f vanishes to second order at 0") {
  for (int n : {3, 5, 8}) {
    CHECK(pohozaev_f(n, 0.3, 0.0) == 0.0);
    CHECK(pohozaev_f_prime(n, 0.3, 0.0) == 0.0);
  }
}

TEST_CASE("pohozaev f against long double direct evaluation") {
  const long double x = 2.0L;
  const long double u = 0.1L;
  const long double n = 3.0L;
  const long double ex = std::exp(x);
  const long double ref = x * x - u * (n * (ex - 1.0L - x) - (n - 2.0L) / 2.0L * x * (ex - 1.0L));
  CHECK(std::abs(pohozaev_f(3, 0.1, 2.0) - static_cast<double>(ref)) < 1e-12);
}

TEST_CASE("pohozaev f'' matches finite differences of f'") {
  const double h = 1e-5;
  for (double x : {0.3, 1.0, 2.5}) {
    const double fd = (pohozaev_f_prime(4, 0.5, x + h) - pohozaev_f_prime(4, 0.5, x - h)) / (2 * h);
    CHECK(pohozaev_f_second(4, 0.5, x) == doctest::Approx(fd).epsilon(1e-7));
    const double fd1 = (pohozaev_f(4, 0.5, x + h) - pohozaev_f(4, 0.5, x - h)) / (2 * h);
    CHECK(pohozaev_f_prime(4, 0.5, x) == doctest::Approx(fd1).epsilon(1e-7));
  }
}

TEST_CASE("f'' minimum location and value") {
  for (int n : {3, 4, 5}) {
    const double x_star = pohozaev_f_second_argmin(n);
    const double h = 1e-4;
    const double at = pohozaev_f_second(n, 0.2, x_star);
    CHECK(at <= pohozaev_f_second(n, 0.2, x_star - h));
    CHECK(at <= pohozaev_f_second(n, 0.2, x_star + h));
    CHECK(x_star == doctest::Approx((6.0 - n) / (n - 2.0)));
  }
  for (int n : {6, 8, 12}) {
    double min_val = INFINITY;
    for (double x = 0.0; x <= 20.0; x += 0.01) min_val = std::min(min_val, pohozaev_f_second(n, 0.4, x));
    CHECK(min_val == doctest::Approx(2.0 * (1.0 - 0.4)));
  }
}

TEST_CASE("f is positive below the threshold") {
  for (int n : {3, 4, 5}) {
    const double u = 0.999 * pohozaev_threshold(n);
    for (double x = 0.01; x <= 20.0; x += 0.01) CHECK(pohozaev_f(n, u, x) > 0.0);
  }
  for (int n : {6, 9}) {
    for (double x = 0.01; x <= 20.0; x += 0.01) CHECK(pohozaev_f(n, 0.95, x) > 0.0);
  }
}

TEST_CASE("mu-lambda bridge") {
  CHECK(mu_lambda_bridge(1.0, BridgeDirection::mu_to_lambda) ==
        doctest::Approx(1.0 / std::numbers::e));
  CHECK(mu_lambda_bridge(0.1, BridgeDirection::lambda_to_mu) == doctest::Approx(3.57715).epsilon(1e-5));
  const double mu = mu_lambda_bridge(1e-4, BridgeDirection::lambda_to_mu);
  CHECK(mu == doctest::Approx(11.66).epsilon(1e-3));
  for (double m : {1.5, 3.0, 8.0, 20.0}) {
    const double lambda = mu_lambda_bridge(m, BridgeDirection::mu_to_lambda);
    CHECK(mu_lambda_bridge(lambda, BridgeDirection::lambda_to_mu) == doctest::Approx(m).epsilon(1e-12));
  }
  CHECK_THROWS_AS(mu_lambda_bridge(0.5, BridgeDirection::lambda_to_mu), Error);
}

TEST_CASE("problem params validation") {
  CHECK_THROWS_AS(ProblemParams::make(2, 0.1), Error);
  CHECK_THROWS_AS(ProblemParams::make(3, -1.0), Error);
  CHECK(ProblemParams::make(3, 0.1).dimension == 3);
}
