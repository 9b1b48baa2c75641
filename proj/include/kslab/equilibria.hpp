#pragma once

namespace kslab {

/// Dimension N and parameter lambda of -u'' - (N-1)/r u' + u = lambda e^u.
struct ProblemParams {
  int dimension = 3;
  double lambda = 0.1;

  /// Validated construction: N >= 3 (UnsupportedDimension) and
  /// lambda > 0 (ValidationError).
  static ProblemParams make(int dimension, double lambda);
};

/// The two constant solutions of u = lambda e^u.
struct EquilibriumPair {
  double u_lower;  ///< in (0, 1]
  double u_upper;  ///< in [1, inf)
};

/// Roots of lambda e^u = u by bisection on [0, 1] and [1, U_cap], the cap
/// growing geometrically from 50. Throws NoEquilibrium for lambda > 1/e.
/// Both roots collapse to 1 when |lambda - 1/e| < 1e-14.
EquilibriumPair solve_equilibria(double lambda, double tol = 1e-13);

/// Threshold lambda*_N below which the singular solution is known to
/// oscillate around u_upper: 0.16, 0.35, 0.36 for N = 3, 4, 5 and 1/e above.
double lambda_star(int dimension);

/// f(x) = x^2 - u_lower (N(e^x - 1 - x) - (N-2)/2 x(e^x - 1)), the
/// integrand of the Pohozaev-type identity that rules out convergence of the
/// singular solution to u_lower.
double pohozaev_f(int dimension, double u_lower, double x);
double pohozaev_f_prime(int dimension, double u_lower, double x);
double pohozaev_f_second(int dimension, double u_lower, double x);

/// Largest u_lower with f'' > 0 on (0, inf): 4/(N-2) e^{-(6-N)/(N-2)}.
/// Defined for 3 <= N <= 5 only; NotApplicable otherwise.
double pohozaev_threshold(int dimension);

/// Minimiser of f'' over x >= 0: (6-N)/(N-2) for N < 6, else 0.
double pohozaev_f_second_argmin(int dimension);

enum class BridgeDirection { mu_to_lambda, lambda_to_mu };

/// Converts between lambda and mu = u_upper of the normalised problem
/// -Lap u + u = e^{mu(u-1)}.
double mu_lambda_bridge(double value, BridgeDirection direction);

}  // namespace kslab
