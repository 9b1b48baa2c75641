#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "kslab/equilibria.hpp"
#include "kslab/shooting.hpp"

namespace kslab {

struct WindowOptions {
  /// Initial outer radius of the search window.
  double r_window = 10.0;
  /// The window doubles at most this many times.
  std::size_t max_doublings = 10;
};

/// i-th critical radius (1-based) of the singular solution U*_lambda. The
/// window doubles until i critical radii are found; NotEnoughCriticalPoints
/// once the cap is reached.
double R_of_lambda(int dimension, std::size_t i, double lambda, const WindowOptions& options = {});

/// Smallest i with R^i > R at lambda_ref.
std::size_t i_star(int dimension, double radius, double lambda_ref, const WindowOptions& options = {});

struct LambdaTarget {
  int dimension = 3;
  std::size_t index_i = 0;
  double lambda_i = 0.0;
  double radius = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;
};

struct LambdaSearchOptions {
  /// Reference lambda; 0 selects lambda_star(N)/2.
  double lambda_ref = 0.0;
  double lambda_floor = 1e-300;
  double residual_tol = 1e-9;
  WindowOptions window{};
};

/// Solves R^i_lambda = R on (0, lambda_ref]: R^i at lambda_ref must exceed R
/// and the lower end is shrunk geometrically until R^i drops below R. Throws
/// BracketFailure if either side cannot be established.
LambdaTarget find_lambda_i(int dimension, double radius, std::size_t i,
                           const LambdaSearchOptions& options = {});

/// i-th critical radius of the regular solution u(., gamma).
double r_of(const ProblemParams& params, double gamma, std::size_t i,
            const WindowOptions& options = {.r_window = 4.0, .max_doublings = 10});

struct BranchSample {
  double gamma = 0.0;
  double lambda = 0.0;
  std::size_t index_i = 0;
  double residual = 0.0;
};

struct BranchOptions {
  double residual_tol = 1e-9;
  /// Interior probes used to detect a second sign change in the bracket.
  std::size_t probes = 8;
  WindowOptions window{.r_window = 4.0, .max_doublings = 10};
};

/// Root of lambda -> r^i_{lambda, gamma} - R in [lambda_a, lambda_b]. Throws
/// NoRootInBracket without a sign change and MultipleRoots when the probes
/// find more than one.
BranchSample branch_solve(int dimension, double radius, std::size_t i, double gamma,
                          std::pair<double, double> bracket, const BranchOptions& options = {});

struct BranchTrace {
  /// Solved samples, ascending in gamma.
  std::vector<BranchSample> samples;
  /// Grid values where no root was found near the continuation.
  std::vector<double> unsolved;
  double lambda_i = 0.0;
  /// Strict sign changes of lambda(gamma) - lambda_i outside the dead-band.
  std::size_t sign_changes = 0;
};

struct TraceOptions {
  BranchOptions solve{};
  /// Initial bracket [c/(1+w), c(1+w)] around the centre c.
  double relative_width = 0.02;
  std::size_t max_widenings = 12;
  double dead_band = 1e-10;
};

/// Continuation in gamma from the largest grid value down, where the branch
/// is known to sit near lambda_i: each solve is bracketed around the previous
/// lambda (starting at lambda_i), the width doubling on failure. Grid values
/// without a root stay in `unsolved` and do not move the centre.
BranchTrace branch_trace(int dimension, double radius, std::size_t i, double lambda_i,
                         const std::vector<double>& gammas, const TraceOptions& options = {});

/// Sign changes of values - centre, ignoring |values - centre| <= dead_band.
std::size_t count_sign_changes(const std::vector<double>& values, double centre, double dead_band);

struct MuPoint {
  double mu;
  double u0;
};

/// mu = u_upper(lambda) and u(0) = gamma / mu for every sample.
std::vector<MuPoint> export_mu_plane(const std::vector<BranchSample>& trace);

/// Crossings of u(., gamma) with u_upper in (0, R).
std::size_t regular_crossing_count(const ProblemParams& params, double gamma, double radius);

}  // namespace kslab
