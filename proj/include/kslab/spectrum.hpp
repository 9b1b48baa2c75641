#pragma once

#include <cstddef>
#include <vector>

#include "kslab/radial.hpp"
#include "kslab/singular.hpp"

namespace kslab {

/// First k eigenvalues of -phi'' - (N-1)/r phi' + phi = Lambda phi on (0, R)
/// with phi'(0) = phi'(R) = 0. The first is 1 (constant eigenfunction); the
/// i-th is the infimum of Lambda for which phi' has i - 1 zeros in (0, R),
/// located by bisection on that count.
std::vector<double> neumann_radial_eigs(int dimension, double radius, std::size_t k);

/// Shot eigenfunction for a given Lambda, normalised by phi(0) = 1, sampled
/// at `count` uniform radii on [0, R] (u holds phi, u_prime holds phi').
RadialSamples neumann_eigenfunction(int dimension, double radius, double eigenvalue,
                                    std::size_t count);

/// Quadratic form
///   J(f) = int (f'^2 + (1 - lambda e^{U*}) f^2) r^{N-1} dr
/// on [eps, R], discretised with P1 elements on a uniform grid in t = ln r,
/// f(eps) = 0 and f(R) free. In t the form reads
///   int (f_t^2 e^{(N-2)t} + (1 - lambda e^{U*}) f^2 e^{Nt}) dt.
struct DiscretizedForm {
  int dimension = 3;
  double lambda = 0.0;
  double inner_cutoff = 0.0;
  double outer_radius = 0.0;
  /// Number of elements; the unknowns are the nodes 1..node_count.
  std::size_t node_count = 0;
  double step = 0.0;
  /// lambda e^{U*(r)} - 1 at the grid nodes 0..node_count.
  std::vector<double> potential;
  /// Tridiagonal stiffness-plus-potential matrix on the free nodes.
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;

  double node_radius(std::size_t i) const;
};

/// Throws ProfileCoverage when [eps, R] is not inside the profile window.
/// `zero_potential` sets lambda e^{U*} - 1 to 0, leaving the stiffness part.
DiscretizedForm assemble_form(const SingularProfile& profile, double eps, double radius,
                              std::size_t elements, bool zero_potential = false);

struct InertiaResult {
  std::size_t negative_count = 0;
  double cutoff = 0.0;
  std::size_t node_count = 0;
  /// An exactly zero pivot was replaced by a tiny positive one.
  bool pivot_perturbed = false;
};

/// Number of negative pivots of the LDL^T factorisation of the assembled
/// matrix, which equals its number of negative eigenvalues.
InertiaResult negative_count(const DiscretizedForm& form);

struct RefinedInertia {
  InertiaResult result;
  /// Counts along the doubling sequence, coarsest first.
  std::vector<std::size_t> history;
  std::vector<std::size_t> elements;
  bool converged = false;
};

struct RefineOptions {
  /// Initial elements per unit length in t.
  double elements_per_unit = 32.0;
  /// The count must agree on this many consecutive doublings.
  std::size_t stable_doublings = 3;
  std::size_t max_elements = 1u << 20;
};

/// Doubles the grid until the count is unchanged across
/// `stable_doublings` successive doublings.
RefinedInertia negative_count_refined(const SingularProfile& profile, double eps, double radius,
                                      const RefineOptions& options = {});

struct MorseRung {
  double epsilon;
  std::size_t elements;
  std::size_t negative_count;
  bool converged;
};

/// Refined negative counts along a ladder of cutoffs. Throws
/// UnsupportedBorderline for N = 10.
std::vector<MorseRung> morse_ladder(const SingularProfile& profile, double radius,
                                    const std::vector<double>& cutoffs,
                                    const RefineOptions& options = {});

/// Sampled radial test function on a log-uniform grid.
struct TestFunction {
  std::vector<double> r;
  std::vector<double> f;
  std::vector<double> f_prime;
};

/// r_j = e^{-2 pi j / eps0}.
double hardy_radius(std::size_t j, double eps0);

/// f_j(r) = r^{-(N-2)/2} sin(eps0 ln r / 2) on [r_{j+1}, r_j], which solves
///   f'' + (N-1)/r f' + ((N-2)^2/4 + eps0^2/4)/r^2 f = 0
/// and vanishes at both ends. Requires 3 <= N <= 9.
TestFunction hardy_test_function(std::size_t j, double eps0, int dimension,
                                 std::size_t samples = 4001);

/// Largest eps0 with lambda e^{U*} - 1 >= ((N-2)^2/4 + eps0^2)/r^2 at every
/// profile node with r <= r_cut (default: the profile's r0). Throws
/// NotApplicable when no positive eps0 exists there.
double hardy_eps0(const SingularProfile& profile, double r_cut = 0.0);

/// J(f) by composite Simpson in t = ln r on the samples of f.
double evaluate_J(const TestFunction& f, const SingularProfile& profile);

/// int f^2 r^{N-1-2p} dr in t; p = 0 gives the L2 mass, p = 1 the Hardy weight.
double weighted_mass(const TestFunction& f, int dimension, int power);

}  // namespace kslab
