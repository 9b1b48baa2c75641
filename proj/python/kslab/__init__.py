"""Radial solutions of -u'' - (N-1)/r u' + u = lambda e^u."""

from ._kslab import (
    KslabError,
    branch_trace,
    critical_radius,
    find_lambda_i,
    i_star,
    lambda_from_mu,
    lambda_star,
    morse_counts,
    mu_from_lambda,
    neumann_radial_eigs,
    normalize_config,
    regular_critical_radii,
    singular_profile,
    solve_equilibria,
)

__all__ = [
    "KslabError",
    "branch_trace",
    "critical_radius",
    "find_lambda_i",
    "i_star",
    "lambda_from_mu",
    "lambda_star",
    "morse_counts",
    "mu_from_lambda",
    "neumann_radial_eigs",
    "normalize_config",
    "regular_critical_radii",
    "singular_profile",
    "solve_equilibria",
]
