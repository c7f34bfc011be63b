"""Operator calculus for the clamped-sector problem.

Thin wrapper over the compiled ``_core`` module; arrays are numpy, complex
values are Python ``complex``.
"""

from ._core import (
    ConvergenceError,
    DomainError,
    Error,
    Field,
    Inverter,
    NearSpectrumError,
    ProblemParams,
    Root,
    acceptance,
    angular_eigenvalues,
    apply_full,
    apply_sum,
    check_separation,
    count_roots,
    dense_oracle,
    estimate_epsilon0,
    estimate_rho0,
    field_corpus,
    find_roots,
    gamma_reflection,
    in_sigma_L1,
    in_sigma_nu,
    manufactured,
    multiplier,
    parse_config,
    reconstruct_u,
    reference_tau,
    regularity,
    resolve_A,
    resolve_L1,
    solve_A_at_zero,
    solve_full,
    sup_bounds,
    x_norm,
    xi_dm_dxi,
    xi_times_mprime,
)

__all__ = [name for name in dir() if not name.startswith("_")]
