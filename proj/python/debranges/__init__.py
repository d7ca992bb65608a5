"""Reproducing kernels and structure functions of spaces of entire functions with imposed zeros."""

from ._core import (
    CheckReport,
    DomainError,
    Error,
    GramSystem,
    InvalidScheduleError,
    LinearDependenceError,
    PoleError,
    SigmaStructureFunction,
    StructureFunction,
    UnsupportedOrderError,
    Which,
    ZeroSequence,
    canonicalize,
    check_ids,
    derive,
    derive_iterative,
    eval_E,
    eval_E_star,
    gamma,
    hb_margin,
    kernel,
    kernel_mixed_partial,
    run_config,
    run_default_suite,
    sigma_kernel,
    sigma_kernel_det,
    solve_beta,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
