"""Exact simulation of negative-measurement binary state discrimination."""

from ._core import *  # noqa: F401,F403
from ._core import (
    AccountingMode,
    DegenerateBranchError,
    HamiltonianSpec,
    NumericalError,
    ProtocolParams,
    ValidationError,
)

__all__ = [
    "AccountingMode",
    "DegenerateBranchError",
    "HamiltonianSpec",
    "NumericalError",
    "ProtocolParams",
    "ValidationError",
    "baseline_paper_convention",
    "build_hamiltonian",
    "checklist",
    "eigendecompose",
    "emit_report",
    "evolve",
    "fit_scaling",
    "guess_only_cost",
    "helstrom_mixed",
    "helstrom_pure",
    "initial_states",
    "inner_product",
    "k_step_state",
    "measure_binary",
    "normalize",
    "one_step_state",
    "original_cost",
    "overlap_k_paper",
    "posterior_update",
    "run",
    "solve_orthogonality",
    "survival_k_paper",
    "survival_one_step_paper",
    "sweep",
    "total_cost_paper_mode",
]
