"""Spectral shift operators and spectral shift functions for pairs of
Hermitian matrices, built on logarithms of matrix-valued functions with
nonnegative imaginary part in the upper half-plane."""

__version__ = "0.1.0"

from .averaging import (
    PerturbationPath,
    TestFunction,
    averaged_pairing_lhs,
    averaged_pairing_rhs,
    derivative_identity_residual,
    operator_average_increment,
    operator_average_residual,
    operator_increment_residual,
)
from .errors import ConvergenceError, KreinShiftError, PreconditionError
from .herglotz import (
    ConvergenceRecord,
    EpsSchedule,
    HerglotzFamily,
    SignBlock,
    boundary_log,
)
from .matkit import (
    HermitianEig,
    SignedFactorization,
    apply_spectral_function,
    det,
    eig_hermitian,
    expm,
    positive_negative_parts,
    sign_factorization,
    solve_shifted,
)
from .oplog import (
    Branch,
    BridgeResult,
    QuadratureConfig,
    logm_antidissipative,
    logm_dissipative,
    logm_oracle_diag,
    scalar_log,
    tr_log_det_bridge,
)
from .shift import (
    ShiftProfile,
    auto_grid,
    chain_and_monotonicity,
    compute_profile,
    example_3_9,
    herglotz_reconstruction_residual,
    safe_grid,
    trace_formula_residual,
    trace_identity_checks,
    xi_at,
    xi_counting_oracle,
    xi_operator,
    xi_operator_full,
    xi_via_det,
)

__all__ = [
    "__version__",
    "ConvergenceError",
    "KreinShiftError",
    "PreconditionError",
    "HermitianEig",
    "SignedFactorization",
    "apply_spectral_function",
    "det",
    "eig_hermitian",
    "expm",
    "positive_negative_parts",
    "sign_factorization",
    "solve_shifted",
    "Branch",
    "BridgeResult",
    "QuadratureConfig",
    "logm_antidissipative",
    "logm_dissipative",
    "logm_oracle_diag",
    "scalar_log",
    "tr_log_det_bridge",
    "ConvergenceRecord",
    "EpsSchedule",
    "HerglotzFamily",
    "SignBlock",
    "boundary_log",
    "ShiftProfile",
    "auto_grid",
    "chain_and_monotonicity",
    "compute_profile",
    "example_3_9",
    "herglotz_reconstruction_residual",
    "safe_grid",
    "trace_formula_residual",
    "trace_identity_checks",
    "xi_at",
    "xi_counting_oracle",
    "xi_operator",
    "xi_operator_full",
    "xi_via_det",
    "PerturbationPath",
    "TestFunction",
    "averaged_pairing_lhs",
    "averaged_pairing_rhs",
    "derivative_identity_residual",
    "operator_average_increment",
    "operator_average_residual",
    "operator_increment_residual",
]
