"""Exact diagonalization and closed-form analytics for the Dicke-model
quantum phase transition."""

from .dicke import ModelParams, build_hamiltonian, parity_diagonal
from .eigensolver import (
    GroundState,
    LanczosResult,
    SolverConfig,
    converge_cutoff,
    dense_ground,
    lanczos_ground,
)
from .hilbert import BasisSpec, SpinLength, boson_matrices, kron, spin_matrices
from .observables import ObservableRecord, measure_record, susceptibility

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "GroundState",
    "LanczosResult",
    "ModelParams",
    "ObservableRecord",
    "SolverConfig",
    "SpinLength",
    "boson_matrices",
    "build_hamiltonian",
    "converge_cutoff",
    "dense_ground",
    "kron",
    "lanczos_ground",
    "measure_record",
    "parity_diagonal",
    "spin_matrices",
    "susceptibility",
    "__version__",
]
