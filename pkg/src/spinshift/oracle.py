"""Dense Hermitian diagonalization and spectrum matching.

Every closed-form energy in the package is validated against this
brute-force path.  The decomposition itself is delegated to LAPACK via
numpy.linalg.eigh; the contract enforced here is the backward-error and
orthogonality bound, not the algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import StateVector, norm
from .models import HamiltonianSpec, SectorMatrix, apply_hamiltonian

HERMITICITY_TOL = 1e-12
BACKWARD_TOL = 1e-10


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues with an orthonormal eigenvector column set."""

    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)
    backward_error: float = 0.0

    def __post_init__(self):
        for name in ("eigenvalues", "eigenvectors"):
            arr = np.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def _as_dense(matrix) -> np.ndarray:
    if isinstance(matrix, SectorMatrix):
        return matrix.to_dense()
    dense = np.asarray(matrix, dtype=complex)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        raise ValueError("expected a square matrix")
    return dense


def eig_hermitian(matrix) -> EigenDecomposition:
    """Full decomposition of a Hermitian sector matrix (dim <= 4096)."""
    dense = _as_dense(matrix)
    defect = float(np.max(np.abs(dense - dense.conj().T))) if dense.size else 0.0
    if defect > HERMITICITY_TOL:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
    eigenvalues, eigenvectors = np.linalg.eigh(dense)
    scale = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    residual = float(
        np.max(
            np.linalg.norm(
                dense @ eigenvectors - eigenvectors * eigenvalues[None, :], axis=0
            )
        )
    )
    if residual > BACKWARD_TOL * max(scale, 1e-300):
        raise RuntimeError(
            f"eigensolver backward error {residual:.3e} exceeds bound"
        )
    ortho = float(
        np.max(
            np.abs(
                eigenvectors.conj().T @ eigenvectors - np.eye(len(eigenvalues))
            )
        )
    ) if eigenvalues.size else 0.0
    if ortho > BACKWARD_TOL:
        raise RuntimeError(f"eigenvectors lost orthogonality ({ortho:.3e})")
    return EigenDecomposition(eigenvalues, eigenvectors, residual)


@dataclass(frozen=True)
class SpectrumMatch:
    """Nearest-eigenvalue report for one target energy."""

    target: float
    nearest: float
    gap: float
    index: int
    tol: float
    matched: bool


def spectrum_contains(
    eigs: EigenDecomposition, energy: float, tol: float
) -> SpectrumMatch:
    """Locate the eigenvalue closest to ``energy`` and compare with ``tol``."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    gaps = np.abs(eigs.eigenvalues - energy)
    index = int(np.argmin(gaps))
    gap = float(gaps[index])
    return SpectrumMatch(
        target=float(energy),
        nearest=float(eigs.eigenvalues[index]),
        gap=gap,
        index=index,
        tol=tol,
        matched=gap <= tol,
    )


def rayleigh(spec: HamiltonianSpec, state: StateVector) -> float:
    """Energy estimate <psi|H|psi> / <psi|psi>, checked to be real."""
    norm2 = float(np.vdot(state.amplitudes, state.amplitudes).real)
    if norm2 == 0.0:
        raise ValueError("Rayleigh quotient of the zero state")
    h_state = apply_hamiltonian(spec, state)
    value = complex(np.vdot(state.amplitudes, h_state.amplitudes)) / norm2
    if abs(value.imag) > 1e-12 * max(1.0, abs(value.real)):
        raise RuntimeError(f"Rayleigh quotient has imaginary leakage {value.imag:.3e}")
    return value.real


def eigen_residual(spec: HamiltonianSpec, state: StateVector, energy: float) -> float:
    """Relative defect ||H psi - E psi|| / ||psi||."""
    scale = norm(state)
    if scale == 0.0:
        raise ValueError("eigen-residual of the zero state")
    h_state = apply_hamiltonian(spec, state)
    return float(
        np.linalg.norm(h_state.amplitudes - energy * state.amplitudes) / scale
    )
