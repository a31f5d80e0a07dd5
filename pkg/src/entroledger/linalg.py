"""Dense complex linear algebra kernel.

Hermitian eigendecompositions, spectral matrix functions, Kronecker
products and partial traces for Hilbert spaces up to a few thousand
dimensions.  Composite indices are always row-major:
``i_AB = i_A * d_B + i_B``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, NotHermitian

HERMITICITY_TOL = 1e-10


def hermiticity_defect(matrix: np.ndarray) -> float:
    """Max-abs entrywise deviation of A from its conjugate transpose."""
    return float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0


def require_hermitian(matrix: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {matrix.shape}")
    defect = hermiticity_defect(matrix)
    if defect > tol:
        raise NotHermitian(f"Hermiticity defect {defect:.3e} exceeds tolerance {tol:.1e}")
    return matrix


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and a unitary matrix of eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        """V diag(lambda) V†."""
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T

    def apply(self, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """V diag(f(lambda)) V†."""
        V = self.eigenvectors
        return (V * f(self.eigenvalues)) @ V.conj().T


def eigh(matrix: np.ndarray, tol: float = HERMITICITY_TOL) -> SpectralDecomposition:
    """Full Hermitian eigendecomposition with ascending eigenvalues.

    Raises NotHermitian when the input violates the Hermiticity tolerance.
    """
    matrix = require_hermitian(matrix, tol)
    w, V = np.linalg.eigh(matrix)
    return SpectralDecomposition(eigenvalues=w, eigenvectors=V)


def matrix_function(matrix: np.ndarray, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum."""
    return eigh(matrix).apply(f)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with row-major composite indexing."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(rho_ab: np.ndarray, d_a: int, d_b: int, keep: str) -> np.ndarray:
    """Trace out one subsystem of a bipartite operator.

    ``keep`` selects the surviving factor, "A" or "B".  The composite
    index convention is row-major (A major, B minor).
    """
    rho_ab = np.asarray(rho_ab, dtype=complex)
    if rho_ab.shape != (d_a * d_b, d_a * d_b):
        raise DimensionMismatch(
            f"state has shape {rho_ab.shape}, expected {(d_a * d_b, d_a * d_b)}"
        )
    blocks = rho_ab.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ikjk->ij", blocks)
    if keep == "B":
        return np.einsum("kikj->ij", blocks)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
