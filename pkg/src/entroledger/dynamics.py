"""Exact closed-system evolution of a bipartite composite on a uniform grid.

States are propagated by spectral exponentiation of the (cached)
eigendecomposition of the total Hamiltonian, so there is no step-to-step
integrator error: rho(t_k) = U_k rho0 U_k† with U_k = e^{-i H_AB t_k}.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import linalg, qstate
from .errors import CapExceeded, DimensionMismatch

DEFAULT_DIM_CAP = 4096
DIM_CAP_ENV_VAR = "ENTROLEDGER_DIM_CAP"


def configured_dim_cap(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    env = os.environ.get(DIM_CAP_ENV_VAR)
    return int(env) if env else DEFAULT_DIM_CAP


@dataclass(frozen=True)
class BipartiteSpace:
    """Hilbert-space dimensions of the two subsystems."""

    d_a: int
    d_b: int

    def __post_init__(self):
        if self.d_a < 1 or self.d_b < 1:
            raise DimensionMismatch("subsystem dimensions must be positive")

    @property
    def dim(self) -> int:
        return self.d_a * self.d_b


@dataclass(frozen=True)
class CompositeModel:
    """H_AB = H_A (x) I + I (x) H_B + V_int on a bipartite space."""

    space: BipartiteSpace
    h_a: np.ndarray
    h_b: np.ndarray
    v_int: np.ndarray

    def __post_init__(self):
        d_a, d_b = self.space.d_a, self.space.d_b
        for name, op, d in (("h_a", self.h_a, d_a), ("h_b", self.h_b, d_b),
                            ("v_int", self.v_int, d_a * d_b)):
            op = np.asarray(op, dtype=complex)
            if op.shape != (d, d):
                raise DimensionMismatch(f"{name} has shape {op.shape}, expected {(d, d)}")
            linalg.require_hermitian(op)
            object.__setattr__(self, name, op)

    @property
    def h_ab(self) -> np.ndarray:
        d_a, d_b = self.space.d_a, self.space.d_b
        return (linalg.kron(self.h_a, np.eye(d_b))
                + linalg.kron(np.eye(d_a), self.h_b)
                + self.v_int)


@dataclass(frozen=True)
class Trajectory:
    """States on a uniform grid t_k = k dt plus the reduced states and the
    cached spectral decomposition of H_AB."""

    model: CompositeModel
    times: np.ndarray
    states: tuple
    reduced_a: tuple
    reduced_b: tuple
    spectral_cache: linalg.SpectralDecomposition = field(repr=False, default=None)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0

    @property
    def steps(self) -> int:
        return len(self.times) - 1


def product_state(rho_a: np.ndarray, rho_b: np.ndarray) -> np.ndarray:
    """Decorrelated composite state rho_A (x) rho_B."""
    qstate.validate_density_matrix(rho_a)
    qstate.validate_density_matrix(rho_b)
    return linalg.kron(rho_a, rho_b)


def evolve(model: CompositeModel, rho0: np.ndarray, dt: float, steps: int,
           dim_cap: int | None = None) -> Trajectory:
    """Unitarily evolve rho0 under the composite Hamiltonian.

    Each grid state comes from the single cached eigendecomposition, so
    unitarity and energy conservation hold to eigensolver accuracy.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if steps < 1:
        raise ValueError("steps must be positive")
    d_a, d_b = model.space.d_a, model.space.d_b
    dim = d_a * d_b
    cap = configured_dim_cap(dim_cap)
    if dim > cap:
        raise CapExceeded(f"composite dimension {dim} exceeds cap {cap}")
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (dim, dim):
        raise DimensionMismatch(f"rho0 has shape {rho0.shape}, expected {(dim, dim)}")
    qstate.validate_density_matrix(rho0)

    dec = linalg.eigh(model.h_ab)
    V = dec.eigenvectors
    rho0_eig = V.conj().T @ rho0 @ V

    times = np.arange(steps + 1) * dt
    states, reds_a, reds_b = [], [], []
    for t in times:
        phases = np.exp(-1j * dec.eigenvalues * t)
        # U rho0 U† with U = V diag(phases) V†, done in the eigenbasis.
        rho_t = V @ (np.outer(phases, phases.conj()) * rho0_eig) @ V.conj().T
        rho_t = 0.5 * (rho_t + rho_t.conj().T)
        states.append(rho_t)
        reds_a.append(linalg.partial_trace(rho_t, d_a, d_b, keep="A"))
        reds_b.append(linalg.partial_trace(rho_t, d_a, d_b, keep="B"))

    return Trajectory(model=model, times=times, states=tuple(states),
                      reduced_a=tuple(reds_a), reduced_b=tuple(reds_b),
                      spectral_cache=dec)
