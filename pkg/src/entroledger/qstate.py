"""Quantum states, Gibbs states and entropy functionals.

Units: hbar = k_B = 1, entropies in nats.  Density matrices and
Hamiltonians are plain complex ndarrays; the validators here enforce the
invariants (Hermiticity, unit trace, positivity) at the boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import IncompatibleDimension, InvalidState, NotHermitian

# Eigenvalues in [-EIG_CLAMP, 0) are numerical noise and get clamped to 0;
# anything more negative is an invalid state.
EIG_CLAMP = 1e-10
TRACE_TOL = 1e-10


def validate_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return as complex array."""
    rho = np.asarray(rho, dtype=complex)
    defect = linalg.hermiticity_defect(rho)
    if defect > linalg.HERMITICITY_TOL:
        raise InvalidState(f"density matrix not Hermitian (defect {defect:.3e})")
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidState(f"density matrix trace {tr!r} differs from 1")
    w = np.linalg.eigvalsh(rho)
    if w[0] < -EIG_CLAMP:
        raise InvalidState(f"density matrix has negative eigenvalue {w[0]:.3e}")
    return rho


def ground_degeneracy(eigenvalues: np.ndarray) -> int:
    """Number of eigenvalues within a scale-aware tolerance of the minimum."""
    w = np.asarray(eigenvalues, dtype=float)
    span = float(w[-1] - w[0])
    tol = span * 1e-9 + 1e-12
    return int(np.count_nonzero(w <= w[0] + tol))


def _entropy_from_probabilities(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float)
    if p.min() < -EIG_CLAMP:
        raise InvalidState(f"probability {p.min():.3e} below clamping window")
    p = np.clip(p, 0.0, None)
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S(rho) = -Tr[rho ln rho] in nats, with 0 ln 0 = 0."""
    rho = np.asarray(rho, dtype=complex)
    return _entropy_from_probabilities(np.linalg.eigvalsh(rho))


@dataclass(frozen=True)
class GibbsState:
    """Canonical state e^{-beta H}/Z of a Hamiltonian; beta = inf is the
    normalized ground-eigenspace projector."""

    beta: float
    hamiltonian: np.ndarray
    state: np.ndarray


def _gibbs_probabilities(eigenvalues: np.ndarray, beta: float) -> np.ndarray:
    """Populations of the Gibbs state, via the spectral shift e^{-beta(E - E_min)}."""
    w = np.asarray(eigenvalues, dtype=float)
    if math.isinf(beta):
        g0 = ground_degeneracy(w)
        p = np.zeros_like(w)
        p[:g0] = 1.0 / g0
        return p
    z = np.exp(-beta * (w - w[0]))
    return z / z.sum()


def gibbs_state(hamiltonian: np.ndarray, beta: float) -> GibbsState:
    """Gibbs state at inverse temperature beta >= 0 (beta = inf allowed)."""
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    dec = linalg.eigh(hamiltonian)
    p = _gibbs_probabilities(dec.eigenvalues, beta)
    V = dec.eigenvectors
    rho = (V * p) @ V.conj().T
    return GibbsState(beta=beta, hamiltonian=np.asarray(hamiltonian, dtype=complex), state=rho)


def gibbs_entropy_from_spectrum(eigenvalues: np.ndarray, beta: float) -> float:
    """Entropy of the Gibbs state, computed from the Hamiltonian spectrum only.

    S(beta) = ln Z + beta <E - E_min>, with Z the shifted partition function.
    Non-increasing in beta; S(0) = ln dim, S(inf) = ln g0.
    """
    w = np.asarray(eigenvalues, dtype=float)
    if math.isinf(beta):
        return math.log(ground_degeneracy(w))
    x = w - w[0]
    z = np.exp(-beta * x)
    big_z = z.sum()
    return float(math.log(big_z) + beta * float(np.dot(x, z)) / big_z)


def gibbs_entropy_curve(hamiltonian: np.ndarray, beta: float) -> float:
    """S(w(beta)) for the Gibbs state of the given Hamiltonian."""
    return gibbs_entropy_from_spectrum(linalg.eigh(hamiltonian).eigenvalues, beta)


def gibbs_energy_variance(eigenvalues: np.ndarray, beta: float) -> float:
    """Var_{w(beta)}(H); the entropy-curve slope is dS/dbeta = -beta * Var."""
    w = np.asarray(eigenvalues, dtype=float)
    p = _gibbs_probabilities(w, beta)
    mean = float(np.dot(p, w))
    return float(np.dot(p, (w - mean) ** 2))


def mutual_information(rho_ab: np.ndarray, d_a: int, d_b: int) -> float:
    """I_AB = S(rho_A) + S(rho_B) - S(rho_AB); nonnegative, bounded by
    2 min(ln d_A, ln d_B)."""
    rho_a = linalg.partial_trace(rho_ab, d_a, d_b, keep="A")
    rho_b = linalg.partial_trace(rho_ab, d_a, d_b, keep="B")
    return von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b) - von_neumann_entropy(rho_ab)


# ---------------------------------------------------------------------------
# Coarse-grainings and observational entropy
# ---------------------------------------------------------------------------

PROJECTOR_TOL = 1e-9
COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True)
class CoarseGraining:
    """Complete set of orthogonal projectors with integer volumes Tr Pi_i."""

    projectors: tuple = field(default_factory=tuple)

    def __post_init__(self):
        projs = tuple(np.asarray(p, dtype=complex) for p in self.projectors)
        if not projs:
            raise InvalidState("coarse-graining needs at least one projector")
        dim = projs[0].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for p in projs:
            if p.shape != (dim, dim):
                raise IncompatibleDimension("projector shapes disagree")
            if linalg.hermiticity_defect(p) > linalg.HERMITICITY_TOL:
                raise InvalidState("projector not Hermitian")
            if np.max(np.abs(p @ p - p)) > PROJECTOR_TOL:
                raise InvalidState("projector not idempotent")
            total += p
        if np.max(np.abs(total - np.eye(dim))) > COMPLETENESS_TOL:
            raise InvalidState("projectors do not sum to the identity")
        object.__setattr__(self, "projectors", projs)

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def volumes(self) -> tuple:
        return tuple(int(round(np.trace(p).real)) for p in self.projectors)


def identity_coarse_graining(dim: int) -> CoarseGraining:
    """The information-free coarse-graining {I}."""
    return CoarseGraining(projectors=(np.eye(dim, dtype=complex),))


def eigenbasis_coarse_graining(operator: np.ndarray) -> CoarseGraining:
    """Rank-1 projectors onto the eigenvectors of a Hermitian operator.

    Degenerate clusters still yield rank-1 projectors (an arbitrary
    orthonormal basis inside each cluster).
    """
    dec = linalg.eigh(operator)
    projs = tuple(
        np.outer(dec.eigenvectors[:, j], dec.eigenvectors[:, j].conj())
        for j in range(dec.dim)
    )
    return CoarseGraining(projectors=projs)


def projector_probabilities(rho: np.ndarray, cg: CoarseGraining) -> np.ndarray:
    """p_i = Tr[Pi_i rho], clamped against numerical negatives."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (cg.dim, cg.dim):
        raise IncompatibleDimension(
            f"state dim {rho.shape[0]} vs coarse-graining dim {cg.dim}"
        )
    p = np.array([float(np.trace(pi @ rho).real) for pi in cg.projectors])
    if p.min() < -EIG_CLAMP:
        raise InvalidState(f"projector probability {p.min():.3e} is negative")
    return np.clip(p, 0.0, None)


def observational_entropy(rho: np.ndarray, cg: CoarseGraining) -> float:
    """S_obs = sum_i p_i (ln V_i - ln p_i) for p_i = Tr[Pi_i rho].

    Sandwiched between the von Neumann entropy and ln dim; both bounds
    are asserted post hoc within tolerance.
    """
    p = projector_probabilities(rho, cg)
    volumes = np.array(cg.volumes, dtype=float)
    nz = p > 0.0
    s_obs = float(np.sum(p[nz] * (np.log(volumes[nz]) - np.log(p[nz]))))
    s_vn = von_neumann_entropy(rho)
    if s_obs < s_vn - 1e-9 or s_obs > math.log(cg.dim) + 1e-9:
        raise InvalidState(
            f"observational entropy {s_obs!r} outside [S_vN, ln dim] window"
        )
    return s_obs


def energy_coarse_graining(hamiltonian: np.ndarray, num_bins: int) -> CoarseGraining:
    """Projectors onto groups of adjacent eigenvectors of H.

    Bins are equal-width in energy over [E_min, E_max]; a degenerate
    cluster is assigned as a whole to the bin of its representative
    (mean) eigenvalue, so clusters are never split.  Empty bins are
    dropped.
    """
    if num_bins < 1:
        raise ValueError("num_bins must be >= 1")
    dec = linalg.eigh(hamiltonian)
    w, V = dec.eigenvalues, dec.eigenvectors
    span = float(w[-1] - w[0])
    if num_bins == 1 or span == 0.0:
        return identity_coarse_graining(dec.dim)

    # Cluster degenerate eigenvalues with the same scale-aware tolerance
    # used for ground-state degeneracy detection.
    tol = span * 1e-9 + 1e-12
    clusters: list[list[int]] = [[0]]
    for j in range(1, dec.dim):
        if w[j] - w[clusters[-1][0]] <= tol:
            clusters[-1].append(j)
        else:
            clusters.append([j])

    width = span / num_bins
    members: dict[int, list[int]] = {}
    for cluster in clusters:
        rep = float(np.mean(w[cluster]))
        idx = min(int((rep - w[0]) / width), num_bins - 1)
        members.setdefault(idx, []).extend(cluster)

    projs = []
    for idx in sorted(members):
        cols = V[:, members[idx]]
        projs.append(cols @ cols.conj().T)
    return CoarseGraining(projectors=tuple(projs))
