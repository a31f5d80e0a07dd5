"""Entropy-matched temperature, heat rate and Clausius functional.

The inverse temperature of B is the beta whose Gibbs state reproduces
the von Neumann entropy of rho_B.  The matching equation is solved by
bisection on beta in [0, inf); it has no solution when the target lies
below ln g0 of a degenerate ground level, and beta = inf (temperature
zero) whenever rho_B is pure, independent of its energy.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import linalg, qstate
from .dynamics import Trajectory
from .errors import TargetOutOfRange, UndefinedHeat

BETA_CEILING = 1e12       # beyond this e^{-beta gap} underflows for any gap >= 1e-10
ENTROPY_RESIDUAL_TOL = 1e-10
DIVERGENCE_HEAT_TOL = 1e-12


class BetaKind(enum.Enum):
    FINITE = "finite"
    ZERO_TEMPERATURE = "zero_temperature"
    NO_SOLUTION = "no_solution"


@dataclass(frozen=True)
class BetaSolution:
    kind: BetaKind
    beta: float            # finite value, inf for ZERO_TEMPERATURE, nan otherwise
    residual: float        # achieved entropy mismatch in nats
    flag: str | None = None

    @property
    def is_finite(self) -> bool:
        return self.kind is BetaKind.FINITE


def solve_beta_from_spectrum(eigenvalues: np.ndarray, s_target: float) -> BetaSolution:
    """Solve S(w(beta)) = s_target for beta >= 0 given the spectrum of H_B."""
    w = np.asarray(eigenvalues, dtype=float)
    dim = w.shape[0]
    s_max = math.log(dim)
    if s_target < -1e-12 or s_target > s_max + 1e-9:
        raise TargetOutOfRange(
            f"entropy target {s_target!r} outside [0, ln {dim}] = [0, {s_max!r}]"
        )
    s_target = min(max(s_target, 0.0), s_max)

    g0 = qstate.ground_degeneracy(w)
    s_floor = math.log(g0)
    if s_target < s_floor - ENTROPY_RESIDUAL_TOL:
        return BetaSolution(BetaKind.NO_SOLUTION, math.nan,
                            residual=s_floor - s_target)
    if s_target <= s_floor + ENTROPY_RESIDUAL_TOL:
        return BetaSolution(BetaKind.ZERO_TEMPERATURE, math.inf,
                            residual=abs(s_target - s_floor))

    def f(beta: float) -> float:
        return qstate.gibbs_entropy_from_spectrum(w, beta) - s_target

    if f(0.0) <= 0.0:
        return BetaSolution(BetaKind.FINITE, 0.0, residual=abs(f(0.0)))

    hi = 1.0
    while f(hi) >= 0.0:
        hi *= 2.0
        if hi > BETA_CEILING:
            return BetaSolution(BetaKind.ZERO_TEMPERATURE, math.inf,
                                residual=abs(s_target - s_floor),
                                flag="bracket_ceiling")
    lo = hi / 2.0 if hi > 1.0 else 0.0

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * max(1.0, hi):
            break
    beta = 0.5 * (lo + hi)
    return BetaSolution(BetaKind.FINITE, beta, residual=abs(f(beta)))


def solve_beta_from_entropy(h_b: np.ndarray, s_target: float) -> BetaSolution:
    """Entropy-matching inverse temperature for a Hamiltonian of B."""
    return solve_beta_from_spectrum(linalg.eigh(h_b).eigenvalues, s_target)


# ---------------------------------------------------------------------------
# Per-trajectory series
# ---------------------------------------------------------------------------

def entropy_series(traj: Trajectory) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(S_A, S_B, S_AB) at every grid time."""
    s_a = np.array([qstate.von_neumann_entropy(r) for r in traj.reduced_a])
    s_b = np.array([qstate.von_neumann_entropy(r) for r in traj.reduced_b])
    s_ab = np.array([qstate.von_neumann_entropy(r) for r in traj.states])
    return s_a, s_b, s_ab


def beta_series(traj: Trajectory, s_b: np.ndarray | None = None) -> list[BetaSolution]:
    """Entropy-matched beta of B at every grid time."""
    if s_b is None:
        s_b = np.array([qstate.von_neumann_entropy(r) for r in traj.reduced_b])
    w = linalg.eigh(traj.model.h_b).eigenvalues
    return [solve_beta_from_spectrum(w, s) for s in s_b]


def _finite_difference(series: np.ndarray, dt: float) -> np.ndarray:
    """Central differences, one-sided at the endpoints."""
    d = np.empty_like(series)
    d[1:-1] = (series[2:] - series[:-2]) / (2.0 * dt)
    d[0] = (series[1] - series[0]) / dt
    d[-1] = (series[-1] - series[-2]) / dt
    return d


def ell_heat_rate(traj: Trajectory, k: int,
                  betas: list[BetaSolution] | None = None) -> float:
    """Qdot_B(t_k) = -dS_B/dt / beta_B(t_k), finite differences on the grid.

    Returns 0 for beta = inf (the zero-temperature limit of the
    definition); raises UndefinedHeat when beta has no solution.
    """
    s_b = np.array([qstate.von_neumann_entropy(r) for r in traj.reduced_b])
    if betas is None:
        betas = beta_series(traj, s_b)
    sol = betas[k]
    if sol.kind is BetaKind.NO_SOLUTION:
        raise UndefinedHeat(f"beta_B undefined at step {k}")
    if sol.kind is BetaKind.ZERO_TEMPERATURE:
        return 0.0
    return float(-_finite_difference(s_b, traj.dt)[k] / sol.beta)


def heat_rate_series(s_b: np.ndarray, betas: list[BetaSolution],
                     dt: float) -> tuple[np.ndarray, np.ndarray]:
    """(Qdot_B, defined-mask) over the grid; Qdot is 0 at beta = inf steps
    and NaN (mask False) where beta has no solution."""
    ds_b = _finite_difference(s_b, dt)
    qdot = np.full(len(betas), math.nan)
    defined = np.zeros(len(betas), dtype=bool)
    for k, sol in enumerate(betas):
        if sol.kind is BetaKind.FINITE and sol.beta > 0.0:
            qdot[k] = -ds_b[k] / sol.beta
            defined[k] = True
        elif sol.kind is BetaKind.ZERO_TEMPERATURE:
            qdot[k] = 0.0
            defined[k] = True
    return qdot, defined


def _cumulative_trapezoid(values: np.ndarray, dt: float) -> np.ndarray:
    out = np.zeros_like(values)
    out[1:] = np.cumsum(0.5 * dt * (values[1:] + values[:-1]))
    return out


@dataclass(frozen=True)
class EllLedger:
    """Per-time-step ELL quantities for one trajectory."""

    times: np.ndarray
    s_a: np.ndarray
    s_b: np.ndarray
    s_ab: np.ndarray
    i_ab: np.ndarray
    betas: list[BetaSolution]
    qdot_b: np.ndarray
    qdot_defined: np.ndarray
    sigma_clausius: np.ndarray              # telescoped reference value
    sigma_clausius_quadrature: np.ndarray   # trapezoid diagnostic (NaN when undefined)
    quadrature_defined: np.ndarray
    sigma_fixed_beta: np.ndarray
    sigma_fixed_kind: list[str]             # finite | divergent | indeterminate | no_solution
    q_b: np.ndarray                         # integrated entropy-based heat
    q_energy: np.ndarray


def clausius_functional(traj: Trajectory) -> np.ndarray:
    """Telescoped Clausius functional Sigma(t_k) = Delta S_A + Delta S_B.

    The exact telescoping uses beta Qdot = -dS_B/dt, so for product
    initial states this equals the mutual information identically.
    """
    s_a, s_b, _ = entropy_series(traj)
    return (s_a - s_a[0]) + (s_b - s_b[0])


def fixed_beta_functional(traj: Trajectory) -> tuple[np.ndarray, list[str]]:
    """Sigma_fix(t) = Delta S_A - beta_B(0) * Q_B(t), Q_B by trapezoid.

    Divergent (with a NaN value) wherever beta_B(0) = inf and the
    accumulated heat is nonzero; the 0*inf steps are Indeterminate.
    """
    ledger = build_ell_ledger(traj)
    return ledger.sigma_fixed_beta, ledger.sigma_fixed_kind


def energy_heat(traj: Trajectory) -> np.ndarray:
    """Q_energy(t_k) = -(Tr[H_B rho_B(t_k)] - Tr[H_B rho_B(0)])."""
    h_b = traj.model.h_b
    e_b = np.array([float(np.trace(h_b @ r).real) for r in traj.reduced_b])
    return -(e_b - e_b[0])


def build_ell_ledger(traj: Trajectory) -> EllLedger:
    s_a, s_b, s_ab = entropy_series(traj)
    i_ab = s_a + s_b - s_ab
    betas = beta_series(traj, s_b)
    dt = traj.dt

    qdot, qdot_defined = heat_rate_series(s_b, betas, dt)
    sigma_tel = (s_a - s_a[0]) + (s_b - s_b[0])

    # Quadrature diagnostic: trapezoid of beta * Qdot, valid only while
    # beta stays finite from t = 0 up to the evaluation time.
    beta_vals = np.array([sol.beta if sol.is_finite else math.nan for sol in betas])
    integrand = beta_vals * qdot
    finite_prefix = np.cumprod([sol.is_finite for sol in betas]).astype(bool)
    quad = np.full_like(sigma_tel, math.nan)
    quad_defined = finite_prefix.copy()
    if finite_prefix[0]:
        cum = _cumulative_trapezoid(np.nan_to_num(integrand), dt)
        quad[finite_prefix] = (s_a - s_a[0])[finite_prefix] - cum[finite_prefix]

    # Integrated entropy-based heat (trapezoid over defined steps).
    q_b = _cumulative_trapezoid(np.nan_to_num(qdot), dt)
    qdot_prefix = np.cumprod(qdot_defined).astype(bool)

    beta0 = betas[0]
    n = len(betas)
    sigma_fix = np.full(n, math.nan)
    kinds: list[str] = []
    for k in range(n):
        if beta0.kind is BetaKind.NO_SOLUTION:
            kinds.append("no_solution")
        elif not qdot_prefix[k]:
            kinds.append("indeterminate")
        elif beta0.kind is BetaKind.ZERO_TEMPERATURE:
            kinds.append("divergent" if abs(q_b[k]) > DIVERGENCE_HEAT_TOL
                         else "indeterminate")
        else:
            sigma_fix[k] = (s_a[k] - s_a[0]) - beta0.beta * q_b[k]
            kinds.append("finite")

    return EllLedger(
        times=traj.times, s_a=s_a, s_b=s_b, s_ab=s_ab, i_ab=i_ab,
        betas=betas, qdot_b=qdot, qdot_defined=qdot_defined,
        sigma_clausius=sigma_tel,
        sigma_clausius_quadrature=quad, quadrature_defined=quad_defined,
        sigma_fixed_beta=sigma_fix, sigma_fixed_kind=kinds,
        q_b=q_b, q_energy=energy_heat(traj),
    )
