"""Sum-of-entropies second law and observational-entropy bookkeeping.

Includes the observational-entropy-matched temperature: beta solving
S_obs[w_B(beta); cg] = S_obs[rho_B; cg].  Unlike the von Neumann
matching, this stays finite for pure states whenever every
coarse-graining cell has volume >= 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg, qstate
from .dynamics import Trajectory
from .ell_ledger import (BETA_CEILING, BetaKind, BetaSolution, entropy_series)
from .errors import IncompatibleDimension, TargetOutOfRange

MONOTONICITY_SAMPLES = 64
FLAT_CURVE_TOL = 1e-12
MONOTONICITY_TOL = 1e-10


def sum_entropy_second_law(traj: Trajectory) -> np.ndarray:
    """Delta S_A(t) + Delta S_B(t) from the reduced von Neumann entropies."""
    s_a, s_b, _ = entropy_series(traj)
    return (s_a - s_a[0]) + (s_b - s_b[0])


def observational_entropy_series(traj: Trajectory, cg: qstate.CoarseGraining,
                                 subsystem: str) -> np.ndarray:
    reduced = traj.reduced_a if subsystem == "A" else traj.reduced_b
    if cg.dim != reduced[0].shape[0]:
        raise IncompatibleDimension(
            f"coarse-graining dim {cg.dim} vs subsystem {subsystem} dim {reduced[0].shape[0]}"
        )
    return np.array([qstate.observational_entropy(r, cg) for r in reduced])


def observational_entropy_production(traj: Trajectory, cg_a: qstate.CoarseGraining,
                                     cg_b: qstate.CoarseGraining) -> np.ndarray:
    """Sigma_obs(t) = Delta S_obs_A + Delta S_obs_B with static coarse-grainings."""
    s_a = observational_entropy_series(traj, cg_a, "A")
    s_b = observational_entropy_series(traj, cg_b, "B")
    return (s_a - s_a[0]) + (s_b - s_b[0])


def _obs_entropy_curve_factory(h_b: np.ndarray, cg: qstate.CoarseGraining):
    """S_obs(w(beta); cg) as a cheap function of beta.

    Precomputes overlaps m[i, j] = <v_j| Pi_i |v_j> so each evaluation
    only mixes Gibbs populations.
    """
    dec = linalg.eigh(h_b)
    if cg.dim != dec.dim:
        raise IncompatibleDimension("coarse-graining dim does not match H_B")
    V = dec.eigenvectors
    m = np.array([np.real(np.einsum("ij,jk,ki->i", V.conj().T, pi, V))
                  for pi in cg.projectors])
    log_vol = np.log(np.array(cg.volumes, dtype=float))

    def curve(beta: float) -> float:
        q = qstate._gibbs_probabilities(dec.eigenvalues, beta)
        p = np.clip(m @ q, 0.0, None)
        nz = p > 0.0
        return float(np.sum(p[nz] * (log_vol[nz] - np.log(p[nz]))))

    return curve


def solve_beta_obs(h_b: np.ndarray, rho_b: np.ndarray,
                   cg_b: qstate.CoarseGraining) -> BetaSolution:
    """Observational-entropy-matched inverse temperature of B.

    Bisection on [0, beta_hi] after a 64-sample monotonicity check of
    S_obs(w(beta); cg); a non-monotone curve yields NoSolution with a
    non_monotone flag, a flat curve Finite(0) with a degenerate flag
    (leftmost-root convention).
    """
    curve = _obs_entropy_curve_factory(h_b, cg_b)
    target = qstate.observational_entropy(np.asarray(rho_b, dtype=complex), cg_b)

    s0 = curve(0.0)
    if target > s0 + 1e-9:
        raise TargetOutOfRange(
            f"observational-entropy target {target!r} above the beta=0 value {s0!r}"
        )

    # Bracket: double beta_hi until the curve drops below the target.
    hi = 1.0
    while curve(hi) > target and hi <= BETA_CEILING:
        hi *= 2.0

    samples = np.linspace(0.0, hi, MONOTONICITY_SAMPLES)
    values = np.array([curve(b) for b in samples])
    if values.max() - values.min() < FLAT_CURVE_TOL:
        return BetaSolution(BetaKind.FINITE, 0.0,
                            residual=abs(s0 - target), flag="degenerate")
    if np.any(np.diff(values) > MONOTONICITY_TOL):
        return BetaSolution(BetaKind.NO_SOLUTION, math.nan,
                            residual=math.nan, flag="non_monotone")

    if hi > BETA_CEILING:
        # Curve never reaches the target at finite beta.
        s_inf = curve(math.inf)
        if target < s_inf - 1e-10:
            return BetaSolution(BetaKind.NO_SOLUTION, math.nan,
                                residual=s_inf - target)
        return BetaSolution(BetaKind.ZERO_TEMPERATURE, math.inf,
                            residual=abs(target - s_inf))

    if curve(0.0) - target <= 0.0:
        return BetaSolution(BetaKind.FINITE, 0.0, residual=abs(s0 - target))

    lo = hi / 2.0 if hi > 1.0 else 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if curve(mid) - target >= 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * max(1.0, hi):
            break
    beta = 0.5 * (lo + hi)
    return BetaSolution(BetaKind.FINITE, beta, residual=abs(curve(beta) - target))


@dataclass(frozen=True)
class ObsLedger:
    """Per-time-step quantities of the alternative framework."""

    times: np.ndarray
    delta_sum_vn: np.ndarray
    s_obs_a: np.ndarray
    s_obs_b: np.ndarray
    sigma_obs: np.ndarray
    beta_obs: list[BetaSolution]


def build_obs_ledger(traj: Trajectory, cg_a: qstate.CoarseGraining,
                     cg_b: qstate.CoarseGraining) -> ObsLedger:
    s_obs_a = observational_entropy_series(traj, cg_a, "A")
    s_obs_b = observational_entropy_series(traj, cg_b, "B")
    beta_obs = [solve_beta_obs(traj.model.h_b, rho, cg_b) for rho in traj.reduced_b]
    return ObsLedger(
        times=traj.times,
        delta_sum_vn=sum_entropy_second_law(traj),
        s_obs_a=s_obs_a, s_obs_b=s_obs_b,
        sigma_obs=(s_obs_a - s_obs_a[0]) + (s_obs_b - s_obs_b[0]),
        beta_obs=beta_obs,
    )
