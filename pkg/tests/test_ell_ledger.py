import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entroledger import dynamics, ell_ledger, linalg, qstate
from entroledger.ell_ledger import BetaKind
from entroledger.errors import TargetOutOfRange, UndefinedHeat

from conftest import random_density_matrix, random_hermitian, random_unitary


def coupled_model(rng, d_a=2, d_b=3, scale=0.5):
    return dynamics.CompositeModel(
        dynamics.BipartiteSpace(d_a, d_b),
        random_hermitian(rng, d_a), random_hermitian(rng, d_b),
        random_hermitian(rng, d_a * d_b, scale=scale))


def product_trajectory(rng, d_a=2, d_b=3, dt=0.1, steps=30, scale=0.5):
    m = coupled_model(rng, d_a, d_b, scale)
    rho0 = dynamics.product_state(random_density_matrix(rng, d_a),
                                  random_density_matrix(rng, d_b))
    return dynamics.evolve(m, rho0, dt=dt, steps=steps)


class TestBetaSolver:
    def test_maximum_entropy_target_gives_beta_zero(self, rng):
        w = np.sort(rng.standard_normal(5))
        sol = ell_ledger.solve_beta_from_spectrum(w, math.log(5))
        assert sol.kind is BetaKind.FINITE
        assert sol.beta == pytest.approx(0.0, abs=1e-12)

    def test_recovers_known_beta(self, rng):
        # Round trip: compute the Gibbs entropy at a known beta, then ask
        # the solver to invert it.
        for beta_true in (0.2, 1.0, 3.7, 25.0):
            w = np.sort(rng.uniform(-1.0, 1.0, size=6))
            s = qstate.gibbs_entropy_from_spectrum(w, beta_true)
            sol = ell_ledger.solve_beta_from_spectrum(w, s)
            assert sol.kind is BetaKind.FINITE
            assert sol.beta == pytest.approx(beta_true, rel=1e-8)

    def test_matches_dense_scan_oracle(self, rng):
        # Independent oracle: locate the crossing on a dense beta grid and
        # refine by linear interpolation between bracketing samples.
        w = np.sort(rng.uniform(0.0, 2.0, size=5))
        s_target = 0.8
        grid = np.linspace(0.0, 50.0, 200001)
        vals = np.array([qstate.gibbs_entropy_from_spectrum(w, b) for b in grid])
        k = int(np.argmax(vals < s_target))
        frac = (vals[k - 1] - s_target) / (vals[k - 1] - vals[k])
        beta_oracle = grid[k - 1] + frac * (grid[k] - grid[k - 1])
        sol = ell_ledger.solve_beta_from_spectrum(w, s_target)
        assert sol.kind is BetaKind.FINITE
        assert sol.beta == pytest.approx(beta_oracle, abs=2e-4)

    def test_residual_small_for_finite_solutions(self, rng):
        w = np.sort(rng.standard_normal(7))
        sol = ell_ledger.solve_beta_from_spectrum(w, 1.2)
        assert sol.residual < 1e-10

    def test_zero_entropy_target_means_zero_temperature(self, rng):
        w = np.sort(rng.standard_normal(4))
        sol = ell_ledger.solve_beta_from_spectrum(w, 0.0)
        assert sol.kind is BetaKind.ZERO_TEMPERATURE
        assert sol.beta == math.inf

    def test_degenerate_ground_no_solution(self):
        w = np.array([0.0, 0.0, 1.0])
        for s_target in (0.0, 0.3, 0.6):
            sol = ell_ledger.solve_beta_from_spectrum(w, s_target)
            assert sol.kind is BetaKind.NO_SOLUTION
            assert math.isnan(sol.beta)

    def test_degenerate_ground_boundary_target(self):
        w = np.array([0.0, 0.0, 1.0])
        sol = ell_ledger.solve_beta_from_spectrum(w, math.log(2.0))
        assert sol.kind is BetaKind.ZERO_TEMPERATURE

    def test_rejects_out_of_range_targets(self, rng):
        w = np.sort(rng.standard_normal(4))
        with pytest.raises(TargetOutOfRange):
            ell_ledger.solve_beta_from_spectrum(w, -0.5)
        with pytest.raises(TargetOutOfRange):
            ell_ledger.solve_beta_from_spectrum(w, math.log(4) + 0.1)

    def test_hamiltonian_entry_point(self, rng):
        h = random_hermitian(rng, 5)
        w = linalg.eigh(h).eigenvalues
        a = ell_ledger.solve_beta_from_entropy(h, 1.0)
        b = ell_ledger.solve_beta_from_spectrum(w, 1.0)
        assert a.beta == pytest.approx(b.beta, rel=1e-12)


class TestHeatRate:
    def test_matches_finite_difference_oracle(self, rng):
        traj = product_trajectory(rng, steps=20)
        s_b = np.array([qstate.von_neumann_entropy(r) for r in traj.reduced_b])
        betas = ell_ledger.beta_series(traj, s_b)
        dt = traj.dt
        for k in (1, 5, 10, 19):
            fd = (s_b[k + 1] - s_b[k - 1]) / (2.0 * dt)
            expected = -fd / betas[k].beta
            assert ell_ledger.ell_heat_rate(traj, k, betas) == pytest.approx(
                expected, rel=1e-12)

    def test_pure_bath_heat_rate_is_zero(self, rng):
        # A pure rho_B(0) pins beta to +inf, so the entropy-based heat rate
        # is zero regardless of the energy actually flowing.
        m = coupled_model(rng, 2, 4)
        rho0 = dynamics.product_state(random_density_matrix(rng, 2),
                                      np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex))
        traj = dynamics.evolve(m, rho0, dt=0.1, steps=4)
        assert ell_ledger.ell_heat_rate(traj, 0) == 0.0

    def test_undefined_when_beta_has_no_solution(self, rng):
        h_b = np.diag([0.0, 0.0, 1.0])
        m = dynamics.CompositeModel(dynamics.BipartiteSpace(2, 3),
                                    random_hermitian(rng, 2), h_b,
                                    random_hermitian(rng, 6, scale=0.1))
        rho_b = np.diag([0.9, 0.1, 0.0]).astype(complex)  # S_B < ln 2
        rho0 = dynamics.product_state(random_density_matrix(rng, 2), rho_b)
        traj = dynamics.evolve(m, rho0, dt=0.05, steps=3)
        with pytest.raises(UndefinedHeat):
            ell_ledger.ell_heat_rate(traj, 0)


class TestClausiusFunctional:
    def test_telescoped_equals_mutual_information(self, rng):
        # Product initial state: Sigma(t) = Delta S_A + Delta S_B = I_AB(t).
        traj = product_trajectory(rng, steps=40)
        sigma = ell_ledger.clausius_functional(traj)
        for k, rho_t in enumerate(traj.states):
            i_ab = qstate.mutual_information(rho_t, 2, 3)
            assert abs(sigma[k] - i_ab) < 1e-9

    def test_starts_at_zero_and_nonnegative_for_product_states(self, rng):
        traj = product_trajectory(rng, steps=25)
        sigma = ell_ledger.clausius_functional(traj)
        assert sigma[0] == 0.0
        assert np.all(sigma >= -1e-9)

    def test_quadrature_endpoint_telescopes_exactly(self, rng):
        # At the final grid point the trapezoid of central differences
        # telescopes, so quadrature and reference agree to roundoff there.
        traj = product_trajectory(rng, steps=50)
        led = ell_ledger.build_ell_ledger(traj)
        assert led.quadrature_defined[-1]
        assert abs(led.sigma_clausius_quadrature[-1] - led.sigma_clausius[-1]) < 1e-12

    def test_quadrature_converges_at_second_order(self, rng):
        # Interior-time quadrature error is O(dt^2): halving dt should
        # shrink the worst interior error by about 4x.
        m = coupled_model(rng, 2, 3)
        rho0 = dynamics.product_state(random_density_matrix(rng, 2),
                                      random_density_matrix(rng, 3))
        t_final, errors = 2.0, []
        for steps in (100, 200):
            traj = dynamics.evolve(m, rho0, dt=t_final / steps, steps=steps)
            led = ell_ledger.build_ell_ledger(traj)
            assert led.quadrature_defined.all()
            interior = slice(1, steps)
            errors.append(np.max(np.abs(
                led.sigma_clausius_quadrature[interior] - led.sigma_clausius[interior])))
        assert errors[1] < errors[0]
        ratio = errors[0] / errors[1]
        assert 2.5 < ratio < 6.0

    def test_invariant_under_local_basis_rotation(self, rng):
        # Conjugating H_B, V and rho_B(0) by the same unitary on B must
        # leave every entropy-derived series unchanged.
        d_a, d_b = 2, 3
        h_a = random_hermitian(rng, d_a)
        h_b = random_hermitian(rng, d_b)
        v = random_hermitian(rng, d_a * d_b, scale=0.5)
        rho_a = random_density_matrix(rng, d_a)
        rho_b = random_density_matrix(rng, d_b)
        u = random_unitary(rng, d_b)
        u_full = linalg.kron(np.eye(d_a), u)

        m1 = dynamics.CompositeModel(dynamics.BipartiteSpace(d_a, d_b), h_a, h_b, v)
        m2 = dynamics.CompositeModel(dynamics.BipartiteSpace(d_a, d_b), h_a,
                                     u @ h_b @ u.conj().T,
                                     u_full @ v @ u_full.conj().T)
        t1 = dynamics.evolve(m1, dynamics.product_state(rho_a, rho_b), 0.1, 20)
        t2 = dynamics.evolve(m2, dynamics.product_state(rho_a, u @ rho_b @ u.conj().T),
                             0.1, 20)
        l1 = ell_ledger.build_ell_ledger(t1)
        l2 = ell_ledger.build_ell_ledger(t2)
        assert np.max(np.abs(l1.sigma_clausius - l2.sigma_clausius)) < 1e-8
        b1 = np.array([s.beta for s in l1.betas])
        b2 = np.array([s.beta for s in l2.betas])
        assert np.max(np.abs(b1 - b2)) < 1e-6
        assert np.max(np.abs(l1.q_energy - l2.q_energy)) < 1e-8


class TestFixedBetaFunctional:
    def test_finite_case_matches_direct_formula(self, rng):
        traj = product_trajectory(rng, steps=25)
        led = ell_ledger.build_ell_ledger(traj)
        assert all(k == "finite" for k in led.sigma_fixed_kind)
        beta0 = led.betas[0].beta
        direct = (led.s_a - led.s_a[0]) - beta0 * led.q_b
        assert np.max(np.abs(led.sigma_fixed_beta - direct)) < 1e-12

    def test_pure_bath_is_divergent(self, rng):
        m = coupled_model(rng, 2, 4, scale=1.0)
        rho0 = dynamics.product_state(random_density_matrix(rng, 2),
                                      np.diag([0.0, 1.0, 0.0, 0.0]).astype(complex))
        traj = dynamics.evolve(m, rho0, dt=0.1, steps=30)
        led = ell_ledger.build_ell_ledger(traj)
        assert led.sigma_fixed_kind[0] == "indeterminate"  # no heat yet at t = 0
        assert "divergent" in led.sigma_fixed_kind
        for val, kind in zip(led.sigma_fixed_beta, led.sigma_fixed_kind):
            if kind != "finite":
                assert math.isnan(val)


class TestEnergyHeat:
    def test_sign_convention_and_oracle(self, rng):
        traj = product_trajectory(rng, steps=15)
        q = ell_ledger.energy_heat(traj)
        h_b = traj.model.h_b
        for k, red_b in enumerate(traj.reduced_b):
            e_k = np.trace(h_b @ red_b).real
            e_0 = np.trace(h_b @ traj.reduced_b[0]).real
            assert q[k] == pytest.approx(-(e_k - e_0), abs=1e-12)

    def test_zero_without_coupling(self, rng):
        m = dynamics.CompositeModel(dynamics.BipartiteSpace(2, 3),
                                    random_hermitian(rng, 2), random_hermitian(rng, 3),
                                    np.zeros((6, 6)))
        rho0 = dynamics.product_state(random_density_matrix(rng, 2),
                                      random_density_matrix(rng, 3))
        traj = dynamics.evolve(m, rho0, dt=0.2, steps=10)
        assert np.max(np.abs(ell_ledger.energy_heat(traj))) < 1e-10


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31))
def test_solver_residual_bounded_everywhere(seed):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(2, 8))
    w = np.sort(rng.standard_normal(dim))
    s_target = float(rng.uniform(0.0, math.log(dim)))
    sol = ell_ledger.solve_beta_from_spectrum(w, s_target)
    if sol.kind is BetaKind.FINITE:
        assert sol.residual < 1e-9
        assert 0.0 <= sol.beta < math.inf
