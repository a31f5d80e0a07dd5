import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entroledger import linalg, qstate
from entroledger.errors import IncompatibleDimension, InvalidState

from conftest import random_density_matrix, random_hermitian, random_unitary


class TestVonNeumannEntropy:
    def test_pure_state(self):
        assert qstate.von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0

    def test_maximally_mixed_qubit(self):
        assert qstate.von_neumann_entropy(np.eye(2) / 2) == pytest.approx(math.log(2))

    def test_diagonal_closed_form(self):
        rho = np.diag([0.5, 0.25, 0.25])
        assert qstate.von_neumann_entropy(rho) == pytest.approx(1.5 * math.log(2))

    def test_unitary_invariance(self, rng):
        rho = random_density_matrix(rng, 5)
        u = random_unitary(rng, 5)
        s1 = qstate.von_neumann_entropy(rho)
        s2 = qstate.von_neumann_entropy(u @ rho @ u.conj().T)
        assert abs(s1 - s2) < 1e-9

    def test_bounded_by_log_dim(self, rng):
        for _ in range(10):
            s = qstate.von_neumann_entropy(random_density_matrix(rng, 7))
            assert -1e-12 <= s <= math.log(7) + 1e-9

    def test_rejects_negative_eigenvalues(self):
        with pytest.raises(InvalidState):
            qstate.von_neumann_entropy(np.diag([1.1, -0.1]))


class TestGibbsState:
    def test_infinite_temperature(self, rng):
        g = qstate.gibbs_state(random_hermitian(rng, 5), beta=0.0)
        assert np.max(np.abs(g.state - np.eye(5) / 5)) < 1e-12

    def test_closed_form_partition_function(self):
        g = qstate.gibbs_state(np.diag([0.0, 1.0]), beta=math.log(3.0))
        assert np.allclose(np.diagonal(g.state).real, [0.75, 0.25])

    def test_ground_space_limit_with_degeneracy(self):
        g = qstate.gibbs_state(np.diag([0.0, 0.0, 1.0]), beta=math.inf)
        assert np.allclose(g.state, np.diag([0.5, 0.5, 0.0]))

    def test_commutes_with_hamiltonian(self, rng):
        h = random_hermitian(rng, 6)
        g = qstate.gibbs_state(h, beta=1.3)
        assert np.max(np.abs(h @ g.state - g.state @ h)) < 1e-9

    def test_state_is_valid(self, rng):
        g = qstate.gibbs_state(random_hermitian(rng, 4), beta=2.0)
        qstate.validate_density_matrix(g.state)


class TestGibbsEntropyCurve:
    def test_infinite_temperature_entropy(self, rng):
        h = random_hermitian(rng, 9)
        assert qstate.gibbs_entropy_curve(h, 0.0) == pytest.approx(math.log(9))

    def test_qubit_binary_entropy(self):
        h = np.diag([0.0, 1.0])
        assert qstate.gibbs_entropy_curve(h, 0.0) == pytest.approx(math.log(2))
        p = 1.0 / (1.0 + math.exp(-2.0))
        expected = -p * math.log(p) - (1 - p) * math.log(1 - p)
        assert qstate.gibbs_entropy_curve(h, 2.0) == pytest.approx(expected, abs=1e-12)

    def test_slope_matches_energy_variance(self, rng):
        # dS/dbeta = -beta Var(H), checked by central finite differences.
        w = np.sort(rng.uniform(-1.0, 1.0, size=5))
        h = np.diag(w)
        beta, eps = 0.7, 1e-5
        fd = (qstate.gibbs_entropy_curve(h, beta + eps)
              - qstate.gibbs_entropy_curve(h, beta - eps)) / (2 * eps)
        closed = -beta * qstate.gibbs_energy_variance(w, beta)
        assert abs(fd - closed) < 1e-6

    def test_non_increasing_in_beta(self, rng):
        w = np.sort(rng.standard_normal(6))
        values = [qstate.gibbs_entropy_from_spectrum(w, b)
                  for b in np.linspace(0.0, 20.0, 60)]
        assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))

    def test_ground_degeneracy_limit(self):
        w = np.array([0.0, 0.0, 0.0, 2.0])
        assert qstate.gibbs_entropy_from_spectrum(w, math.inf) == pytest.approx(math.log(3))


class TestMutualInformation:
    def test_product_state(self, rng):
        rho = linalg.kron(random_density_matrix(rng, 2), random_density_matrix(rng, 3))
        assert abs(qstate.mutual_information(rho, 2, 3)) < 1e-10

    def test_bell_state(self):
        psi = np.zeros(4, dtype=complex)
        psi[0] = psi[3] = 1.0 / math.sqrt(2.0)
        rho = np.outer(psi, psi.conj())
        assert qstate.mutual_information(rho, 2, 2) == pytest.approx(2 * math.log(2))

    def test_pure_bipartite_is_twice_reduced_entropy(self, rng):
        psi = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        psi /= np.linalg.norm(psi)
        rho = np.outer(psi, psi.conj())
        s_a = qstate.von_neumann_entropy(linalg.partial_trace(rho, 2, 3, "A"))
        assert qstate.mutual_information(rho, 2, 3) == pytest.approx(2 * s_a, abs=1e-9)

    def test_upper_bound(self, rng):
        for _ in range(20):
            rho = random_density_matrix(rng, 6)
            i_ab = qstate.mutual_information(rho, 2, 3)
            assert -1e-9 <= i_ab <= 2 * math.log(2) + 1e-9


class TestObservationalEntropy:
    def test_eigenbasis_recovers_von_neumann(self, rng):
        rho = random_density_matrix(rng, 4)
        cg = qstate.eigenbasis_coarse_graining(rho)
        assert qstate.observational_entropy(rho, cg) == pytest.approx(
            qstate.von_neumann_entropy(rho), abs=1e-10)

    def test_identity_coarse_graining(self, rng):
        rho = random_density_matrix(rng, 5)
        cg = qstate.identity_coarse_graining(5)
        assert qstate.observational_entropy(rho, cg) == pytest.approx(math.log(5))

    def test_block_coarse_graining_matches_direct_formula(self, rng):
        rho = random_density_matrix(rng, 4)
        p1 = np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex)
        p2 = np.diag([0.0, 0.0, 1.0, 1.0]).astype(complex)
        cg = qstate.CoarseGraining(projectors=(p1, p2))
        # Trace-based oracle with independently computed block weights.
        q1 = float(np.trace(p1 @ rho).real)
        q2 = float(np.trace(p2 @ rho).real)
        expected = q1 * (math.log(2) - math.log(q1)) + q2 * (math.log(2) - math.log(q2))
        assert qstate.observational_entropy(rho, cg) == pytest.approx(expected, abs=1e-12)

    def test_dimension_check(self, rng):
        with pytest.raises(IncompatibleDimension):
            qstate.observational_entropy(random_density_matrix(rng, 3),
                                         qstate.identity_coarse_graining(4))


class TestEnergyCoarseGraining:
    def test_single_bin_is_identity(self, rng):
        cg = qstate.energy_coarse_graining(random_hermitian(rng, 5), 1)
        assert len(cg.projectors) == 1
        assert np.allclose(cg.projectors[0], np.eye(5))

    def test_one_bin_per_level(self):
        h = np.diag(np.arange(6, dtype=float))
        cg = qstate.energy_coarse_graining(h, 6)
        assert cg.volumes == (1,) * 6

    def test_equally_spaced_eight_levels_four_bins(self):
        h = np.diag(np.arange(8, dtype=float))
        cg = qstate.energy_coarse_graining(h, 4)
        assert cg.volumes == (2, 2, 2, 2)
        # Bin-assignment oracle: adjacent level pairs share a bin.
        for k, proj in enumerate(cg.projectors):
            assert np.allclose(np.diagonal(proj).real[2 * k:2 * k + 2], 1.0)

    def test_degenerate_cluster_never_split(self):
        h = np.diag([0.0, 1.0, 1.0, 2.0])
        cg = qstate.energy_coarse_graining(h, 3)
        assert sorted(cg.volumes) == [1, 1, 2]

    def test_completeness(self, rng):
        cg = qstate.energy_coarse_graining(random_hermitian(rng, 7), 3)
        total = sum(cg.projectors)
        assert np.max(np.abs(total - np.eye(7))) < 1e-10
        assert sum(cg.volumes) == 7


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31))
def test_observational_entropy_dominates_von_neumann(seed):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(2, 7))
    rho = random_density_matrix(rng, dim)
    cg = qstate.energy_coarse_graining(random_hermitian(rng, dim),
                                       int(rng.integers(1, dim + 1)))
    s_obs = qstate.observational_entropy(rho, cg)
    assert s_obs >= qstate.von_neumann_entropy(rho) - 1e-9
    assert s_obs <= math.log(dim) + 1e-9
