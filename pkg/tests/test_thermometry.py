import numpy as np
import pytest
import scipy.linalg

from quthermo import (
    DensityMatrix,
    DomainError,
    NumericalError,
    SubsystemLayout,
    TwoQubitXYZParams,
    UsageError,
    build_chain,
    build_two_qubit,
    classical_fisher,
    conditional_state,
    gibbs,
    greedy_locc_qfi,
    greedy_scheme,
    heat_capacity,
    local_qfi,
    optimal_local_measurement,
    precision_loss,
    qfi_fidelity_difference,
    qfi_general,
    qfi_gibbs,
)
from quthermo.derivatives import central_derivative
from quthermo.models import ChainParams, PAULI_Z
from quthermo.thermometry import GibbsFamily

from conftest import FIG2A_PARAMS, random_hermitian, wrap_hamiltonian

FIELD_QUBIT = wrap_hamiltonian(0.5 * 1.7 * PAULI_Z)  # (1/2) B Z with B = 1.7


def sech(x):
    return 1.0 / np.cosh(x)


class TestGibbs:
    def test_zero_hamiltonian(self):
        ens = gibbs(wrap_hamiltonian(np.zeros((4, 4)), (2, 2)), 3.0)
        assert np.allclose(ens.state.matrix, np.eye(4) / 4)

    def test_single_qubit_analytic(self):
        b, t = 1.7, 0.8
        ens = gibbs(FIELD_QUBIT, t)
        z = 2 * np.cosh(b / (2 * t))
        expected = np.diag([np.exp(-b / (2 * t)), np.exp(b / (2 * t))]) / z
        assert np.allclose(ens.state.matrix, expected)
        assert ens.log_partition == pytest.approx(np.log(z))

    def test_fig2a_xstate_against_expm_oracle(self, fig2a_model):
        ens = gibbs(fig2a_model, 1.0)
        oracle = scipy.linalg.expm(-fig2a_model.total.matrix / 1.0)
        oracle /= oracle.trace()
        assert np.max(np.abs(ens.state.matrix - oracle)) <= 1e-12
        # X-state sparsity: off-diagonal support on the anti-diagonal only
        m = ens.state.matrix
        for i in range(4):
            for j in range(4):
                if i != j and i + j != 3:
                    assert abs(m[i, j]) <= 1e-12

    def test_high_t_limit(self, fig2a_model):
        ens = gibbs(fig2a_model, 1e6)
        assert np.max(np.abs(ens.state.matrix - np.eye(4) / 4)) <= 1e-6

    def test_rejects_nonpositive_temperature(self, fig2a_model):
        with pytest.raises(DomainError):
            gibbs(fig2a_model, 0.0)

    def test_overflow_guard_at_tiny_temperature(self, fig2a_model):
        ens = gibbs(fig2a_model, 1e-3)
        assert np.isfinite(ens.state.matrix).all()
        assert ens.state.matrix.trace().real == pytest.approx(1.0)


class TestHeatCapacity:
    def test_zero_hamiltonian(self):
        assert heat_capacity(gibbs(wrap_hamiltonian(np.zeros((2, 2))), 1.0)) == 0.0

    def test_single_qubit_analytic(self):
        b = 1.7
        for t in (0.5, 2.0):
            c = heat_capacity(gibbs(FIELD_QUBIT, t))
            assert c == pytest.approx((b / (2 * t)) ** 2 * sech(b / (2 * t)) ** 2, rel=1e-12)

    def test_against_energy_derivative_oracle(self, fig2a_model):
        t = 2.0
        fam = GibbsFamily(fig2a_model)
        h = fig2a_model.total.matrix

        def energy(s):
            return float(np.real(np.trace(fam(s) @ h)))

        oracle = central_derivative(energy, t)
        c = heat_capacity(gibbs(fig2a_model, t))
        assert c > 0
        assert c == pytest.approx(oracle, rel=1e-9)


class TestQfi:
    def test_zero_hamiltonian(self):
        assert qfi_gibbs(gibbs(wrap_hamiltonian(np.zeros((2, 2))), 1.0)) == 0.0

    def test_single_qubit_analytic(self):
        b = 1.7
        for t in (0.5, 2.0, 10.0):
            f = qfi_gibbs(gibbs(FIELD_QUBIT, t))
            expected = (b / 2) ** 2 * sech(b / (2 * t)) ** 2 / t**4
            assert f == pytest.approx(expected, rel=1e-12)

    def test_general_route_matches_gibbs_route(self, rng):
        for d in (2, 4, 8):
            model = wrap_hamiltonian(random_hermitian(d, rng))
            fam = GibbsFamily(model)
            t = 1.3 * np.linalg.norm(model.total.matrix, 2)
            a = qfi_gibbs(gibbs(model, t))
            b = qfi_general(fam, t)
            assert b == pytest.approx(a, rel=1e-8)

    def test_constant_family_is_zero(self):
        rho = np.diag([0.6, 0.4])
        assert qfi_general(lambda t: rho, 2.0) == pytest.approx(0.0, abs=1e-12)

    def test_fidelity_difference_oracle_on_reduced_family(self, fig2a_model):
        # reduced state of A is not thermal; the two general routes must agree
        fam = GibbsFamily(fig2a_model)
        from quthermo.linalg import ptrace

        reduced = lambda s: ptrace(fam(s), (2, 2), [0])
        a = qfi_general(reduced, 2.0)
        b = qfi_fidelity_difference(reduced, 2.0)
        assert b == pytest.approx(a, rel=1e-6)

    def test_three_way_agreement_random(self, rng):
        model = wrap_hamiltonian(random_hermitian(8, rng))
        fam = GibbsFamily(model)
        t = 2.0 * np.linalg.norm(model.total.matrix, 2)
        a = qfi_gibbs(gibbs(model, t))
        b = qfi_general(fam, t)
        c = qfi_fidelity_difference(fam, t)
        assert b == pytest.approx(a, rel=1e-6)
        assert c == pytest.approx(a, rel=1e-6)

    def test_degenerate_family_raises(self):
        with pytest.raises(NumericalError):
            qfi_general(lambda t: np.zeros((2, 2), dtype=complex), 1.0)

    def test_t4_scaled_qfi_approaches_spectral_variance(self, fig2a_model):
        from quthermo import build_chain, build_xy_anisotropy
        from quthermo.models import ChainParams

        for model in (
            fig2a_model,
            build_chain(ChainParams(3, 1.0, 1.0, 0.3)),
            build_xy_anisotropy(1.0, 0.5, 0.7),
        ):
            t = 100.0 * model.spectral_norm()
            w = np.linalg.eigvalsh(model.total.matrix)
            var = np.mean(w**2) - np.mean(w) ** 2
            assert t**4 * qfi_gibbs(gibbs(model, t)) == pytest.approx(var, rel=0.02)


class TestLocalQfi:
    def test_product_hamiltonian_factorizes(self):
        model = build_two_qubit(TwoQubitXYZParams(b1=1.7, b2=0.6))
        t = 1.1
        f_local = local_qfi(gibbs(model, t), 0)
        factor = qfi_gibbs(gibbs(FIELD_QUBIT, t))
        assert f_local == pytest.approx(factor, rel=1e-9)

    def test_bounded_by_global(self, fig2a_model):
        ens = gibbs(fig2a_model, 2.0)
        f_local = local_qfi(ens, 0)
        assert 0 < f_local <= qfi_gibbs(ens) + 1e-8

    def test_zero_hamiltonian(self):
        ens = gibbs(wrap_hamiltonian(np.zeros((4, 4)), (2, 2)), 1.0)
        assert local_qfi(ens, 0) == pytest.approx(0.0, abs=1e-12)

    def test_invalid_subsystem(self, fig2a_model):
        with pytest.raises(UsageError):
            local_qfi(gibbs(fig2a_model, 1.0), 5)


class TestOptimalMeasurement:
    @staticmethod
    def _is_computational(basis):
        # projector sets are order-free: |basis| must be a permutation matrix
        perm = np.abs(basis)
        return (
            np.allclose(perm @ perm.T, np.eye(len(perm)), atol=1e-10)
            and np.allclose(perm.max(axis=0), 1.0, atol=1e-10)
        )

    def test_diagonal_state_gives_computational_basis(self):
        ising = build_two_qubit(TwoQubitXYZParams(b1=3.0, b2=1.0, jz=2.0))
        ens = gibbs(ising, 1.0)
        for mode in ("sld_eigenbasis", "reduced_state_eigenbasis"):
            assert self._is_computational(optimal_local_measurement(ens, 0, mode).basis)

    def test_product_hamiltonian_gives_local_factor_basis(self):
        model = build_two_qubit(TwoQubitXYZParams(b1=1.7, b2=0.6))
        ens = gibbs(model, 0.9)
        for mode in ("sld_eigenbasis", "reduced_state_eigenbasis"):
            assert self._is_computational(optimal_local_measurement(ens, 0, mode).basis)

    def _outcome_cfi(self, model, basis, t):
        fam = GibbsFamily(model)
        from quthermo.linalg import ptrace

        def probs(s):
            red = ptrace(fam(s), (2, 2), [0])
            return np.array(
                [float(np.real(basis[:, k].conj() @ red @ basis[:, k])) for k in range(2)]
            )

        return classical_fisher(probs, t)

    def test_sld_mode_saturates_local_qfi(self, fig2a_model):
        t = 2.0
        ens = gibbs(fig2a_model, t)
        ps = optimal_local_measurement(ens, 0, "sld_eigenbasis")
        cfi = self._outcome_cfi(fig2a_model, ps.basis, t)
        assert cfi == pytest.approx(local_qfi(ens, 0), rel=1e-6)

    def test_modes_agree_at_high_temperature(self, fig2a_model):
        t = 100.0
        ens = gibbs(fig2a_model, t)
        values = [
            self._outcome_cfi(fig2a_model, optimal_local_measurement(ens, 0, mode).basis, t)
            for mode in ("sld_eigenbasis", "reduced_state_eigenbasis")
        ]
        assert values[0] == pytest.approx(values[1], rel=1e-3)

    def test_unknown_mode_rejected(self, fig2a_model):
        with pytest.raises(UsageError):
            optimal_local_measurement(gibbs(fig2a_model, 1.0), 0, "bogus")


class TestConditionalState:
    def test_product_state_unchanged(self):
        model = build_two_qubit(TwoQubitXYZParams(b1=1.7, b2=0.6))
        ens = gibbs(model, 1.0)
        rho_b = np.diag(np.diag(ens.state.matrix.reshape(2, 2, 2, 2)[0, :, 0, :]))
        for k in (0, 1):
            proj = np.zeros((2, 2), dtype=complex)
            proj[k, k] = 1.0
            p, cond = conditional_state(ens, proj)
            expected = gibbs(wrap_hamiltonian(0.5 * 0.6 * PAULI_Z), 1.0).state.matrix
            assert np.allclose(cond.matrix, expected, atol=1e-12)

    def test_bell_state(self):
        psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
        bell = DensityMatrix(np.outer(psi, psi), SubsystemLayout((2, 2)))
        p, cond = conditional_state(bell, np.diag([1.0, 0.0]).astype(complex))
        assert p == pytest.approx(0.5)
        assert np.allclose(cond.matrix, np.diag([1.0, 0.0]))

    def test_fig2a_against_contraction_oracle(self, fig2a_model):
        ens = gibbs(fig2a_model, 1.0)
        ps = optimal_local_measurement(ens, 0, "reduced_state_eigenbasis")
        v = ps.vector(0)
        p, cond = conditional_state(ens, np.outer(v, v.conj()))
        # independent loop contraction
        rho = ens.state.matrix.reshape(2, 2, 2, 2)
        m = np.zeros((2, 2), dtype=complex)
        for a in range(2):
            for c in range(2):
                m += np.conj(v[a]) * v[c] * rho[a, :, c, :]
        assert p == pytest.approx(float(m.trace().real), abs=1e-14)
        assert np.allclose(cond.matrix, m / m.trace(), atol=1e-12)
        # completeness: probabilities over the set sum to one
        total = sum(
            conditional_state(ens, np.outer(ps.vector(k), ps.vector(k).conj()))[0]
            for k in range(2)
        )
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_zero_probability_outcome_excluded(self):
        up = np.kron(np.diag([1.0, 0.0]), np.diag([0.5, 0.5]))
        rho = DensityMatrix(up, SubsystemLayout((2, 2)))
        p, cond = conditional_state(rho, np.diag([0.0, 1.0]).astype(complex))
        assert p < 1e-14
        assert cond is None

    def test_wrong_projector_shape(self, fig2a_model):
        with pytest.raises(UsageError):
            conditional_state(gibbs(fig2a_model, 1.0), np.eye(4))


class TestGreedyScheme:
    def test_product_hamiltonian_has_no_loss(self):
        model = build_two_qubit(TwoQubitXYZParams(b1=1.7, b2=0.6))
        ens = gibbs(model, 1.2)
        assert precision_loss(ens) == pytest.approx(0.0, abs=1e-10)

    def test_ising_has_no_loss(self):
        model = build_two_qubit(TwoQubitXYZParams(b1=3.0, b2=1.0, jz=2.0))
        for t in (0.5, 2.0, 10.0):
            assert abs(precision_loss(gibbs(model, t))) <= 1e-10

    def test_fig2a_high_t_correction(self, fig2a_model):
        t = 100.0
        ens = gibbs(fig2a_model, t)
        correction = (FIG2A_PARAMS.jx**2 + FIG2A_PARAMS.jy**2) / (4 * t**4)
        got = qfi_gibbs(ens) - greedy_locc_qfi(ens)
        assert got == pytest.approx(correction, rel=0.05)

    def test_monotonicity(self, fig2a_model):
        for t in (0.7, 2.0, 10.0):
            ens = gibbs(fig2a_model, t)
            f_a = local_qfi(ens, 0)
            f_locc = greedy_locc_qfi(ens)
            f_ab = qfi_gibbs(ens)
            assert f_a <= f_locc + 1e-8
            assert f_locc <= f_ab + 1e-8

    def test_step_terms_and_leaves(self, fig2a_model):
        scheme = greedy_scheme(gibbs(fig2a_model, 2.0))
        assert scheme.path == (0, 1)
        assert len(scheme.steps) == 2
        assert len(scheme.leaves) == 4
        assert sum(leaf.probability for leaf in scheme.leaves) == pytest.approx(1.0, abs=1e-12)

    def test_reversed_path(self, fig2a_model):
        ens = gibbs(fig2a_model, 2.0)
        rev = greedy_locc_qfi(ens, (1, 0))
        assert 0 < rev <= qfi_gibbs(ens) + 1e-8

    def test_invalid_path(self, fig2a_model):
        with pytest.raises(UsageError):
            greedy_locc_qfi(gibbs(fig2a_model, 1.0), (0, 0))


class TestClassicalFisher:
    def test_constant_distribution(self):
        assert classical_fisher(lambda t: np.array([0.5, 0.5]), 1.0) == pytest.approx(0.0)

    def test_single_qubit_energy_measurement_is_optimal(self):
        b = 1.7

        def populations(t):
            z = 2 * np.cosh(b / (2 * t))
            return np.array([np.exp(-b / (2 * t)), np.exp(b / (2 * t))]) / z

        for t in (0.5, 2.0):
            cfi = classical_fisher(populations, t)
            assert cfi == pytest.approx(qfi_gibbs(gibbs(FIELD_QUBIT, t)), rel=1e-9)

    @pytest.mark.parametrize("mode", ["sld_eigenbasis", "reduced_state_eigenbasis"])
    def test_joint_chain_rule(self, fig2a_model, mode):
        # joint outcome distribution over all pairs equals the step sum,
        # whichever basis convention freezes the measurements
        t = 2.0
        ens = gibbs(fig2a_model, t)
        scheme = greedy_scheme(ens, mode=mode)
        fam = GibbsFamily(fig2a_model)

        def joint(s):
            rho = fam(s)
            ps = []
            for leaf in scheme.leaves:
                full = np.kron(leaf.vectors[0], leaf.vectors[1])
                ps.append(float(np.real(full.conj() @ rho @ full)))
            return np.array(ps)

        assert classical_fisher(joint, t) == pytest.approx(scheme.fisher_total, rel=1e-8)

    def test_rejects_unnormalized(self):
        with pytest.raises(UsageError):
            classical_fisher(lambda t: np.array([0.5, 0.4]), 1.0)
