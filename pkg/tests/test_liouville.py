import numpy as np
import pytest

from rbreuse.liouville import (
    CompletenessError,
    EffectVec,
    KrausSet,
    NonUnitaryError,
    PauliTransferMatrix,
    ProbabilityBoundError,
    ShapeMismatchError,
    StateVec,
    apply,
    avg_fidelity,
    compose,
    expectation,
    ptm_from_kraus,
    ptm_from_unitary,
    quality_parameter,
    zeros_effect,
    zeros_state,
)

import oracles

I2 = np.eye(2, dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def amplitude_damping_ops(p):
    return (
        np.array([[1, 0], [0, np.sqrt(p)]], dtype=complex),
        np.array([[0, np.sqrt(1 - p)], [0, 0]], dtype=complex),
    )


def phase_damping_ops(p):
    return (
        np.array([[1, 0], [0, np.sqrt(p)]], dtype=complex),
        np.array([[0, 0], [0, np.sqrt(1 - p)]], dtype=complex),
    )


class TestPtmFromKraus:
    def test_identity(self):
        m = ptm_from_kraus(KrausSet(1, (I2,)))
        np.testing.assert_allclose(m.entries, np.eye(4), atol=1e-14)

    def test_amplitude_damping_known_entries(self):
        ops = amplitude_damping_ops(0.36)
        m = ptm_from_kraus(KrausSet(1, ops))
        expected = oracles.kraus_ptm_dense(list(ops))
        np.testing.assert_allclose(m.entries, expected, atol=1e-12)
        assert m.entries[0, 0] == pytest.approx(1.0)
        assert m.entries[1, 1] == pytest.approx(0.6)
        assert m.entries[2, 2] == pytest.approx(0.6)
        assert m.entries[3, 3] == pytest.approx(0.36)
        assert m.entries[3, 0] == pytest.approx(0.64)

    def test_phase_damping_diagonal(self):
        ops = phase_damping_ops(0.25)
        m = ptm_from_kraus(KrausSet(1, ops))
        np.testing.assert_allclose(m.entries, oracles.kraus_ptm_dense(list(ops)), atol=1e-12)
        np.testing.assert_allclose(np.diag(m.entries), [1.0, 0.5, 0.5, 1.0], atol=1e-12)

    def test_incomplete_kraus_rejected(self):
        with pytest.raises(CompletenessError):
            KrausSet(1, (0.5 * I2,))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ShapeMismatchError):
            KrausSet(2, (I2,))


class TestPtmFromUnitary:
    def test_identity(self):
        np.testing.assert_allclose(ptm_from_unitary(I2).entries, np.eye(4), atol=1e-14)

    def test_z_gate(self):
        m = ptm_from_unitary(Z)
        np.testing.assert_allclose(m.entries, oracles.unitary_ptm_dense(Z), atol=1e-12)
        np.testing.assert_allclose(np.diag(m.entries), [1, -1, -1, 1], atol=1e-14)

    def test_swap_exponential_is_permutation(self):
        u = oracles.swap_exponential(2, 0, 1, np.pi / 2)
        m = ptm_from_unitary(u)
        np.testing.assert_allclose(m.entries, oracles.unitary_ptm_dense(u), atol=1e-12)
        # a half-turn swap interaction is the SWAP channel: a 0/1 permutation
        np.testing.assert_allclose(np.abs(m.entries), np.round(np.abs(m.entries)), atol=1e-12)
        np.testing.assert_allclose(m.entries.sum(axis=0), np.ones(16), atol=1e-12)

    def test_orthogonality(self):
        rng = np.random.default_rng(3)
        gauss = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        u, _ = np.linalg.qr(gauss)
        m = ptm_from_unitary(u)
        np.testing.assert_allclose(m.entries.T @ m.entries, np.eye(16), atol=1e-10)

    def test_non_unitary_rejected(self):
        with pytest.raises(NonUnitaryError):
            ptm_from_unitary(np.array([[1, 0], [0, 0.5]], dtype=complex))


class TestApply:
    def test_identity_channel(self):
        s = zeros_state(2)
        out = apply(ptm_from_unitary(np.eye(4, dtype=complex)), s)
        np.testing.assert_allclose(out.coefficients, s.coefficients, atol=1e-14)

    def test_depolarizing_on_ground_state(self):
        p = 0.7
        diag = np.diag([1.0, p, p, p])
        m = PauliTransferMatrix(1, diag)
        out = apply(m, zeros_state(1))
        np.testing.assert_allclose(
            out.coefficients, [1 / np.sqrt(2), 0, 0, p / np.sqrt(2)], atol=1e-14
        )
        # density-matrix oracle
        rho = np.array([[1, 0], [0, 0]], dtype=complex)
        rho_out = p * rho + (1 - p) * np.eye(2) / 2
        np.testing.assert_allclose(
            out.coefficients, oracles.density_to_pauli_coeffs(rho_out), atol=1e-12
        )

    def test_z_channel_on_plus_state(self):
        plus = StateVec.from_density_matrix(np.array([[0.5, 0.5], [0.5, 0.5]]))
        out = apply(ptm_from_unitary(Z), plus)
        rho_out = oracles.apply_kraus([Z], np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex))
        np.testing.assert_allclose(
            out.coefficients, oracles.density_to_pauli_coeffs(rho_out), atol=1e-12
        )
        minus = StateVec.from_density_matrix(np.array([[0.5, -0.5], [-0.5, 0.5]]))
        np.testing.assert_allclose(out.coefficients, minus.coefficients, atol=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            apply(ptm_from_unitary(I2), zeros_state(2))


class TestCompose:
    def test_identity_neutral(self):
        ops = amplitude_damping_ops(0.5)
        m = ptm_from_kraus(KrausSet(1, ops))
        ident = ptm_from_unitary(I2)
        np.testing.assert_allclose(compose(m, ident).entries, m.entries, atol=1e-14)

    def test_z_squared_is_identity(self):
        mz = ptm_from_unitary(Z)
        np.testing.assert_allclose(compose(mz, mz).entries, np.eye(4), atol=1e-14)

    def test_matches_kraus_composition(self):
        la = amplitude_damping_ops(0.9)
        lp = phase_damping_ops(0.8)
        composed = compose(
            ptm_from_kraus(KrausSet(1, lp)), ptm_from_kraus(KrausSet(1, la))
        )
        # Kraus set of lp after la: all products E_i K_j
        products = [e @ k for e in lp for k in la]
        np.testing.assert_allclose(
            composed.entries, oracles.kraus_ptm_dense(products), atol=1e-12
        )


class TestExpectation:
    def test_projector_on_own_state(self):
        assert expectation(zeros_effect(1), zeros_state(1)) == pytest.approx(1.0)

    def test_maximally_mixed(self):
        mixed = StateVec.from_density_matrix(np.eye(2) / 2)
        assert expectation(zeros_effect(1), mixed) == pytest.approx(0.5)

    def test_swap_permutes_basis_states(self):
        rho01 = np.zeros((4, 4), dtype=complex)
        rho01[1, 1] = 1.0  # |01><01|
        s = StateVec.from_density_matrix(rho01)
        swapped = apply(ptm_from_unitary(oracles.swap_exponential(2, 0, 1, np.pi / 2)), s)
        assert expectation(zeros_effect(2), swapped) == pytest.approx(0.0, abs=1e-12)

    def test_out_of_range_rejected(self):
        q = EffectVec(1, np.array([1 / np.sqrt(2), 0.7, 0, 0]))
        bad = StateVec(1, np.array([1 / np.sqrt(2), -0.7, 0, 0]))
        with pytest.raises(ProbabilityBoundError):
            expectation(q, bad)


class TestQualityParameter:
    def test_identity(self):
        assert quality_parameter(ptm_from_unitary(I2)) == pytest.approx(1.0)

    def test_depolarizing_defining_property(self):
        for p in (0.0, 0.3, 1.0):
            m = PauliTransferMatrix(1, np.diag([1.0, p, p, p]))
            assert quality_parameter(m) == pytest.approx(p)

    def test_amplitude_damping_against_haar_oracle(self):
        ops = list(amplitude_damping_ops(0.36))
        f = quality_parameter(ptm_from_kraus(KrausSet(1, ops)))
        assert f == pytest.approx(0.52, abs=1e-12)
        f_avg_mc = oracles.haar_average_fidelity(ops, 1, 200_000, np.random.default_rng(11))
        f_from_mc = (f_avg_mc * 2 - 1) / (2 - 1 / 2) / 2 * 3  # invert F = f + (1-f)/d, d=2
        assert avg_fidelity(f, 1) == pytest.approx(f_avg_mc, abs=3e-3)
        assert f_from_mc == pytest.approx(f, abs=5e-3)


class TestAvgFidelity:
    def test_mapping(self):
        assert avg_fidelity(1.0, 1) == pytest.approx(1.0)
        assert avg_fidelity(0.0, 1) == pytest.approx(0.5)
        assert avg_fidelity(0.52, 1) == pytest.approx(0.76)


class TestInvariantsAndProperties:
    def test_round_trip_identity(self):
        assert quality_parameter(ptm_from_unitary(I2)) == 1.0

    def test_compose_associative_on_random_cptp(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            mats = [
                ptm_from_kraus(KrausSet(1, tuple(oracles.random_kraus_set(1, 2, rng))))
                for _ in range(3)
            ]
            left = compose(compose(mats[0], mats[1]), mats[2])
            right = compose(mats[0], compose(mats[1], mats[2]))
            np.testing.assert_allclose(left.entries, right.entries, atol=1e-12)

    def test_apply_compose_consistency(self):
        rng = np.random.default_rng(6)
        a = ptm_from_kraus(KrausSet(1, tuple(oracles.random_kraus_set(1, 3, rng))))
        b = ptm_from_kraus(KrausSet(1, tuple(oracles.random_kraus_set(1, 2, rng))))
        s = zeros_state(1)
        via_compose = apply(compose(a, b), s)
        via_steps = apply(a, apply(b, s))
        np.testing.assert_allclose(
            via_compose.coefficients, via_steps.coefficients, atol=1e-12
        )

    def test_probabilities_in_range_for_random_pure_states(self):
        rng = np.random.default_rng(7)
        channel = ptm_from_kraus(KrausSet(1, tuple(oracles.random_kraus_set(1, 3, rng))))
        q = zeros_effect(1)
        for _ in range(1000):
            v = oracles.haar_state(2, rng)
            s = StateVec.from_density_matrix(np.outer(v, v.conj()))
            p = expectation(q, apply(channel, s))
            assert -1e-9 <= p <= 1 + 1e-9

    def test_kraus_equals_unitary_for_single_operator(self):
        rng = np.random.default_rng(8)
        gauss = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        u, _ = np.linalg.qr(gauss)
        np.testing.assert_allclose(
            ptm_from_kraus(KrausSet(1, (u,))).entries,
            ptm_from_unitary(u).entries,
            atol=1e-12,
        )


class TestVectorTypes:
    def test_state_requires_unit_trace(self):
        with pytest.raises(ValueError):
            StateVec(1, np.array([0.5, 0, 0, 0]))

    def test_effect_eigenvalue_bound(self):
        with pytest.raises(ValueError):
            EffectVec(1, np.array([2.0, 0, 0, 0]))  # Tr Q = 2 sqrt(2) > allowed

    def test_effect_trace(self):
        assert zeros_effect(2).trace() == pytest.approx(1.0)
        assert EffectVec.from_matrix(np.eye(4)).trace() == pytest.approx(4.0)

    def test_zeros_presets(self):
        s = zeros_state(2)
        assert s.coefficients[0] == pytest.approx(0.5)
        np.testing.assert_allclose(
            s.to_density_matrix(), np.diag([1.0, 0, 0, 0]), atol=1e-14
        )
