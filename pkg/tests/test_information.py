"""Coherent- and semiclassical-information tests."""

import math

import numpy as np
import pytest

from conftest import binary_entropy, rand_correlation, rand_density, rand_unitary

from softmeas.errors import (
    DimensionMismatch,
    InvalidChannel,
    InvalidMeasurement,
    InvalidParams,
    OutOfRange,
)
from softmeas.information import (
    CompetitionParams,
    KrausChannel,
    StateEnsemble,
    choi_matrix,
    coherent_info_channel,
    coherent_info_soft,
    coherent_info_two_level,
    compete_coherent,
    compete_two_level,
    eve_bob_semiclassical,
    holevo_info,
    kraus_from_choi,
    meter_ensemble,
    semiclassical_info_continuous,
    soft_object_channel,
)
from softmeas.matcore import partial_trace, von_neumann_entropy
from softmeas.measurement import SoftMeasurement, apply_soft, meter_states_from_gram
from softmeas.repeated import ContinuousLimitParams, continuous_gram_sqrt


def qubit_state(p, mu, phase=0.0):
    off = mu * math.sqrt(p * (1.0 - p)) * np.exp(1j * phase)
    return np.array([[p, off], [np.conj(off), 1.0 - p]])


def rand_channel(rng, in_dim, out_dim, n_kraus):
    """Random trace-preserving channel from a randomly sliced isometry."""
    big = rand_unitary(rng, out_dim * n_kraus)
    iso = big[:, :in_dim]
    ops = tuple(iso[a * out_dim : (a + 1) * out_dim, :] for a in range(n_kraus))
    return KrausChannel(ops)


class TestKrausChannel:
    def test_identity_channel_is_valid(self):
        ch = KrausChannel((np.eye(2),))
        ch.validate()
        rng = np.random.default_rng(60)
        rho = rand_density(rng, 2)
        np.testing.assert_allclose(ch.apply(rho), rho, atol=1e-14)

    def test_non_trace_preserving_rejected(self):
        with pytest.raises(InvalidChannel):
            KrausChannel((0.5 * np.eye(2),)).validate()

    def test_random_channels_are_trace_preserving(self):
        rng = np.random.default_rng(61)
        for in_dim, out_dim, n_kraus in ((2, 2, 2), (3, 2, 3), (2, 4, 2)):
            ch = rand_channel(rng, in_dim, out_dim, n_kraus)
            ch.validate()
            rho = rand_density(rng, in_dim)
            assert abs(np.trace(ch.apply(rho)) - 1.0) < 1e-12


class TestChoiRoundTrip:
    def test_identity_choi_is_maximally_entangled(self):
        j = choi_matrix(KrausChannel((np.eye(2),)))
        omega = np.eye(2).reshape(-1)
        np.testing.assert_allclose(j, np.outer(omega, omega), atol=1e-14)

    def test_choi_to_kraus_keeps_channel_action(self):
        rng = np.random.default_rng(62)
        for in_dim, out_dim, n_kraus in ((2, 2, 3), (3, 3, 2), (2, 3, 2)):
            ch = rand_channel(rng, in_dim, out_dim, n_kraus)
            rebuilt = kraus_from_choi(choi_matrix(ch), in_dim, out_dim)
            rebuilt.validate()
            for _ in range(3):
                rho = rand_density(rng, in_dim)
                np.testing.assert_allclose(
                    rebuilt.apply(rho), ch.apply(rho), atol=1e-10
                )


class TestSoftObjectChannel:
    def test_action_is_entrywise_multiplication(self):
        rng = np.random.default_rng(63)
        for dim in (2, 3):
            ent = rand_correlation(rng, dim)
            gram = rand_correlation(rng, dim)
            ch = soft_object_channel(ent, gram)
            ch.validate()
            rho = rand_density(rng, dim)
            np.testing.assert_allclose(ch.apply(rho), ent * gram * rho, atol=1e-11)

    def test_real_instances_match_joint_state_reduction(self):
        rng = np.random.default_rng(64)
        for dim in (2, 3):
            ent = rand_correlation(rng, dim, real=True)
            gram = rand_correlation(rng, dim, real=True)
            rho = rand_density(rng, dim)
            joint = apply_soft(SoftMeasurement(ent, gram), rho)
            reduced = partial_trace(joint, [dim, dim], keep=0)
            ch = soft_object_channel(ent, gram)
            np.testing.assert_allclose(ch.apply(rho), reduced, atol=1e-11)

    def test_invalid_matrices_rejected(self):
        with pytest.raises(InvalidMeasurement):
            soft_object_channel(np.array([[1.0, 1.2], [1.2, 1.0]]), np.eye(2))


class TestCoherentInfoChannel:
    def test_identity_channel_returns_input_entropy(self):
        rng = np.random.default_rng(65)
        rho = rand_density(rng, 3)
        ch = KrausChannel((np.eye(3),))
        assert coherent_info_channel(ch, rho) == pytest.approx(
            von_neumann_entropy(rho), abs=1e-10
        )

    def test_replace_with_pure_state_is_minus_one(self):
        # K_a = |0><a| traces the input away and outputs |0><0|
        ops = tuple(np.outer([1.0, 0.0], row) for row in np.eye(2))
        ch = KrausChannel(ops)
        assert coherent_info_channel(ch, np.eye(2) / 2.0) == pytest.approx(-1.0, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            coherent_info_channel(KrausChannel((np.eye(2),)), np.eye(3) / 3.0)


class TestCoherentInfoSoft:
    def test_fully_coherent_measurement_keeps_input_entropy(self):
        rng = np.random.default_rng(66)
        rho = rand_density(rng, 3)
        ones = np.ones((3, 3))
        assert coherent_info_soft(rho, ones, ones) == pytest.approx(
            von_neumann_entropy(rho), abs=1e-10
        )

    def test_sharp_measurement_destroys_coherent_info(self):
        rng = np.random.default_rng(67)
        rho = rand_density(rng, 3)
        assert coherent_info_soft(rho, np.eye(3), np.eye(3)) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_matches_channel_oracle(self):
        rng = np.random.default_rng(68)
        for _ in range(20):
            for dim in (2, 3):
                rho = rand_density(rng, dim)
                ent = rand_correlation(rng, dim)
                gram = rand_correlation(rng, dim)
                closed = coherent_info_soft(rho, ent, gram)
                oracle = coherent_info_channel(soft_object_channel(ent, gram), rho)
                assert closed == pytest.approx(oracle, abs=1e-8)

    def test_invalid_measurement_rejected(self):
        with pytest.raises(InvalidMeasurement):
            coherent_info_soft(np.eye(2) / 2.0, np.array([[1.0, 1.5], [1.5, 1.0]]), np.eye(2))


class TestCoherentInfoTwoLevel:
    def test_sharp_mixed_input_transfers_one_bit(self):
        assert coherent_info_two_level(1.0, 0.5, 0.0) == 1.0

    def test_vanishes_without_any_transmission(self):
        for p in (0.0, 0.3, 0.5, 1.0):
            for mu in (0.0, 0.5, 1.0):
                assert coherent_info_two_level(0.0, p, mu) == 0.0

    def test_pure_input_carries_nothing(self):
        assert coherent_info_two_level(1.0, 0.5, 1.0) == 0.0

    def test_matches_matrix_form_on_grid(self):
        grid = np.linspace(0.0, 1.0, 6)
        for q in grid:
            for p in grid:
                for mu in grid:
                    rho = qubit_state(p, mu)
                    ent = np.ones((2, 2))
                    gram = np.array([[1.0, q], [q, 1.0]])
                    assert coherent_info_two_level(q, p, mu) == pytest.approx(
                        coherent_info_soft(rho, ent, gram), abs=1e-10
                    )

    def test_out_of_range_rejected(self):
        with pytest.raises(OutOfRange):
            coherent_info_two_level(1.2, 0.5, 0.5)
        with pytest.raises(OutOfRange):
            coherent_info_two_level(0.5, -0.1, 0.5)


class TestMeterEnsemble:
    def test_orthogonal_meter_copies_populations(self):
        rng = np.random.default_rng(69)
        states = (rand_density(rng, 2), rand_density(rng, 2))
        ens = StateEnsemble(probs=np.array([0.4, 0.6]), states=states)
        out = meter_ensemble(ens, np.eye(2))
        for src, dst in zip(states, out.states):
            np.testing.assert_allclose(dst, np.diag(np.diag(src).real), atol=1e-13)

    def test_trivial_meter_destroys_distinguishability(self):
        rng = np.random.default_rng(70)
        ens = StateEnsemble(
            probs=np.array([0.5, 0.5]),
            states=(rand_density(rng, 2), rand_density(rng, 2)),
        )
        out = meter_ensemble(ens, np.ones((2, 2)))
        np.testing.assert_allclose(out.states[0], out.states[1], atol=1e-13)
        assert holevo_info(out) == pytest.approx(0.0, abs=1e-12)

    def test_pure_basis_inputs_select_meter_states(self):
        rng = np.random.default_rng(71)
        gram = rand_correlation(rng, 2)
        vecs = meter_states_from_gram(gram)
        ens = StateEnsemble(
            probs=np.array([0.5, 0.5]),
            states=(np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)),
        )
        out = meter_ensemble(ens, gram)
        for k in range(2):
            np.testing.assert_allclose(
                out.states[k], np.outer(vecs[:, k], vecs[:, k].conj()), atol=1e-13
            )

    def test_dimension_mismatch(self):
        ens = StateEnsemble(probs=np.array([1.0]), states=(np.eye(2) / 2.0,))
        with pytest.raises(DimensionMismatch):
            meter_ensemble(ens, np.eye(3))


class TestHolevoInfo:
    def test_orthogonal_pure_states_give_one_bit(self):
        ens = StateEnsemble(
            probs=np.array([0.5, 0.5]),
            states=(np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)),
        )
        assert holevo_info(ens) == pytest.approx(1.0, abs=1e-12)

    def test_identical_states_give_zero(self):
        rng = np.random.default_rng(72)
        rho = rand_density(rng, 3)
        ens = StateEnsemble(probs=np.array([0.3, 0.7]), states=(rho, rho))
        assert holevo_info(ens) == pytest.approx(0.0, abs=1e-12)

    def test_two_pure_states_with_overlap(self):
        # mixture eigenvalues are (1 +- |c|)/2 for equal priors
        overlap = 0.6
        a = np.array([1.0, 0.0])
        b = np.array([overlap, math.sqrt(1.0 - overlap**2)])
        ens = StateEnsemble(
            probs=np.array([0.5, 0.5]),
            states=(np.outer(a, a), np.outer(b, b)),
        )
        assert holevo_info(ens) == pytest.approx(
            binary_entropy((1.0 + overlap) / 2.0), abs=1e-12
        )

    def test_bounds(self):
        rng = np.random.default_rng(73)
        for dim in (2, 3):
            probs = rng.dirichlet(np.ones(3))
            states = tuple(rand_density(rng, dim) for _ in range(3))
            ens = StateEnsemble(probs=probs, states=states)
            value = holevo_info(ens)
            average = sum(p * s for p, s in zip(probs, states))
            assert -1e-12 <= value <= von_neumann_entropy(average) + 1e-12
            assert value <= math.log2(dim) + 1e-12

    def test_probability_validation(self):
        with pytest.raises(InvalidParams):
            StateEnsemble(probs=np.array([0.5, 0.6]), states=(np.eye(2) / 2.0,) * 2)
        with pytest.raises(InvalidParams):
            StateEnsemble(probs=np.array([-0.1, 1.1]), states=(np.eye(2) / 2.0,) * 2)


class TestSemiclassicalContinuous:
    def test_zero_at_start(self):
        assert semiclassical_info_continuous(1.0, 0.0) == 0.0

    def test_saturates_at_one_bit(self):
        assert semiclassical_info_continuous(1.0, 30.0) == pytest.approx(1.0, abs=1e-6)

    def test_matches_holevo_of_meter_ensemble(self):
        for kt in (0.3, 0.9, 2.4):
            params = ContinuousLimitParams(kappa=1.0, t=kt, chi_dot=0.5)
            vecs = continuous_gram_sqrt(params)
            ens = StateEnsemble(
                probs=np.array([0.5, 0.5]),
                states=tuple(
                    np.outer(vecs[:, k], vecs[:, k].conj()) for k in range(2)
                ),
            )
            assert semiclassical_info_continuous(1.0, kt) == pytest.approx(
                holevo_info(ens), abs=1e-10
            )

    def test_matches_closed_display_form(self):
        # -(1/2) [log2((1-c^2)/4) + c log2((1+c)/(1-c))] with the convention
        # fixing c
        for kt in (0.7, 1.3):
            for convention, c in (("gram", math.exp(-kt)), ("paper", math.exp(-2 * kt))):
                display = -0.5 * (
                    math.log2((1.0 - c * c) / 4.0)
                    + c * math.log2((1.0 + c) / (1.0 - c))
                )
                assert semiclassical_info_continuous(1.0, kt, convention) == pytest.approx(
                    display, abs=1e-12
                )

    def test_monotone_increasing(self):
        values = [semiclassical_info_continuous(1.0, t) for t in np.linspace(0.0, 8.0, 40)]
        assert all(b >= a - 1e-13 for a, b in zip(values, values[1:]))

    def test_unknown_convention_rejected(self):
        with pytest.raises(InvalidParams):
            semiclassical_info_continuous(1.0, 1.0, convention="bogus")


class TestCompeteCoherent:
    def test_idle_bob_reduces_to_single_interceptor(self):
        rng = np.random.default_rng(74)
        rho = rand_density(rng, 2)
        ent_eve = rand_correlation(rng, 2)
        gram_eve = rand_correlation(rng, 2)
        ones = np.ones((2, 2))
        info_eve, _ = compete_coherent(rho, ent_eve, gram_eve, ones, ones)
        expected = von_neumann_entropy(
            rho * ent_eve * gram_eve, validate=False
        ) - von_neumann_entropy(rho * ent_eve, validate=False)
        assert info_eve == pytest.approx(expected, abs=1e-12)

    def test_fully_dephased_interceptor_gets_nothing(self):
        # identity entanglement matrix wipes both entropy arguments equally
        rng = np.random.default_rng(75)
        rho = rand_density(rng, 2)
        gram_eve = rand_correlation(rng, 2)
        info_eve, _ = compete_coherent(
            rho, np.eye(2), gram_eve, rand_correlation(rng, 2), rand_correlation(rng, 2)
        )
        assert info_eve == pytest.approx(0.0, abs=1e-12)

    def test_matches_two_level_substitution_rule(self):
        ones = np.ones((2, 2))
        grid = np.linspace(0.0, 1.0, 5)
        for mu in grid:
            rho = qubit_state(0.5, mu)
            for q_eve in grid:
                for q_bob in grid:
                    gram_e = np.array([[1.0, q_eve], [q_eve, 1.0]])
                    gram_b = np.array([[1.0, q_bob], [q_bob, 1.0]])
                    matrix_vals = compete_coherent(rho, ones, gram_e, ones, gram_b)
                    closed_vals = compete_two_level(
                        CompetitionParams(q_eve=q_eve, q_bob=q_bob, mu=mu)
                    )
                    assert matrix_vals[0] == pytest.approx(closed_vals[0], abs=1e-10)
                    assert matrix_vals[1] == pytest.approx(closed_vals[1], abs=1e-10)

    def test_symmetric_for_equal_receivers(self):
        rng = np.random.default_rng(76)
        rho = rand_density(rng, 3)
        ent = rand_correlation(rng, 3)
        gram = rand_correlation(rng, 3)
        info_eve, info_bob = compete_coherent(rho, ent, gram, ent, gram)
        assert info_eve == info_bob


class TestCompeteTwoLevel:
    def test_idle_bob_with_coherent_input(self):
        info_eve, _ = compete_two_level(CompetitionParams(q_eve=0.0, q_bob=1.0, mu=1.0))
        assert info_eve == pytest.approx(1.0, abs=1e-14)

    def test_sharp_bob_blocks_interceptor(self):
        for q_eve in np.linspace(0.0, 1.0, 7):
            info_eve, _ = compete_two_level(
                CompetitionParams(q_eve=q_eve, q_bob=0.0, mu=0.8)
            )
            assert info_eve == 0.0

    def test_incoherent_input_gives_nothing(self):
        info_eve, info_bob = compete_two_level(
            CompetitionParams(q_eve=0.4, q_bob=0.7, mu=0.0)
        )
        assert info_eve == 0.0 and info_bob == 0.0

    def test_swap_symmetry_is_exact(self):
        for q_eve, q_bob, mu in ((0.2, 0.9, 0.6), (0.8, 0.3, 1.0), (0.5, 0.5, 0.4)):
            ie_ab, ib_ab = compete_two_level(
                CompetitionParams(q_eve=q_eve, q_bob=q_bob, mu=mu)
            )
            ie_ba, ib_ba = compete_two_level(
                CompetitionParams(q_eve=q_bob, q_bob=q_eve, mu=mu)
            )
            assert ie_ab == ib_ba and ib_ab == ie_ba

    def test_monotone_in_both_softness_parameters(self):
        grid = np.linspace(0.0, 1.0, 21)
        for q_bob in (0.3, 0.8):
            values = [
                compete_two_level(CompetitionParams(q_eve=q, q_bob=q_bob, mu=0.9))[0]
                for q in grid
            ]
            assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
        for q_eve in (0.2, 0.7):
            values = [
                compete_two_level(CompetitionParams(q_eve=q_eve, q_bob=q, mu=0.9))[0]
                for q in grid
            ]
            assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))

    def test_unbalanced_populations_rejected(self):
        with pytest.raises(OutOfRange):
            compete_two_level(CompetitionParams(q_eve=0.5, q_bob=0.5, mu=0.5, p=0.3))


def basis_ensemble():
    return StateEnsemble(
        probs=np.array([0.5, 0.5]),
        states=(np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)),
    )


def rigid_bob():
    return SoftMeasurement(np.eye(2), np.eye(2))


class TestEveBobSemiclassical:
    def test_coinciding_bases_are_undisturbed(self):
        for q in np.linspace(0.0, 1.0, 9):
            dephase = np.array([[1.0, q], [q, 1.0]])
            value = eve_bob_semiclassical(basis_ensemble(), 0.0, dephase, rigid_bob())
            assert value == pytest.approx(1.0, abs=1e-12)

    def test_conjugate_basis_full_dephasing_erases_everything(self):
        dephase = np.eye(2)
        value = eve_bob_semiclassical(basis_ensemble(), math.pi / 2.0, dephase, rigid_bob())
        assert value == pytest.approx(0.0, abs=1e-12)

    def test_absent_interceptor_is_harmless(self):
        dephase = np.ones((2, 2))
        value = eve_bob_semiclassical(basis_ensemble(), math.pi / 2.0, dephase, rigid_bob())
        assert value == pytest.approx(1.0, abs=1e-12)

    def test_surface_stays_in_unit_interval(self):
        for q in np.linspace(0.0, 1.0, 6):
            for theta in np.linspace(0.0, math.pi / 2.0, 6):
                dephase = np.array([[1.0, q], [q, 1.0]])
                value = eve_bob_semiclassical(basis_ensemble(), theta, dephase, rigid_bob())
                assert -1e-12 <= value <= 1.0 + 1e-12

    def test_soft_bob_reduces_information(self):
        soft = SoftMeasurement(np.eye(2), np.array([[1.0, 0.7], [0.7, 1.0]]))
        sharp = eve_bob_semiclassical(basis_ensemble(), 0.3, np.ones((2, 2)), rigid_bob())
        fuzzy = eve_bob_semiclassical(basis_ensemble(), 0.3, np.ones((2, 2)), soft)
        assert fuzzy < sharp

    def test_explicit_unitary_in_higher_dimension(self):
        rng = np.random.default_rng(77)
        dim = 3
        states = tuple(
            np.diag(row).astype(complex) for row in np.eye(dim)
        )
        ens = StateEnsemble(probs=np.full(dim, 1.0 / dim), states=states)
        unitary = rand_unitary(rng, dim)
        dephase = rand_correlation(rng, dim)
        bob = SoftMeasurement(np.eye(dim), rand_correlation(rng, dim, real=True))
        value = eve_bob_semiclassical(ens, unitary, dephase, bob)
        assert -1e-12 <= value <= math.log2(dim) + 1e-12
        # identity basis change with any dephasing leaves orthogonal outputs
        same_basis = eve_bob_semiclassical(ens, np.eye(dim), dephase, SoftMeasurement(np.eye(dim), np.eye(dim)))
        assert same_basis == pytest.approx(math.log2(dim), abs=1e-12)

    def test_rejects_bad_inputs(self):
        with pytest.raises(InvalidMeasurement):
            eve_bob_semiclassical(
                basis_ensemble(), np.array([[1.0, 1.0], [0.0, 1.0]]), np.eye(2), rigid_bob()
            )
        ens3 = StateEnsemble(
            probs=np.array([1.0]), states=(np.eye(3).astype(complex) / 3.0,)
        )
        with pytest.raises(DimensionMismatch):
            eve_bob_semiclassical(ens3, 0.5, np.eye(3), rigid_bob())
