import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import builders
from srmkit import (
    Measurement,
    PreconditionError,
    StateSet,
    brute_force_lsm_oracle,
    error_probability,
    gram_schmidt_measurement,
    gu_srm,
    helstrom_oracle,
    holevo_conditions,
    lsm,
    residual_error,
    sasaki_criterion,
    wlsm,
)
from srmkit.optimality import holevo_residuals

PE_GU4 = 1 - ((2 + np.sqrt(2)) / 4) ** 2


def helstrom_closed_form(s):
    """``(1 - sqrt(1 - 4 p1 p2 |<phi1|phi2>|^2)) / 2`` for pure states."""
    p1, p2 = s.priors
    a = abs(np.vdot(s.states[:, 0], s.states[:, 1]))
    return 0.5 * (1 - np.sqrt(max(0.0, 1 - 4 * p1 * p2 * a * a)))


class TestErrorProbability:
    def test_orthonormal(self):
        s = StateSet(np.eye(3))
        assert error_probability(s, lsm(s)) == pytest.approx(0, abs=1e-15)

    def test_gu4(self, gu4, gu4_group):
        assert error_probability(gu4, gu_srm(gu4, gu4_group)) == pytest.approx(PE_GU4, abs=1e-12)
        assert PE_GU4 == pytest.approx(0.2714, abs=1e-4)

    def test_six(self, six):
        pe = error_probability(six, lsm(six))
        assert pe == pytest.approx(1 - np.cos(np.pi / 12) ** 2, abs=1e-12)
        assert pe == pytest.approx(0.0670, abs=1e-4)
        assert pe == pytest.approx(helstrom_closed_form(six), abs=1e-12)

    def test_incomplete_rejected(self, six):
        with pytest.raises(PreconditionError):
            error_probability(six, Measurement(0.5 * np.eye(2)))

    def test_phase_invariance(self, rng):
        s = builders.random_state_set(rng, 4, 3).with_priors([0.2, 0.3, 0.5])
        meas = lsm(s)
        ph = np.exp(2j * np.pi * rng.random(3))
        s2 = StateSet(s.states * ph, s.priors)
        meas2 = Measurement(meas.matrix * ph)
        assert error_probability(s2, meas2) == pytest.approx(error_probability(s, meas), abs=1e-14)


class TestHolevo:
    def test_gu4(self, gu4, gu4_group):
        rep = holevo_conditions(gu4, gu_srm(gu4, gu4_group))
        assert rep.verdict == "verified_mpem"
        assert rep.p_error == pytest.approx(PE_GU4, abs=1e-12)
        assert rep.sasaki_spread is None  # dependent set

    def test_six(self, six):
        rep = holevo_conditions(six, lsm(six))
        assert rep.verdict == "verified_mpem"
        assert rep.sasaki_spread <= 1e-10

    def test_gram_schmidt_baseline(self, six):
        gs = gram_schmidt_measurement(six)
        rep = holevo_conditions(six, gs)
        assert rep.verdict in ("violated", "inconclusive")
        assert rep.p_error > error_probability(six, lsm(six))

    def test_scalar_equality_matches_operators(self, rng):
        """The scalar shortcut for ``Pi_i (W_j - W_i) Pi_j`` against explicit operators."""
        s = builders.random_state_set(rng, 3, 3).with_priors([0.5, 0.3, 0.2])
        for meas in (lsm(s), gram_schmidt_measurement(s)):
            eq, _, _, Gamma = holevo_residuals(s, meas)
            Pi = meas.povm()
            W = np.einsum("i,ai,bi->iab", s.priors, s.states, s.states.conj())
            ref = max(
                np.linalg.norm(Pi[i] @ (W[j] - W[i]) @ Pi[j]) for i in range(s.m) for j in range(s.m)
            )
            assert eq == pytest.approx(ref, abs=1e-12)
            np.testing.assert_allclose(Gamma, np.einsum("iab,ibc->ac", Pi, W), atol=1e-12)

    def test_gamma_hermitian_when_equalities_hold(self, rng):
        for factors in [(3,), (2, 2), (5,)]:
            s, g = builders.random_gu(rng, factors, 4)
            rep = holevo_conditions(s, gu_srm(s, g))
            assert rep.holevo_eq_residual <= 1e-8
            assert rep.gamma_hermiticity <= 1e-9

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from([(2,), (3,), (4,), (2, 2), (6,), (2, 3), (8,)]), st.integers(1, 12), st.integers(0, 2**32 - 1))
    def test_gu_srm_is_mpem(self, factors, n, seed):
        rng = np.random.default_rng(seed)
        s, g = builders.random_gu(rng, factors, n)
        rep = holevo_conditions(s, gu_srm(s, g), 1e-8)
        assert rep.verdict == "verified_mpem"

    def test_report_serializes(self, six):
        d = holevo_conditions(six, lsm(six)).to_dict()
        assert set(d) >= {"holevo_eq_residual", "holevo_psd_margin", "gamma_hermiticity", "p_error", "verdict"}
        assert d["verdict"] == "verified_mpem"

    def test_verdict_thresholds(self, six):
        rep = holevo_conditions(six, gram_schmidt_measurement(six), tol=1e-8)
        assert rep.verdict == "violated"
        loose = holevo_conditions(six, gram_schmidt_measurement(six), tol=10.0)
        assert loose.verdict == "verified_mpem"


class TestSasaki:
    def test_gu_uniform(self, rng):
        for factors in [(3,), (2, 2), (4,), (2, 3)]:
            m = int(np.prod(factors))
            s, _ = builders.random_gu(rng, factors, m + 2, all_characters=True)
            ok, spread = sasaki_criterion(s)
            assert ok and spread <= 1e-10

    def test_six(self, six):
        assert sasaki_criterion(six)[0]

    def test_generic_skewed(self, rng):
        s = builders.random_state_set(rng, 3, 3).with_priors([0.6, 0.3, 0.1])
        ok, spread = sasaki_criterion(s)
        assert not ok and spread > 1e-3

    def test_dependent_rejected(self, gu4):
        with pytest.raises(PreconditionError):
            sasaki_criterion(gu4)

    def test_unweighted_flag(self, six):
        s = six.with_priors([0.9, 0.1])
        assert not sasaki_criterion(s, True)[0]
        assert sasaki_criterion(s, False)[0]

    def test_implies_mpem(self, rng):
        for _ in range(30):
            m = int(rng.integers(2, 5))
            s = builders.random_sasaki_instance(rng, int(rng.integers(m, 7)), m)
            ok, _ = sasaki_criterion(s)
            assert ok
            meas = wlsm(s, np.sqrt(s.priors))
            assert holevo_conditions(s, meas).verdict == "verified_mpem"


class TestHelstromOracle:
    def test_six(self, six):
        assert helstrom_oracle(six) == pytest.approx(error_probability(six, lsm(six)), abs=1e-6)

    def test_orthogonal(self):
        assert helstrom_oracle(StateSet(np.eye(2))) == pytest.approx(0, abs=1e-12)

    def test_identical(self):
        v = np.array([0.6, 0.8j])
        assert helstrom_oracle(StateSet(np.column_stack([v, v]))) == pytest.approx(0.5, abs=1e-9)

    def test_needs_two(self, gu4):
        with pytest.raises(PreconditionError):
            helstrom_oracle(gu4)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(0.05, 0.95))
    def test_matches_closed_form_and_is_lower_envelope(self, seed, p):
        rng = np.random.default_rng(seed)
        s = builders.random_state_set(rng, int(rng.integers(2, 5)), 2).with_priors([p, 1 - p])
        oracle = helstrom_oracle(s)
        assert oracle == pytest.approx(helstrom_closed_form(s), abs=1e-7)
        for meas in (lsm(s), wlsm(s, np.sqrt(s.priors)), gram_schmidt_measurement(s)):
            assert oracle <= error_probability(s, meas) + 1e-6


class TestLsmOracle:
    def test_six(self, six):
        e_min = residual_error(six, lsm(six))
        e = brute_force_lsm_oracle(six, 10_000, seed=0)
        assert e_min - 1e-6 <= e <= e_min + 1e-4

    def test_gu4(self, gu4):
        e_min = residual_error(gu4, lsm(gu4))
        e = brute_force_lsm_oracle(gu4, 10_000, seed=1)
        assert e_min - 1e-6 <= e <= e_min + 1e-4
        assert e == pytest.approx(7 - 2 * (np.sqrt(2) + 2), abs=1e-4)

    def test_orthonormal(self):
        assert brute_force_lsm_oracle(StateSet(np.eye(3)), 10_000) == pytest.approx(0, abs=1e-8)

    def test_limits(self, rng):
        with pytest.raises(PreconditionError):
            brute_force_lsm_oracle(builders.random_state_set(rng, 7, 2), 10_000)
        with pytest.raises(PreconditionError):
            brute_force_lsm_oracle(builders.random_state_set(rng, 2, 2), 100)

    def test_seeded(self, six):
        assert brute_force_lsm_oracle(six, 10_000, seed=5) == brute_force_lsm_oracle(six, 10_000, seed=5)
