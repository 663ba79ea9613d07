"""Fixed-argument exponent quantities against hand-computed values."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from advht.exponents import (
    bounds_for_S,
    gamma_hc,
    gamma_ratio,
    hellman_pe,
    rate_set,
)
from advht.model import (
    Distribution,
    ValidationError,
    WeightPair,
    instance_from_dict,
)

from conftest import p_lambda


def dist(*vals):
    return Distribution(np.array(vals, dtype=float))


Q_WEAKLFD = dist(9 / 50, 4 / 15, 4 / 15, 4 / 15, 1 / 50)


class TestGammaHC:
    def test_identical(self):
        assert gamma_hc(dist(0.5, 0.5), dist(0.5, 0.5)) == pytest.approx(1.0)

    def test_direct_evaluation(self):
        assert gamma_hc(dist(0.5, 0.5), dist(0.25, 0.75)) == pytest.approx(3.0)

    def test_weaklfd_pair_is_81(self):
        # ratio maxima are 9 and 9 at letters 1 and 5
        assert gamma_hc(p_lambda(0.5), Q_WEAKLFD) == pytest.approx(81.0)

    def test_disjoint_supports_give_inf(self):
        assert gamma_hc(dist(1.0, 0.0), dist(0.0, 1.0)) == math.inf

    def test_one_sided_support_mismatch(self):
        assert gamma_hc(dist(0.5, 0.5, 0.0), dist(0.25, 0.25, 0.5)) == math.inf


class TestGammaRatio:
    def test_claim4_value(self, claim4_weights):
        p = dist(0.0, 0.25, 0.75)
        q = dist(1 / 3, 1 / 3, 1 / 3)
        assert gamma_ratio(claim4_weights, p, q) == pytest.approx(4.0)

    def test_equal_weights_give_one(self, rng):
        for _ in range(10):
            f = rng.random(3) * 0.5
            if not f.any():
                f[0] = 0.25
            w = WeightPair(f, f)
            p = Distribution(rng.dirichlet(np.ones(3)))
            q = Distribution(rng.dirichlet(np.ones(3)))
            assert gamma_ratio(w, p, q) == pytest.approx(1.0)

    def test_zero_convention_zeroes_fraction(self):
        w = WeightPair(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        q = dist(0.0, 1.0)  # f_plus supported where q = 0
        p = dist(0.5, 0.5)
        assert gamma_ratio(w, p, q) == 0.0

    def test_reciprocal_identity(self, rng):
        for _ in range(20):
            fp = rng.random(4) * 0.5 + 0.01
            fm = (1 - fp) * rng.random(4) * 0.9 + 0.01
            w = WeightPair(fp, np.minimum(fm, 1 - fp))
            p = Distribution(rng.dirichlet(np.ones(4)) * 0.9 + 0.025)
            q = Distribution(rng.dirichlet(np.ones(4)) * 0.9 + 0.025)
            prod = gamma_ratio(w, p, q) * gamma_ratio(w, q, p)
            assert prod == pytest.approx(1.0, rel=1e-9)

    def test_rescaling_invariance(self, rng, claim4_weights):
        p = dist(0.0, 0.25, 0.75)
        q = dist(1 / 3, 1 / 3, 1 / 3)
        base = gamma_ratio(claim4_weights, p, q)
        for _ in range(10):
            a, b = rng.random(2) * 0.9 + 0.05
            w = WeightPair(claim4_weights.f_plus * a,
                           claim4_weights.f_minus * b)
            assert gamma_ratio(w, p, q) == pytest.approx(base, rel=1e-12)

    def test_indicator_sup_equals_gamma_hc_small_alphabets(self, rng):
        # For fixed (p, q) the best indicator pair attains the per-letter
        # ratio product exactly; enumerate all pairs on small alphabets.
        for n in (2, 3, 4, 5, 6):
            p = Distribution(rng.dirichlet(np.ones(n)) * 0.9 + 0.1 / n)
            q = Distribution(rng.dirichlet(np.ones(n)) * 0.9 + 0.1 / n)
            best = 0.0
            for xp, xm in itertools.permutations(range(n), 2):
                fp = np.zeros(n)
                fm = np.zeros(n)
                fp[xp] = 1.0
                fm[xm] = 1.0
                best = max(best, gamma_ratio(WeightPair(fp, fm), p, q))
            assert best == pytest.approx(gamma_hc(p, q), rel=1e-12)


class TestRateSet:
    def test_indicator_instance_rates(self, indicator_instance, claim4_weights):
        rates = rate_set(indicator_instance, claim4_weights, claim4_weights)
        assert rates.gamma0 == pytest.approx(3.0)
        assert rates.gamma1 == pytest.approx(4 / 3)
        assert rates.gamma == pytest.approx(4.0)
        # end-state rates for the same weights
        assert rates.c0 == pytest.approx(2.0)       # (1/2) / (1/4)
        assert rates.c1 == pytest.approx(4 / 3)
        assert rates.rho0_plus == pytest.approx(0.25)
        assert rates.rho0_minus == pytest.approx(0.75)
        assert not rates.degenerate

    def test_singleton_collapses_c_to_gamma(self, rng):
        for _ in range(10):
            p = rng.dirichlet(np.ones(3)) * 0.9 + 0.1 / 3
            q = rng.dirichlet(np.ones(3)) * 0.9 + 0.1 / 3
            inst = instance_from_dict({
                "alphabet": ["a", "b", "c"],
                "P0": {"vertices": [list(p / p.sum())]},
                "P1": {"vertices": [list(q / q.sum())]},
            })
            fp = rng.random(3) * 0.5 + 0.05
            fm = (1 - fp) * 0.5
            w = WeightPair(fp, fm)
            rates = rate_set(inst, w, w)
            assert rates.c0 == pytest.approx(rates.gamma0, rel=1e-12)
            assert rates.c1 == pytest.approx(rates.gamma1, rel=1e-12)

    def test_equal_weights_give_unit_rates(self, indicator_instance):
        f = np.array([0.3, 0.2, 0.4])
        w = WeightPair(f, f)
        rates = rate_set(indicator_instance, w, w)
        for val in (rates.gamma0, rates.gamma1, rates.c0, rates.c1):
            assert val == pytest.approx(1.0)

    def test_degenerate_flagged(self):
        # both weights live on a letter that P0's vertex never emits, so the
        # gamma0 ratio is 0/0 at every vertex
        inst = instance_from_dict({
            "alphabet": ["a", "b"],
            "P0": {"vertices": [[0.0, 1.0]]},
            "P1": {"vertices": [[0.5, 0.5]]},
        })
        w = WeightPair(np.array([0.5, 0.0]), np.array([0.5, 0.0]))
        rates = rate_set(inst, w, w)
        assert rates.degenerate
        assert rates.gamma0 == 0.0  # 0/0 convention fires


class TestHellmanPe:
    def test_direct_substitution(self):
        assert hellman_pe(9.0, 3) == pytest.approx(0.1)

    def test_identical_hypotheses(self):
        for S in (2, 3, 7):
            assert hellman_pe(1.0, S) == pytest.approx(0.5)

    def test_weaklfd_value(self):
        assert hellman_pe(81.0, 3) == pytest.approx(1 / 82)

    def test_preconditions(self):
        with pytest.raises(ValidationError):
            hellman_pe(0.5, 3)
        with pytest.raises(ValidationError):
            hellman_pe(2.0, 1)


class TestBoundsForS:
    def test_matching_bounds_at_gamma_c_equal(self):
        b = bounds_for_S(9.0, 9.0, 3)
        assert b.lower == pytest.approx(0.1)
        assert b.upper == pytest.approx(0.1)

    def test_indistinguishable(self):
        for S in (3, 5, 9):
            b = bounds_for_S(1.0, 1.0, S)
            assert b.lower == pytest.approx(0.5)
            assert b.upper == pytest.approx(0.5)

    def test_upper_rejected_below_three_states(self):
        b = bounds_for_S(81.0, 81.0, 2)
        assert b.upper is None
        assert b.lower == pytest.approx(1 / 10)

    def test_exponent(self):
        assert bounds_for_S(4.0, 3.0, 5).exponent == pytest.approx(
            0.5 * math.log(4.0))
