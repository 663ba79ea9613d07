"""Closed-form exponent quantities for fixed arguments.

Everything here is an exact finite computation: per-letter likelihood-ratio
products, the weighted ratio objective, the per-hypothesis transition-rate
constants of a detector machine, and the error-probability bound formulas.
Optimizing over weights lives in ``optimize``; this module never iterates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    Distribution,
    ProblemInstance,
    ValidationError,
    WeightPair,
    expectation,
    safe_ratio,
)


@dataclass(frozen=True)
class FsmRateSet:
    """Per-hypothesis drift rates of a detector machine.

    gamma0 (gamma1) is the least ratio of evidence-for-0 to evidence-for-1
    transition probabilities the adversary can force at internal states
    under hypothesis 0 (1); c0/c1 are the end-state analogs where the
    adversary may pick different distributions at the two ends, and
    rho0/rho1 are the largest end-state exit expectations.  ``degenerate``
    flags any rate whose defining ratio hit the 0/0 convention.
    """

    gamma0: float
    gamma1: float
    c0: float
    c1: float
    rho0_plus: float
    rho0_minus: float
    rho1_plus: float
    rho1_minus: float
    degenerate: bool = False

    @property
    def gamma(self) -> float:
        return self.gamma0 * self.gamma1

    @property
    def cee(self) -> float:
        return self.c0 * self.c1


@dataclass(frozen=True)
class TheoremBounds:
    """Error-probability bounds for an S-state detector.

    ``lower`` holds for every S-state machine; ``upper`` is achieved by the
    birth-and-death construction and requires S >= 3 (None below that);
    ``exponent`` is the asymptotic rate (1/2) log gamma.
    """

    lower: float
    upper: float | None
    exponent: float


def gamma_hc(p: Distribution, q: Distribution) -> float:
    """max_x q(x)/p(x) times max_x p(x)/q(x).

    Uses 0/0 = 0 per letter; a/0 with a > 0 is +inf, so disjoint supports
    propagate +inf through the product (both maxima are strictly positive
    for probability vectors).
    """
    if p.size != q.size:
        raise ValidationError("dimension mismatch in gamma_hc")
    up = max(safe_ratio(float(q.probs[x]), float(p.probs[x]))
             for x in range(p.size))
    down = max(safe_ratio(float(p.probs[x]), float(q.probs[x]))
               for x in range(p.size))
    if math.isinf(up) or math.isinf(down):
        return math.inf
    return up * down


def gamma_ratio(w: WeightPair, p: Distribution, q: Distribution) -> float:
    """Weighted evidence ratio (E_q[f+] E_p[f-]) / (E_q[f-] E_p[f+]).

    The 0/0 = 0 convention applies to the fraction as a whole.
    """
    num = expectation(w.f_plus, q) * expectation(w.f_minus, p)
    den = expectation(w.f_minus, q) * expectation(w.f_plus, p)
    return safe_ratio(num, den)


def rate_set(instance: ProblemInstance, w_gamma: WeightPair,
             w_c: WeightPair) -> FsmRateSet:
    """Exact vertex-enumeration of the eight machine rates.

    Linear-fractional objectives over a polytope attain their extrema at
    vertices, so minima and maxima below are exact, never iterative.
    """
    P = instance.p0.matrix
    Q = instance.p1.matrix
    gp, gm = w_gamma.f_plus, w_gamma.f_minus
    cp, cm = w_c.f_plus, w_c.f_minus

    degenerate = False

    def min_ratio(numers, denoms):
        nonlocal degenerate
        vals = []
        for a, b in zip(numers, denoms):
            if b == 0.0 and a == 0.0:
                degenerate = True
            vals.append(safe_ratio(float(a), float(b)))
        out = min(vals)
        if math.isinf(out):
            degenerate = True
        return out

    gamma0 = min_ratio(P @ gm, P @ gp)
    gamma1 = min_ratio(Q @ gp, Q @ gm)
    rho0_plus = float(np.max(P @ cp))
    rho0_minus = float(np.max(P @ cm))
    rho1_plus = float(np.max(Q @ cp))
    rho1_minus = float(np.max(Q @ cm))
    c0_num = float(np.min(P @ cm))
    c1_num = float(np.min(Q @ cp))
    if (c0_num == 0.0 and rho0_plus == 0.0) or (
            c1_num == 0.0 and rho1_minus == 0.0):
        degenerate = True
    c0 = safe_ratio(c0_num, rho0_plus)
    c1 = safe_ratio(c1_num, rho1_minus)
    if math.isinf(c0) or math.isinf(c1):
        degenerate = True
    return FsmRateSet(gamma0, gamma1, c0, c1, rho0_plus, rho0_minus,
                      rho1_plus, rho1_minus, degenerate)


def hellman_pe(gamma_hc_value: float, S: int) -> float:
    """Optimal two-hypothesis error for an S-state machine, 1/(1+g^((S-1)/2))."""
    if S < 2:
        raise ValidationError(f"S must be at least 2, got {S}")
    if gamma_hc_value < 1.0:
        raise ValidationError(
            f"gamma_hc must be >= 1, got {gamma_hc_value}")
    power = gamma_hc_value ** ((S - 1) / 2.0)
    return 1.0 / (1.0 + power)


def bounds_for_S(gamma: float, cee: float, S: int) -> TheoremBounds:
    """Evaluate the S-state error bounds for given exponent bases.

    lower = 1/(1 + sqrt(gamma^(S-1))) holds for every S >= 2; the
    constructive upper bound 1/(1 + sqrt(cee * gamma^(S-2))) requires
    S >= 3 and is reported as None otherwise.
    """
    if S < 2:
        raise ValidationError(f"S must be at least 2, got {S}")
    if gamma < 0 or cee < 0:
        raise ValidationError("gamma and cee must be non-negative")
    lower = 1.0 / (1.0 + math.sqrt(gamma ** (S - 1)))
    upper = None
    if S >= 3:
        upper = 1.0 / (1.0 + math.sqrt(cee * gamma ** (S - 2)))
    exponent = 0.5 * math.log(gamma) if gamma > 0 else -math.inf
    return TheoremBounds(lower, upper, exponent)
