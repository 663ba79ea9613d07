"""Solvers for the three exponent programs and the minimax cross-check.

The sup-min program for gamma (and its end-state analog cee) is bilinear in
the weight pair but linear in each component separately, so each component
block is solved exactly by bisecting the achievable threshold t with an LP
feasibility test, and the two blocks are alternated from multiple seeded
starts.  The min-of-gamma_hc program (gamma_bar) has the mirrored
structure over the two polytopes.  The two sides bound each other
(gamma <= gamma_bar, with equality for this problem class), which turns a
stalled alternation into a detected failure instead of a wrong answer.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .exponents import gamma_hc
from .model import (
    Distribution,
    ProblemInstance,
    ValidationError,
    WeightPair,
    max_normalize_weight_pair,
)
from .simplex import LinearFeasibilityProblem, lp_feasible

log = logging.getLogger("advht.optimize")

# Weights are kept away from the zero-expectation boundary, mirroring the
# restricted simplex domains on which the minimax equality is proved; the
# reported optimum is a supremum approximation.
MIN_EXPECTATION = 1e-9

# Multistart control: stop early once this many consecutive starts fail to
# improve the incumbent by more than improve_tol (deterministic).
STABLE_STARTS = 8


class SolverError(RuntimeError):
    """Internal numerical failure of a solver (not mere non-convergence)."""


@dataclass(frozen=True)
class ExponentSolution:
    """Solution record for one exponent program.

    ``value`` re-evaluates exactly at the witness; ``certificate`` lists the
    vertex indices attaining the inner min within ``tolerance_achieved``.
    For the weight programs the witness is a WeightPair, for gamma_bar a
    distribution pair.  ``gap_to_dual`` is |value - gamma_bar| where the
    cross-check applies (None otherwise).
    """

    value: float
    witness_weights: WeightPair | None
    witness_pair: tuple[Distribution, Distribution] | None
    certificate: tuple[tuple[int, ...], ...]
    tolerance_achieved: float
    iterations: int
    converged: bool
    gap_to_dual: float | None = None


@dataclass(frozen=True)
class MinimaxReport:
    """Numerical check of the sup-min = min-sup equality."""

    gamma: ExponentSolution
    gamma_bar: ExponentSolution
    gap: float
    tolerance: float
    passed: bool
    solver_bug: bool


# ---------------------------------------------------------------------------
# shared bisection machinery
# ---------------------------------------------------------------------------

class _LpCounter:
    __slots__ = ("count",)

    def __init__(self):
        self.count = 0


def _bisect_max_feasible(feasible, t_lo, t_hi, tol, counter,
                         point_lo=None):
    """Largest t with feasible(t) not None, given feasible(t_lo) known.

    The feasible set is a down-set in t; t_hi must be infeasible (verified
    by the caller).  Returns (t, point) for the best feasible threshold.
    """
    best_t, best_x = t_lo, point_lo
    while t_hi - t_lo > tol:
        mid = 0.5 * (t_lo + t_hi)
        counter.count += 1
        x = feasible(mid)
        if x is not None:
            t_lo, best_t, best_x = mid, mid, x
        else:
            t_hi = mid
    return best_t, best_x


def _bisect_min_feasible(feasible, t_lo, t_hi, tol, counter, point_hi=None):
    """Smallest t with feasible(t) not None; mirrored version (up-set)."""
    best_t, best_x = t_hi, point_hi
    while t_hi - t_lo > tol:
        mid = 0.5 * (t_lo + t_hi)
        counter.count += 1
        x = feasible(mid)
        if x is not None:
            t_hi, best_t, best_x = mid, mid, x
        else:
            t_lo = mid
    return best_t, best_x


# ---------------------------------------------------------------------------
# gamma / cee: alternate the two weight blocks
# ---------------------------------------------------------------------------

def _gamma_value(P, Q, fp, fm):
    """Exact min over vertex pairs of the evidence ratio, 0/0 -> 0."""
    ep_p, ep_m = P @ fp, P @ fm
    eq_p, eq_m = Q @ fp, Q @ fm
    best = math.inf
    arg = []
    for i in range(P.shape[0]):
        for j in range(Q.shape[0]):
            num = eq_p[j] * ep_m[i]
            den = eq_m[j] * ep_p[i]
            if den == 0.0:
                val = 0.0 if num == 0.0 else math.inf
            else:
                val = num / den
            if val < best - 1e-15:
                best = val
                arg = [(i, j)]
            elif abs(val - best) <= 1e-12 * max(1.0, best):
                arg.append((i, j))
    return best, tuple(arg)


def _cee_value(P, Q, fp, fm):
    """Exact end-state objective with the whole-fraction 0/0 -> 0 rule."""
    num = float(np.min(Q @ fp)) * float(np.min(P @ fm))
    den = float(np.max(Q @ fm)) * float(np.max(P @ fp))
    if den == 0.0:
        val = 0.0 if num == 0.0 else math.inf
    else:
        val = num / den
    cert = (int(np.argmin(Q @ fp)), int(np.argmin(P @ fm)),
            int(np.argmax(Q @ fm)), int(np.argmax(P @ fp)))
    return val, (cert,)


def _weight_block_feasible(move_mat, opp_mat, coef_move, coef_opp, t,
                           counter):
    """Feasibility of one weight block at threshold t.

    Find f >= 0 on the simplex with, for every vertex pair (i, j),
    coef_move[i,j] * (row_j . f) >= t * coef_opp[i,j] * (row_i . f), plus
    the expectation floor on the moving component.  ``move_mat`` holds the
    rows paired with the numerator side, ``opp_mat`` the denominator side.
    """
    n = move_mat.shape[1]
    rows = []
    for i in range(opp_mat.shape[0]):
        for j in range(move_mat.shape[0]):
            coeff = coef_move[i, j] * move_mat[j] - t * coef_opp[i, j] * opp_mat[i]
            rows.append((coeff, "ge", 0.0))
    for j in range(move_mat.shape[0]):
        rows.append((move_mat[j], "ge", MIN_EXPECTATION))
    rows.append((np.ones(n), "eq", 1.0))
    problem = LinearFeasibilityProblem(n, tuple(rows))
    counter.count += 1
    return lp_feasible(problem, slack=0.0)


def _solve_weight_program(instance, tol, starts, seed, kind,
                          t_cap, informed_minus, max_sweeps=30):
    """Shared alternating-bisection driver for gamma and cee."""
    P = instance.p0.matrix
    Q = instance.p1.matrix
    k0, n = P.shape
    k1 = Q.shape[0]
    value_fn = _gamma_value if kind == "gamma" else _cee_value
    counter = _LpCounter()
    rng = np.random.default_rng(seed)
    block_tol = max(tol / 8.0, 1e-13)

    def plus_block(fm, t_lo, point_lo):
        # constraints: E_q[f+] * E_pi[f-] >= t * E_q[f-] * E_pi[f+]
        ep_m = P @ fm
        eq_m = Q @ fm
        if kind == "gamma":
            coef_move = np.repeat(ep_m[:, None], k1, axis=1)   # [i, j]
            coef_opp = np.repeat(eq_m[None, :], k0, axis=0)
        else:
            coef_move = np.full((k0, k1), float(np.min(ep_m)))
            coef_opp = np.full((k0, k1), float(np.max(eq_m)))

        def feas(t):
            return _weight_block_feasible(Q, P, coef_move, coef_opp, t,
                                          counter)

        return _bisect_max_feasible(feas, t_lo, t_cap, block_tol, counter,
                                    point_lo)

    def minus_block(fp, t_lo, point_lo):
        ep_p = P @ fp
        eq_p = Q @ fp
        if kind == "gamma":
            coef_move = np.repeat(eq_p[None, :], k0, axis=0).T   # [j, i]
            coef_opp = np.repeat(ep_p[:, None], k1, axis=1).T
        else:
            coef_move = np.full((k1, k0), float(np.min(eq_p)))
            coef_opp = np.full((k1, k0), float(np.max(ep_p)))

        def feas(t):
            return _weight_block_feasible(P, Q, coef_move, coef_opp, t,
                                          counter)

        return _bisect_max_feasible(feas, t_lo, t_cap, block_tol, counter,
                                    point_lo)

    # Verify the cap really is an upper bound once; expand defensively if
    # a start beats it (theory says it cannot).
    inits = [np.full(n, 1.0 / n)]
    if informed_minus is not None:
        inits.insert(0, informed_minus)
    for x in range(n):
        e = np.full(n, 1e-12)
        e[x] = 1.0
        inits.append(e / e.sum())
    while len(inits) < starts:
        inits.append(rng.dirichlet(np.ones(n)))
    inits = inits[:max(starts, 1)]

    best = (-math.inf, None, None, -1)
    since_improve = 0
    for idx, fm0 in enumerate(inits):
        fm = fm0
        fp = None
        val = 0.0
        for _ in range(max_sweeps):
            t_lo_seed = val if fp is not None else 0.0
            _, fp_new = plus_block(fm, t_lo_seed, fp)
            if fp_new is None:
                break
            fp = fp_new
            _, fm_new = minus_block(fp, val, fm)
            if fm_new is not None:
                fm = fm_new
            new_val, _ = value_fn(P, Q, fp, fm)
            if not math.isfinite(new_val) or new_val - val <= tol / 4.0:
                val = max(val, new_val) if math.isfinite(new_val) else val
                break
            val = new_val
        if fp is not None and val > best[0] + tol / 10.0:
            best = (val, fp, fm, idx)
            since_improve = 0
        else:
            since_improve += 1
        if idx + 1 >= STABLE_STARTS and since_improve >= STABLE_STARTS:
            break

    value, fp, fm, _ = best
    if fp is None:
        raise SolverError(f"{kind} solver found no feasible weights")
    value, cert = value_fn(P, Q, fp, fm)
    witness = max_normalize_weight_pair(WeightPair(fp, fm))
    return value, witness, cert, counter.count


def _informed_minus_start(instance, pair):
    """Indicator of the argmin-ratio letters of a distribution pair.

    A minimizing pair of the dual program pins the letters whose
    likelihood ratio is extremal; the matching indicator is the natural
    warm start for the evidence-for-0 weight component.
    """
    if pair is None:
        return None
    p, q = pair
    n = p.size
    ratios = np.array([
        (math.inf if p.probs[x] == 0.0 else q.probs[x] / p.probs[x])
        if q.probs[x] > 0.0 else 0.0
        for x in range(n)
    ])
    finite = ratios[np.isfinite(ratios)]
    if finite.size == 0:
        return None
    lo = np.min(finite)
    mask = np.isclose(ratios, lo, rtol=1e-9, atol=0.0)
    if not mask.any():
        return None
    out = np.where(mask, 1.0, 1e-12)
    return out / out.sum()


def solve_gamma(instance: ProblemInstance, tol: float = 1e-6,
                starts: int = 32, seed: int = 0) -> ExponentSolution:
    """Supremum over weight pairs of the worst-case evidence ratio.

    Cross-checks the alternating-ascent value against the min-of-gamma_hc
    program; a residual gap marks the solution as unconverged rather than
    returning a silently stalled value.
    """
    if tol <= 0:
        raise ValidationError("tol must be positive")
    dual = solve_gamma_bar(instance, tol=min(tol, 1e-6),
                           starts=min(starts, 8), seed=seed + 101)
    if math.isinf(dual.value):
        return ExponentSolution(
            value=math.inf, witness_weights=None, witness_pair=None,
            certificate=(), tolerance_achieved=math.inf, iterations=0,
            converged=False, gap_to_dual=None)
    t_cap = dual.value + 1.0
    informed = _informed_minus_start(instance, dual.witness_pair)
    value, witness, cert, iters = _solve_weight_program(
        instance, tol, starts, seed, "gamma", t_cap, informed)
    gap = dual.value - value
    if gap < -(tol + dual.tolerance_achieved):
        raise SolverError(
            f"gamma={value} exceeds gamma_bar={dual.value}: solver bug")
    achieved = max(tol, abs(gap))
    converged = abs(gap) <= 10.0 * tol + dual.tolerance_achieved
    if not converged:
        log.warning("solve_gamma stalled: value=%.9g dual=%.9g gap=%.3g",
                    value, dual.value, gap)
    return ExponentSolution(
        value=value, witness_weights=witness, witness_pair=None,
        certificate=cert, tolerance_achieved=achieved,
        iterations=iters, converged=converged, gap_to_dual=abs(gap))


def solve_C(instance: ProblemInstance, tol: float = 1e-6,
            starts: int = 32, seed: int = 0) -> ExponentSolution:
    """Supremum of the end-state objective (independently chosen vertices)."""
    if tol <= 0:
        raise ValidationError("tol must be positive")
    dual = solve_gamma_bar(instance, tol=min(tol, 1e-6),
                           starts=min(starts, 8), seed=seed + 211)
    if math.isinf(dual.value):
        return ExponentSolution(
            value=math.inf, witness_weights=None, witness_pair=None,
            certificate=(), tolerance_achieved=math.inf, iterations=0,
            converged=False, gap_to_dual=None)
    t_cap = dual.value + 1.0
    informed = _informed_minus_start(instance, dual.witness_pair)
    value, witness, cert, iters = _solve_weight_program(
        instance, tol, starts, seed, "cee", t_cap, informed)
    if value > dual.value + tol + dual.tolerance_achieved:
        raise SolverError(
            f"cee={value} exceeds gamma_bar={dual.value}: solver bug")
    return ExponentSolution(
        value=value, witness_weights=witness, witness_pair=None,
        certificate=cert, tolerance_achieved=tol, iterations=iters,
        converged=True, gap_to_dual=None)


# ---------------------------------------------------------------------------
# gamma_bar: alternate the two distribution blocks
# ---------------------------------------------------------------------------

def _dist_block_min(fixed, poly_mat, t_hi, tol, counter, fixed_is_q):
    """Exactly minimize gamma_hc over one polytope with the other side fixed.

    gamma_hc(., fixed) is a max of linear-fractional functions, hence
    quasi-convex; {member : gamma_hc <= t} is described by the linear
    letter-pair system below, and the minimum is located by bisection.
    """
    k, n = poly_mat.shape

    def feasible(t):
        rows = []
        for a in range(n):
            for b in range(n):
                if a == b:
                    continue
                # ratio (q(a)/p(a)) * (p(b)/q(b)) <= t, linear in the free p
                if fixed_is_q:
                    qa, qb = fixed[a], fixed[b]
                    coeff = t * qb * poly_mat[:, a] - qa * poly_mat[:, b]
                else:
                    pa, pb = fixed[a], fixed[b]
                    coeff = t * pa * poly_mat[:, b] - pb * poly_mat[:, a]
                rows.append((coeff, "ge", 0.0))
        rows.append((np.ones(k), "eq", 1.0))
        problem = LinearFeasibilityProblem(k, tuple(rows))
        counter.count += 1
        return lp_feasible(problem, slack=0.0)

    t, w = _bisect_min_feasible(feasible, 1.0 - 1e-9, t_hi, tol, counter)
    if w is None:
        counter.count += 1
        w = feasible(t_hi)
    if w is None:
        return None, None
    point = w @ poly_mat
    return t, point / point.sum()


def solve_gamma_bar(instance: ProblemInstance, tol: float = 1e-6,
                    starts: int = 16, seed: int = 0) -> ExponentSolution:
    """Minimum over the two polytopes of the per-pair ratio product."""
    if tol <= 0:
        raise ValidationError("tol must be positive")
    P = instance.p0.matrix
    Q = instance.p1.matrix
    k0, n = P.shape
    k1 = Q.shape[0]
    counter = _LpCounter()
    rng = np.random.default_rng(seed)
    block_tol = max(tol / 8.0, 1e-13)

    def hc(p, q):
        return gamma_hc(Distribution(p), Distribution(q))

    # Finite bracket: the all-vertex mixtures have maximal support, so if
    # even they give an infinite ratio product no pair can be finite.
    p_bar = P.mean(axis=0)
    q_bar = Q.mean(axis=0)
    if math.isinf(hc(p_bar, q_bar)):
        return ExponentSolution(
            value=math.inf, witness_weights=None, witness_pair=None,
            certificate=(), tolerance_achieved=math.inf, iterations=0,
            converged=False, gap_to_dual=None)

    init_qs = [q_bar] + [Q[j] for j in range(k1)]
    while len(init_qs) < starts:
        w = rng.dirichlet(np.ones(k1))
        init_qs.append(w @ Q)
    init_qs = init_qs[:max(starts, 1)]

    best = (math.inf, None, None)
    since_improve = 0
    max_sweeps = 25
    for idx, q0 in enumerate(init_qs):
        q = q0
        p = p_bar
        val = hc(p, q)
        if math.isinf(val):
            q = q_bar
            val = hc(p, q)
            if math.isinf(val):
                continue
        for _ in range(max_sweeps):
            _, p_new = _dist_block_min(q, P, val + block_tol, block_tol,
                                       counter, fixed_is_q=True)
            if p_new is not None:
                p = p_new
            _, q_new = _dist_block_min(p, Q, hc(p, q) + block_tol, block_tol,
                                       counter, fixed_is_q=False)
            if q_new is not None:
                q = q_new
            new_val = hc(p, q)
            if val - new_val <= tol / 4.0:
                val = min(val, new_val)
                break
            val = new_val
        if val < best[0] - tol / 10.0:
            best = (val, p, q)
            since_improve = 0
        else:
            since_improve += 1
        if idx + 1 >= STABLE_STARTS and since_improve >= STABLE_STARTS:
            break

    value, p, q = best
    if p is None:
        raise SolverError("gamma_bar solver found no finite pair")
    pd, qd = Distribution(p), Distribution(q)
    value = gamma_hc(pd, qd)
    ratios_up = [(0.0 if qd.probs[x] == 0 else
                  math.inf if pd.probs[x] == 0 else qd.probs[x] / pd.probs[x])
                 for x in range(n)]
    ratios_dn = [(0.0 if pd.probs[x] == 0 else
                  math.inf if qd.probs[x] == 0 else pd.probs[x] / qd.probs[x])
                 for x in range(n)]
    cert = ((int(np.argmax(ratios_up)), int(np.argmax(ratios_dn))),)
    return ExponentSolution(
        value=value, witness_weights=None, witness_pair=(pd, qd),
        certificate=cert, tolerance_achieved=tol, iterations=counter.count,
        converged=True, gap_to_dual=None)


def verify_minimax(instance: ProblemInstance, tol: float = 1e-3,
                   starts: int = 32, seed: int = 0) -> MinimaxReport:
    """Run both sides independently and compare.

    Passes when |gamma - gamma_bar| <= tol plus the two solver tolerances;
    gamma exceeding gamma_bar beyond tolerance is flagged as a solver bug
    (the one-sided inequality holds unconditionally).
    """
    g = solve_gamma(instance, tol=min(tol / 4, 1e-5), starts=starts,
                    seed=seed)
    gb = solve_gamma_bar(instance, tol=min(tol / 4, 1e-5), starts=starts,
                         seed=seed + 17)
    if math.isinf(g.value) and math.isinf(gb.value):
        return MinimaxReport(g, gb, 0.0, tol, True, False)
    gap = abs(g.value - gb.value)
    combined = tol + g.tolerance_achieved + gb.tolerance_achieved
    bug = g.value > gb.value + tol
    return MinimaxReport(g, gb, gap, tol, gap <= combined and not bug, bug)
