"""Small dense LP solver: phase-one feasibility and two-phase minimization.

All variables are non-negative by contract; callers encode anything else
explicitly.  Pivoting uses Bland's rule (lowest-index entering column,
lowest-index tie-break on the ratio test), which is deterministic and
cycle-free, so identical inputs give bit-identical answers.  The problems
solved here are tiny (tens of variables) and a full dense tableau is the
simplest correct choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

REDUCED_COST_TOL = 1e-10
PIVOT_TOL = 1e-10
FEAS_TOL = 1e-9
DEFAULT_SLACK = 1e-10

Relation = Literal["ge", "eq"]


class SimplexError(RuntimeError):
    """Numerical failure inside the simplex; never silently wrong-signed."""


@dataclass(frozen=True)
class LinearFeasibilityProblem:
    """Pure feasibility system over non-negative variables.

    ``constraints`` is a sequence of (coefficients, relation, bound) with
    relation "ge" (a.x >= b) or "eq" (a.x == b).
    """

    num_vars: int
    constraints: tuple[tuple[np.ndarray, Relation, float], ...]

    def __post_init__(self):
        rows = []
        for coeffs, rel, bound in self.constraints:
            arr = np.asarray(coeffs, dtype=np.float64)
            if arr.shape != (self.num_vars,):
                raise ValueError(
                    f"constraint vector has length {arr.size}, "
                    f"expected {self.num_vars}")
            if rel not in ("ge", "eq"):
                raise ValueError(f"unknown relation {rel!r}")
            rows.append((arr, rel, float(bound)))
        object.__setattr__(self, "constraints", tuple(rows))


def _pivot(tableau: np.ndarray, basis: list[int], row: int, col: int) -> None:
    piv = tableau[row, col]
    tableau[row] /= piv
    for r in range(tableau.shape[0]):
        if r != row and tableau[r, col] != 0.0:
            tableau[r] -= tableau[r, col] * tableau[row]
    basis[row] = col


def _bland_iterate(tableau: np.ndarray, basis: list[int], c: np.ndarray,
                   max_pivots: int) -> Literal["optimal", "unbounded"]:
    m, width = tableau.shape
    n = width - 1
    for _ in range(max_pivots):
        cb = c[basis]
        reduced = c - cb @ tableau[:, :n]
        entering = -1
        for j in range(n):
            if reduced[j] < -REDUCED_COST_TOL:
                entering = j
                break
        if entering < 0:
            return "optimal"
        col = tableau[:, entering]
        leaving = -1
        best = np.inf
        for i in range(m):
            if col[i] > PIVOT_TOL:
                ratio = tableau[i, -1] / col[i]
                if ratio < best - PIVOT_TOL or (
                        abs(ratio - best) <= PIVOT_TOL
                        and (leaving < 0 or basis[i] < basis[leaving])):
                    best = ratio
                    leaving = i
        if leaving < 0:
            return "unbounded"
        _pivot(tableau, basis, leaving, entering)
    raise SimplexError("pivot limit exceeded (should not happen with Bland)")


def _solve_standard(A: np.ndarray, b: np.ndarray, c: np.ndarray
                    ) -> tuple[str, Optional[np.ndarray], float]:
    """min c.x subject to A x = b, x >= 0 via two-phase dense simplex."""
    A = np.array(A, dtype=np.float64)
    b = np.array(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    m, n = A.shape
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    # Phase 1: artificial basis.
    tableau = np.hstack([A, np.eye(m), b[:, None]])
    basis = list(range(n, n + m))
    c1 = np.concatenate([np.zeros(n), np.ones(m)])
    max_pivots = 50 * (m + n + 10)
    status = _bland_iterate(tableau, basis, c1, max_pivots)
    if status != "optimal":
        raise SimplexError("phase one reported unbounded")
    phase1_obj = float(c1[basis] @ tableau[:, -1])
    if phase1_obj > FEAS_TOL:
        return "infeasible", None, np.inf

    # Drive remaining artificials out of the basis; drop redundant rows.
    keep = np.ones(m, dtype=bool)
    for i in range(m):
        if basis[i] >= n:
            pivot_col = -1
            for j in range(n):
                if abs(tableau[i, j]) > PIVOT_TOL:
                    pivot_col = j
                    break
            if pivot_col >= 0:
                _pivot(tableau, basis, i, pivot_col)
            else:
                keep[i] = False
    if not keep.all():
        tableau = tableau[keep]
        basis = [bvar for bvar, k in zip(basis, keep) if k]

    # Phase 2 on original columns only.
    tableau = np.hstack([tableau[:, :n], tableau[:, -1:]])
    status = _bland_iterate(tableau, basis, c,
                            max_pivots)
    if status == "unbounded":
        return "unbounded", None, -np.inf
    x = np.zeros(n)
    for i, bvar in enumerate(basis):
        x[bvar] = tableau[i, -1]
    x[np.abs(x) < 1e-15] = 0.0
    return "optimal", x, float(c @ x)


def _to_standard(problem: LinearFeasibilityProblem, slack: float
                 ) -> tuple[np.ndarray, np.ndarray, int]:
    """Encode ge rows as equalities with surplus variables, shifted by slack."""
    n = problem.num_vars
    ge_rows = [i for i, (_, rel, _) in enumerate(problem.constraints)
               if rel == "ge"]
    m = len(problem.constraints)
    A = np.zeros((m, n + len(ge_rows)))
    b = np.zeros(m)
    surplus = 0
    for i, (coeffs, rel, bound) in enumerate(problem.constraints):
        A[i, :n] = coeffs
        if rel == "ge":
            A[i, n + surplus] = -1.0
            b[i] = bound + slack
            surplus += 1
        else:
            b[i] = bound
    return A, b, n


def lp_feasible(problem: LinearFeasibilityProblem,
                slack: float = DEFAULT_SLACK) -> Optional[np.ndarray]:
    """Find x >= 0 satisfying every constraint, inequalities with margin.

    Each "ge" row must hold with slack at least ``slack``; equalities are
    met within the solver's feasibility tolerance.  Returns the point or
    None when no such point exists.
    """
    A, b, n = _to_standard(problem, slack)
    status, x, _ = _solve_standard(A, b, np.zeros(A.shape[1]))
    if status == "infeasible":
        return None
    if status != "optimal" or x is None:
        raise SimplexError(f"unexpected status {status} in feasibility solve")
    return x[:n]


def lp_minimize(problem: LinearFeasibilityProblem, objective: Sequence[float]
                ) -> tuple[str, Optional[np.ndarray], float]:
    """min objective.x over the (slack-free) constraint system."""
    A, b, n = _to_standard(problem, 0.0)
    c = np.zeros(A.shape[1])
    c[:n] = np.asarray(objective, dtype=np.float64)
    status, x, value = _solve_standard(A, b, c)
    if x is not None:
        x = x[:n]
    return status, x, value


def linf_distance_to_hull(vertices: np.ndarray, point: np.ndarray) -> float:
    """Smallest L-infinity distance from ``point`` to conv(rows of vertices).

    Solved as: min t over (w, t) with w >= 0, sum w = 1 and
    |V^T w - point| <= t componentwise.
    """
    V = np.asarray(vertices, dtype=np.float64)
    p = np.asarray(point, dtype=np.float64)
    k, n = V.shape
    rows = []
    ones = np.zeros(k + 1)
    ones[:k] = 1.0
    rows.append((ones, "eq", 1.0))
    for x in range(n):
        up = np.zeros(k + 1)
        up[:k] = -V[:, x]
        up[k] = 1.0
        rows.append((up, "ge", -p[x]))       # t - (V^T w)_x >= -p_x
        lo = np.zeros(k + 1)
        lo[:k] = V[:, x]
        lo[k] = 1.0
        rows.append((lo, "ge", p[x]))        # t + (V^T w)_x >= p_x
    problem = LinearFeasibilityProblem(k + 1, tuple(rows))
    objective = np.zeros(k + 1)
    objective[k] = 1.0
    status, x, value = lp_minimize(problem, objective)
    if status != "optimal" or x is None:
        raise SimplexError(f"membership LP ended with status {status}")
    return max(value, 0.0)
