"""Core domain types: alphabets, distributions, polytopes, letter weights.

Distributions over a finite alphabet are plain probability vectors.  Each
hypothesis owns a convex set of distributions given in vertex form; every
optimization downstream exploits the fact that linear and linear-fractional
objectives over such a set attain their extrema at vertices.

Instance files are JSON with an alphabet and the two vertex lists; entries
may be IEEE doubles or exact rational strings like "4/15" (parsed via
`fractions.Fraction` before conversion, so decimal drift never enters the
bundled instances).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

PROB_ATOL = 1e-12          # absolute tolerance on probability sums / entries
DUPLICATE_VERTEX_TOL = 1e-12
MEMBERSHIP_SLACK = 1e-10   # LP residual tolerance for polytope membership

# Documented soft limits for the solvers; nothing below enforces scale
# beyond these guards.
MAX_ALPHABET = 64
MAX_VERTICES = 256


class ParseError(ValueError):
    """Instance or policy file could not be parsed."""


class ValidationError(ValueError):
    """A domain invariant was violated; the message names the first one."""


def safe_ratio(num, den):
    """Ratio with the conventions 0/0 = 0 and a/0 = +inf for a > 0.

    Works for floats and Fractions alike; the 0/0 rule is applied in one
    place so every caller agrees on it.
    """
    if den == 0:
        if num == 0:
            return 0 if isinstance(num, (int, Fraction)) else 0.0
        return math.inf
    return num / den


def _parse_number(value) -> float:
    """Accept JSON numbers or exact rational/decimal strings."""
    if isinstance(value, bool):
        raise ParseError(f"boolean {value!r} is not a number")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse number {value!r}") from exc
    raise ParseError(f"cannot parse number {value!r}")


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.asarray(arr, dtype=np.float64).copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Alphabet:
    """Ordered finite alphabet of letter labels."""

    letters: tuple[str, ...]

    def __post_init__(self):
        if len(self.letters) < 2:
            raise ValidationError("alphabet must have at least 2 letters")
        if any(not isinstance(x, str) or not x for x in self.letters):
            raise ValidationError("alphabet labels must be non-empty strings")
        if len(set(self.letters)) != len(self.letters):
            raise ValidationError("alphabet labels must be unique")

    @property
    def size(self) -> int:
        return len(self.letters)

    def index(self, letter: str) -> int:
        return self.letters.index(letter)


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability vector over an alphabet.

    Entries must be non-negative and sum to 1 within ``PROB_ATOL``; vectors
    inside tolerance are renormalized exactly once at construction.
    """

    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size < 1:
            raise ValidationError("distribution must be a 1-d vector")
        if np.any(probs < 0):
            i = int(np.argmin(probs))
            raise ValidationError(
                f"negative entry {probs[i]!r} at position {i}")
        total = float(probs.sum())
        if abs(total - 1.0) > PROB_ATOL:
            raise ValidationError(
                f"probabilities sum to {total!r}, not 1 within {PROB_ATOL}")
        object.__setattr__(self, "probs", _readonly(probs / total))

    @property
    def size(self) -> int:
        return int(self.probs.size)

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return isinstance(other, Distribution) and np.array_equal(
            self.probs, other.probs)

    def __repr__(self) -> str:
        return f"Distribution({self.probs.tolist()})"


@dataclass(frozen=True)
class DistributionPolytope:
    """Convex set of distributions in vertex (V-) representation."""

    vertices: tuple[Distribution, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValidationError("polytope needs at least one vertex")
        if len(self.vertices) > MAX_VERTICES:
            raise ValidationError(
                f"more than {MAX_VERTICES} vertices (soft limit)")
        dims = {v.size for v in self.vertices}
        if len(dims) != 1:
            raise ValidationError("polytope vertices have mixed dimensions")
        for i in range(len(self.vertices)):
            for j in range(i + 1, len(self.vertices)):
                gap = np.max(np.abs(self.vertices[i].probs
                                    - self.vertices[j].probs))
                if gap < DUPLICATE_VERTEX_TOL:
                    raise ValidationError(
                        f"duplicate vertex: entries {i} and {j} coincide")

    @property
    def dim(self) -> int:
        return self.vertices[0].size

    @property
    def matrix(self) -> np.ndarray:
        """Vertex matrix of shape (num_vertices, alphabet size)."""
        return np.stack([v.probs for v in self.vertices])

    def contains(self, dist: Distribution, tol: float = MEMBERSHIP_SLACK
                 ) -> tuple[bool, float]:
        """Membership test via a small LP over convex-combination weights.

        Returns (is_member, residual) where residual is the achievable
        L-infinity distance between ``dist`` and the polytope.
        """
        from . import simplex

        if dist.size != self.dim:
            raise ValidationError("dimension mismatch in membership test")
        residual = simplex.linf_distance_to_hull(self.matrix, dist.probs)
        return residual <= tol, residual


@dataclass(frozen=True)
class ProblemInstance:
    """Alphabet plus one distribution polytope per hypothesis."""

    alphabet: Alphabet
    p0: DistributionPolytope
    p1: DistributionPolytope

    def __post_init__(self):
        n = self.alphabet.size
        if n > MAX_ALPHABET:
            raise ValidationError(f"alphabet larger than {MAX_ALPHABET} (soft limit)")
        for name, poly in (("P0", self.p0), ("P1", self.p1)):
            if poly.dim != n:
                raise ValidationError(
                    f"dimension mismatch: {name} vertices have size "
                    f"{poly.dim}, alphabet has {n}")

    def polytope(self, h: int) -> DistributionPolytope:
        if h == 0:
            return self.p0
        if h == 1:
            return self.p1
        raise ValidationError(f"hypothesis must be 0 or 1, got {h}")


@dataclass(frozen=True, eq=False)
class WeightPair:
    """Letter-weight functions (f_plus, f_minus).

    Both vectors take values in [0, 1] and may not both be identically
    zero.  Two normal forms are in use: the simplex form (each nonzero
    component sums to 1, see ``normalize_weight_pair``) for the ratio
    optimizations, and the sub-probability form
    (f_plus(x) + f_minus(x) <= 1 per letter) required wherever the weights
    become transition probabilities.  The ratio objectives are invariant
    under separate rescaling, so the two forms describe the same direction;
    machine builders validate ``is_subprobability`` at their boundary.
    """

    f_plus: np.ndarray
    f_minus: np.ndarray

    def __post_init__(self):
        fp = np.asarray(self.f_plus, dtype=np.float64).copy()
        fm = np.asarray(self.f_minus, dtype=np.float64).copy()
        if fp.shape != fm.shape or fp.ndim != 1:
            raise ValidationError("weight vectors must be 1-d and same length")
        for name, f in (("f_plus", fp), ("f_minus", fm)):
            if np.any(f < -PROB_ATOL):
                raise ValidationError(f"{name} has a negative entry")
            if np.any(f > 1.0 + PROB_ATOL):
                raise ValidationError(f"{name} has an entry above 1")
        np.clip(fp, 0.0, 1.0, out=fp)
        np.clip(fm, 0.0, 1.0, out=fm)
        if not fp.any() and not fm.any():
            raise ValidationError("weight pair is identically zero")
        object.__setattr__(self, "f_plus", _readonly(fp))
        object.__setattr__(self, "f_minus", _readonly(fm))

    @property
    def size(self) -> int:
        return int(self.f_plus.size)

    @property
    def is_subprobability(self) -> bool:
        """True when f_plus(x) + f_minus(x) <= 1 for every letter."""
        return bool(np.all(self.f_plus + self.f_minus <= 1.0 + PROB_ATOL))

    def __eq__(self, other) -> bool:
        return (isinstance(other, WeightPair)
                and np.array_equal(self.f_plus, other.f_plus)
                and np.array_equal(self.f_minus, other.f_minus))

    def __repr__(self) -> str:
        return (f"WeightPair(f_plus={self.f_plus.tolist()}, "
                f"f_minus={self.f_minus.tolist()})")


def expectation(f: Sequence[float] | np.ndarray, d: Distribution | np.ndarray
                ) -> float:
    """Expected weight sum_x d(x) f(x)."""
    probs = d.probs if isinstance(d, Distribution) else np.asarray(d, float)
    farr = np.asarray(f, dtype=np.float64)
    if farr.shape != probs.shape:
        raise ValidationError("dimension mismatch in expectation")
    return float(farr @ probs)


def normalize_weight_pair(w: WeightPair) -> WeightPair:
    """Rescale each nonzero component so it sums to 1; zero parts stay zero.

    The ratio objectives downstream are invariant under separate rescaling
    of f_plus and f_minus, so this picks the per-component simplex
    normalization as the canonical representative.
    """
    sp = float(w.f_plus.sum())
    sm = float(w.f_minus.sum())
    if sp == 0.0 and sm == 0.0:
        raise ValidationError("cannot normalize an identically zero pair")
    fp = w.f_plus / sp if sp > 0 else w.f_plus
    fm = w.f_minus / sm if sm > 0 else w.f_minus
    return WeightPair(fp, fm)


def max_normalize_weight_pair(w: WeightPair) -> WeightPair:
    """Rescale jointly so max_x f_plus(x) + f_minus(x) = 1."""
    peak = float(np.max(w.f_plus + w.f_minus))
    if peak <= 0:
        raise ValidationError("cannot normalize an identically zero pair")
    return WeightPair(w.f_plus / peak, w.f_minus / peak)


# ---------------------------------------------------------------------------
# Instance file I/O
# ---------------------------------------------------------------------------

def instance_from_dict(data: dict) -> ProblemInstance:
    try:
        letters = tuple(str(x) for x in data["alphabet"])
        raw0 = data["P0"]["vertices"]
        raw1 = data["P1"]["vertices"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing or malformed field: {exc}") from exc
    alphabet = Alphabet(letters)

    def build(raw_vertices, name):
        dists = []
        for row in raw_vertices:
            vec = np.array([_parse_number(v) for v in row], dtype=np.float64)
            if vec.size != alphabet.size:
                raise ValidationError(
                    f"dimension mismatch: {name} vertex has {vec.size} "
                    f"entries, alphabet has {alphabet.size}")
            dists.append(Distribution(vec))
        return DistributionPolytope(tuple(dists))

    return ProblemInstance(alphabet, build(raw0, "P0"), build(raw1, "P1"))


def load_instance(path) -> ProblemInstance:
    """Load and validate a ProblemInstance from a JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON in {path}: {exc}") from exc
    return instance_from_dict(data)


def instance_to_dict(instance: ProblemInstance) -> dict:
    return {
        "alphabet": list(instance.alphabet.letters),
        "P0": {"vertices": [v.probs.tolist() for v in instance.p0.vertices]},
        "P1": {"vertices": [v.probs.tolist() for v in instance.p1.vertices]},
    }


def save_instance(instance: ProblemInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_dict(instance), fh, indent=2)
        fh.write("\n")


def random_instance(rng: np.random.Generator, alphabet_size: int = 4,
                    max_vertices: int = 3, min_mass: float = 0.05
                    ) -> ProblemInstance:
    """Seeded random instance with strictly positive vertices.

    Vertices are Dirichlet draws mixed with the uniform distribution so
    every letter keeps mass at least ``min_mass / alphabet_size``, which
    keeps likelihood ratios finite and the solvers well conditioned.
    """
    letters = tuple(f"x{i}" for i in range(alphabet_size))
    uniform = np.full(alphabet_size, 1.0 / alphabet_size)

    def polytope():
        k = int(rng.integers(1, max_vertices + 1))
        verts = []
        while len(verts) < k:
            raw = rng.dirichlet(np.ones(alphabet_size))
            vec = (1.0 - min_mass) * raw + min_mass * uniform
            vec = vec / vec.sum()
            if all(np.max(np.abs(vec - v.probs)) >= DUPLICATE_VERTEX_TOL
                   for v in verts):
                verts.append(Distribution(vec))
        return DistributionPolytope(tuple(verts))

    return ProblemInstance(Alphabet(letters), polytope(), polytope())
