"""Shared fixtures: the two bundled instances and common weight pairs."""

from __future__ import annotations

import numpy as np
import pytest

from advht.model import (
    Distribution,
    ProblemInstance,
    WeightPair,
    instance_from_dict,
)


def make_indicator_instance() -> ProblemInstance:
    """Three-letter instance whose optimal weights are not indicators.

    P0 is the segment between (0, 1/4, 3/4) and (1/2, 0, 1/2); P1 is the
    uniform singleton.  The optimal exponent base is exactly 4 with the
    unique maximizing direction f+ = (1/3, 1, 0), f- = (0, 0, 1).
    """
    return instance_from_dict({
        "alphabet": ["a", "b", "c"],
        "P0": {"vertices": [["0", "1/4", "3/4"], ["1/2", "0", "1/2"]]},
        "P1": {"vertices": [["1/3", "1/3", "1/3"]]},
    })


def make_weaklfd_instance() -> ProblemInstance:
    """Five-letter instance with a weak but no strong least-favorable pair."""
    return instance_from_dict({
        "alphabet": ["1", "2", "3", "4", "5"],
        "P0": {"vertices": [["1/50", "0", "1/5", "3/5", "9/50"],
                            ["1/50", "2/5", "0", "2/5", "9/50"]]},
        "P1": {"vertices": [["9/50", "4/15", "4/15", "4/15", "1/50"]]},
    })


def p_lambda(lam: float) -> Distribution:
    """Member of the weaklfd P0 segment at mixing parameter lam in [0, 1]."""
    return Distribution(np.array(
        [1 / 50, 2 * lam / 5, (1 - lam) / 5, (3 - lam) / 5, 9 / 50]))


@pytest.fixture(scope="session")
def indicator_instance() -> ProblemInstance:
    return make_indicator_instance()


@pytest.fixture(scope="session")
def weaklfd_instance() -> ProblemInstance:
    return make_weaklfd_instance()


@pytest.fixture(scope="session")
def claim4_weights() -> WeightPair:
    return WeightPair(np.array([1 / 3, 1.0, 0.0]), np.array([0.0, 0.0, 1.0]))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
