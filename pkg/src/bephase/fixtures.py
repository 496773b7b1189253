"""Validated 3 (x) 3 PPT entangled fixture.

The family searched is the standard one-parameter ``3 (x) 3`` family of PPT
entangled states, ``sigma(t)`` for ``0 < t < 1``: PPT for every ``t`` and, for the values
used here, certified entangled by the realignment value exceeding 1. The
fixture is whichever seeded sample maximizes the realignment value among
those passing both checks; the chosen parameter is frozen below and
re-validated every time the fixture is built.
"""

from __future__ import annotations

import numpy as np

from .criteria import ppt_check, realignment_value
from .errors import InvalidStateError
from .states import DensityOperator

FIXTURE_SEED = 20010
FIXTURE_TRIALS = 64
REALIGNMENT_MARGIN = 1e-6


def ppt_entangled_family(t: float) -> DensityOperator:
    if not 0.0 < t < 1.0:
        raise ValueError("parameter must lie in (0, 1)")
    s = np.zeros((9, 9))
    for i in (0, 4, 8):
        for j in (0, 4, 8):
            s[i, j] = t
    for i in (1, 2, 3, 5, 7):
        s[i, i] = t
    s[6, 6] = s[8, 8] = (1.0 + t) / 2.0
    s[6, 8] = s[8, 6] = np.sqrt(1.0 - t * t) / 2.0
    return DensityOperator(s / (8.0 * t + 1.0), 3, 3)


def fixture_is_valid(sigma: DensityOperator) -> bool:
    """PPT and realignment value above ``1 + 1e-6``."""
    return bool(ppt_check(sigma)) and realignment_value(sigma) > 1.0 + REALIGNMENT_MARGIN


def search_fixture_parameter(seed: int = FIXTURE_SEED, trials: int = FIXTURE_TRIALS) -> float:
    """Seeded random search over the family; returns the best valid parameter."""
    rng = np.random.default_rng(seed)
    best_t, best_r = None, -np.inf
    for t in rng.uniform(0.01, 0.99, size=trials):
        sigma = ppt_entangled_family(float(t))
        if not fixture_is_valid(sigma):
            continue
        r = realignment_value(sigma)
        if r > best_r:
            best_t, best_r = float(t), r
    if best_t is None:
        raise InvalidStateError("no valid fixture in the sampled family")
    return best_t


# frozen output of search_fixture_parameter(); tests check they agree
FIXTURE_PARAMETER = 0.2381437350152988


def ppt_entangled_fixture() -> DensityOperator:
    sigma = ppt_entangled_family(FIXTURE_PARAMETER)
    if not fixture_is_valid(sigma):
        raise InvalidStateError("shipped fixture failed validation")
    return sigma
