"""Shared fixtures: the certified catalog and seeded random case generators."""

from __future__ import annotations

import numpy as np
import pytest

from pconvex.distributions import discrete, from_sample, uniform
from pconvex.functions import (
    antiderivative_from,
    exp_taylor_remainder,
    exponential,
    nonneg_weighted_sum,
    shifted_power,
    taylor_remainder,
)


def certified_members(p: int):
    """Catalog members expected to certify at order p, with their window.

    All members vanish at the left endpoint so they are also eligible for
    the ratio-monotonicity check.
    """
    members = [
        (shifted_power(p + 1.0, domain=(0.0, 1.0)), 0.0, 1.0),
        (shifted_power(p + 2.0, domain=(0.0, 1.0)), 0.0, 1.0),
        (shifted_power(p + 1.0, shift=0.5, domain=(0.5, 2.0)), 0.5, 2.0),
        (shifted_power(p + 3.0, domain=(0.0, 2.0)), 0.0, 2.0),
        (exp_taylor_remainder(p, domain=(0.0, 3.0)), 0.0, 3.0),
        (taylor_remainder(exponential(1.0, domain=(0.0, 3.0)), p), 0.0, 3.0),
        (nonneg_weighted_sum([(0.5, shifted_power(p + 1.0, domain=(0.0, 1.0))),
                              (2.0, shifted_power(p + 2.0, domain=(0.0, 1.0)))]),
         0.0, 1.0),
    ]
    if p >= 1:
        # antiderivative of a certified order-(p-1) member, offset removed
        g = shifted_power(max(p, 1.0), domain=(0.0, 1.5))
        members.append((antiderivative_from(g), 0.0, 1.5))
    return members


def random_bounded_rv(rng: np.random.Generator, a: float, b: float):
    """A random distribution supported in [a, b] (discrete, sample or density)."""
    choice = rng.integers(0, 3)
    if choice == 0:
        k = int(rng.integers(2, 6))
        atoms = np.sort(rng.uniform(a, b, size=k))
        probs = rng.dirichlet(np.ones(k))
        return discrete(atoms, probs, (a, b))
    if choice == 1:
        vals = rng.uniform(a, b, size=int(rng.integers(5, 40)))
        return from_sample(vals, (a, b))
    lo = rng.uniform(a, a + 0.25 * (b - a))
    hi = rng.uniform(lo + 0.25 * (b - a), b)
    return uniform(lo, hi)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
