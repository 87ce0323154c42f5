"""Shared helpers for the test suite."""

from __future__ import annotations

import random

from qelliptic.groups import SL2_I, SL2_S, SL2_T, SL2Matrix


def random_sl2(rng: random.Random, length: int = 8) -> SL2Matrix:
    """A random word in S and T (entries stay small for short words)."""
    M = SL2_I
    for _ in range(rng.randrange(1, length)):
        M = M * rng.choice([SL2_S, SL2_T, SL2_T.inverse()])
    return M
