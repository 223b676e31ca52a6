"""Shared golden staircases and corpus helpers."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from gzfiber import Staircase
from gzfiber.staircase import random_staircase


def mk(flavor: str, rows) -> Staircase:
    return Staircase(flavor, tuple(tuple(Fraction(x) for x in row) for row in rows))


@pytest.fixture(scope="session")
def fig_u10() -> Staircase:
    """Rational staircase on a U(10) orbit realizing the non-regular showcase
    pattern: a big 24-vertex component, a double diamond, a long right chain,
    a two-vertex link, and nine singletons (seven of them below the top row).
    """
    return mk(
        "unitary",
        [
            [12],
            [12, 12],
            [12, 12, 12],
            [12, 12, 12, 12],
            [24, 12, 12, 12, 4],
            [24, 24, 12, 12, 8, 4],
            [27, 24, 20, 12, 12, 8, 4],
            [30, 24, 24, 12, 12, 12, 4, 4],
            [30, 30, 24, 18, 12, 12, 9, 4, 2],
            [30, 30, 30, 22, 15, 12, 12, 6, 4, 1],
        ],
    )


@pytest.fixture(scope="session")
def fig_so5() -> Staircase:
    """SO(5) orbit point whose pattern has one black diamond per side, one
    white width-2 diamond, and isolated white vertices."""
    return mk("orthogonal", [[0], [1], [1, -1], [2, 1]])


@pytest.fixture(scope="session")
def fig_so23() -> Staircase:
    """SO(23) orbit point whose single white component has the width profile
    1,2,3,2,3,2,1 | 1,2,...,8,7,8,7,6,7,6,5,4,3 (pinched at width 1), with
    all black components plain chains reaching the top row."""
    zeros = {
        2: 1, 3: 1, 4: 1, 5: 1, 6: 1, 7: 0, 8: 1, 9: 1, 10: 2, 11: 2, 12: 3,
        13: 3, 14: 4, 15: 3, 16: 4, 17: 3, 18: 3, 19: 3, 20: 3, 21: 2, 22: 2, 23: 1,
    }
    rows = []
    for k in range(2, 24):
        z = zeros[k]
        p_k = k // 2 - z
        rows.append([*range(p_k, 0, -1), *([0] * z)])
    return mk("orthogonal", rows)


@pytest.fixture(scope="session")
def stiefel_staircases() -> dict[str, Staircase]:
    """White-diamond / pentagon staircases realizing SO(4), SO(3),
    SO(4)/SO(2) and SO(5)/SO(3)."""
    return {
        "SO(4)": mk("orthogonal", [[0], [0], [0, 0], [1, 0], [2, 1, 0], [3, 2, 1]]),
        "SO(3)": mk("orthogonal", [[0], [0], [1, 0], [1, 1]]),
        "SO(4)/SO(2)": mk("orthogonal", [[0], [0], [0, 0], [1, 0], [2, 1, 0]]),
        "SO(5)/SO(3)": mk("orthogonal", [[0], [0], [0, 0], [0, 0], [1, 0, 0], [2, 1, 0]]),
    }


def interior_staircase(n: int) -> Staircase:
    """Strictly interlacing staircase below the regular top row (n, ..., 0)."""
    top = [Fraction(n + 1 - i) for i in range(n + 1)]
    rows = [tuple(top)]
    for k in range(n, 0, -1):
        above = rows[0]
        rows.insert(0, tuple((above[j] + above[j + 1]) / 2 for j in range(k)))
    return Staircase("unitary", tuple(rows))


def corpus(flavor: str, count: int, seed: int, n_max: int = 6, span: int = 12) -> list[Staircase]:
    rng = random.Random(seed)
    return [random_staircase(flavor, rng.randint(1, n_max), rng, span=span) for _ in range(count)]
