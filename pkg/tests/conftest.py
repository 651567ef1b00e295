import random
from fractions import Fraction
from itertools import combinations

import pytest

from liptensor.instances import build_space, validate_metric
from liptensor.polytope import solve


@pytest.fixture
def p3():
    """Path 0 - a - b with unit steps, E = R."""
    return validate_metric([[0, 1, 2], [1, 0, 1], [2, 1, 0]], ["0", "a", "b"]), build_space(1, "linf")


@pytest.fixture
def triangle_linf2():
    """Equilateral triangle of side 1 with E = l_inf^2."""
    return validate_metric([[0, 1, 1], [1, 0, 1], [1, 1, 0]]), build_space(2, "linf")


@pytest.fixture
def rng():
    return random.Random(1234)


def brute_force_lip_vertices(X):
    """Vertices of the Lipschitz ball by intersecting every (n-1)-subset of
    the halfspaces +-(g(x) - g(y)) <= d(x, y), with g(0) = 0 eliminated."""
    n = X.n
    rows = []
    for i in range(n):
        for j in range(n):
            if i != j:
                r = [Fraction(0)] * (n - 1)
                if i:
                    r[i - 1] += 1
                if j:
                    r[j - 1] -= 1
                rows.append((tuple(r), X.d[i][j]))
    found = set()
    for combo in combinations(range(len(rows)), n - 1):
        x = solve([rows[k][0] for k in combo], [rows[k][1] for k in combo])
        if x is None:
            continue
        if all(sum(a * b for a, b in zip(r, x)) <= rhs for r, rhs in rows):
            found.add((Fraction(0),) + x)
    return sorted(found)
