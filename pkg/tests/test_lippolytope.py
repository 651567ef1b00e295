import threading
from fractions import Fraction

import pytest

from conftest import brute_force_lip_vertices
from liptensor.errors import CapExceeded
from liptensor.instances import functional, random_instance, validate_metric
from liptensor.lippolytope import enumerate_vertices, lip_constant, vertex_values


def test_p3_vertices(p3):
    X, _ = p3
    assert vertex_values(X) == ((0, -1, -2), (0, -1, 0), (0, 1, 0), (0, 1, 2))


def test_matches_halfspace_oracle():
    for seed in range(40):
        X, _ = random_instance(seed, 2 + seed % 4, 1)
        assert list(vertex_values(X)) == brute_force_lip_vertices(X)


def test_vertices_are_unit_lipschitz_and_symmetric():
    X, _ = random_instance(9, 6, 1)
    vs = enumerate_vertices(X)
    table = set(vs.value_table())
    for g in vs.vertices:
        assert lip_constant(g) == 1
        assert tuple(-v for v in g.values) in table
    assert len(vs.half()) * 2 == len(vs)


def test_cap():
    X, _ = random_instance(1, 5, 1)
    with pytest.raises(CapExceeded):
        vertex_values(X, cap=4)


def test_concurrent_memo_is_consistent():
    X = validate_metric([[0, 2, 3, 4], [2, 0, 2, 3], [3, 2, 0, 2], [4, 3, 2, 0]])
    out = []
    threads = [threading.Thread(target=lambda: out.append(vertex_values(X))) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(o == out[0] for o in out)


def test_lip_constant(p3):
    X, _ = p3
    assert lip_constant(functional(X, [0, 1, 2])) == 1
    assert lip_constant(functional(X, [0, 3, Fraction(1, 2)])) == 3
