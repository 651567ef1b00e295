import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from liptensor.errors import MalformedProblem
from liptensor.lp import (INFEASIBLE, OPTIMAL, UNBOUNDED, lp_check_certificate, lp_solve, make_problem,
                          problem_from_json, problem_to_json, solution_from_json)
from oracles import brute_force_lp, random_lp


def test_single_variable_max():
    s = lp_solve(make_problem([1], [([1], "<=", 3)], "max"))
    assert s.status == OPTIMAL and s.primal == (3,) and s.dual == (1,)


def test_infeasible_farkas():
    p = make_problem([1, 1], [([1, 1], "<=", 1), ([1, 1], ">=", 2)])
    s = lp_solve(p)
    assert s.status == INFEASIBLE
    assert lp_check_certificate(p, s)


def test_unbounded_ray():
    p = make_problem([1, 1], [([1, -1], "<=", 1)], "max")
    s = lp_solve(p)
    assert s.status == UNBOUNDED
    assert lp_check_certificate(p, s)


def test_fractional_optimum():
    p = make_problem([1, 1], [([3, 1], "<=", 4), ([1, 3], "<=", 6)], "max")
    s = lp_solve(p)
    assert s.objective == Fraction(5, 2) or s.objective == sum(s.primal)
    assert lp_check_certificate(p, s)


def test_beale_cycling_example_terminates():
    # classic cycling instance under Dantzig pricing without anti-cycling
    obj = [Fraction(-3, 4), 150, Fraction(-1, 50), 6]
    cons = [([Fraction(1, 4), -60, Fraction(-1, 25), 9], "<=", 0),
            ([Fraction(1, 2), -90, Fraction(-1, 50), 3], "<=", 0),
            ([0, 0, 1, 0], "<=", 1)]
    p = make_problem(obj, cons)
    s = lp_solve(p)
    assert s.status == OPTIMAL and s.objective == Fraction(-1, 20)
    assert lp_check_certificate(p, s)


def test_free_variables_and_equalities():
    p = make_problem([1, -1], [([1, 1], "=", 2), ([1, -1], "<=", 1)], "max", [(None, None), (None, None)])
    s = lp_solve(p)
    assert s.objective == 1 and lp_check_certificate(p, s)


def test_tampered_certificate_rejected():
    p = make_problem([1], [([1], "<=", 3)], "max")
    s = lp_solve(p)
    bad = type(s)(s.status, s.primal, (Fraction(2),), s.objective)
    assert not lp_check_certificate(p, bad)


def test_malformed_problem():
    with pytest.raises(MalformedProblem):
        make_problem([1, 2], [([1], "<=", 1)])
    with pytest.raises(MalformedProblem):
        make_problem([1], [([1], "<", 1)])


def test_json_round_trip():
    p = make_problem([1, Fraction(1, 3)], [([1, 2], "<=", Fraction(7, 2))], "max")
    s = lp_solve(p)
    p2 = problem_from_json(problem_to_json(p))
    s2 = solution_from_json(s.to_json())
    assert p2 == p and s2 == s


def test_matches_vertex_oracle():
    rng = random.Random(7)
    for _ in range(300):
        p = random_lp(rng)
        s = lp_solve(p)
        status, value = brute_force_lp(p)
        assert s.status == status, p
        if status == OPTIMAL:
            assert s.objective == value
        assert lp_check_certificate(p, s)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_certificates_always_recheck(seed):
    p = random_lp(random.Random(seed), max_vars=4, max_rows=5)
    assert lp_check_certificate(p, lp_solve(p))
