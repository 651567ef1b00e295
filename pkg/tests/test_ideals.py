import itertools
import random
from fractions import Fraction

import pytest

from liptensor import errors
from liptensor.crossnorms import d_p_bounds, eps_norm, pi_norm
from liptensor.ideals import (alpha_prime_norm, compose, d_p_operator_norm, extremal_functional, injective_dual,
                              lip_alpha_norm, lip_norm, p_summing_norm, rank_one)
from liptensor.instances import (dual_space, elementary, functional, molecule, operator, operator_norm, pairing,
                                 random_functional, random_instance, random_matrix, random_molecule,
                                 random_operator, random_point_map, zero_molecule, zero_operator)
from liptensor.crossnorms import point_map_lip
from liptensor.lippolytope import lip_constant, vertex_values
from liptensor.rationals import INF
from oracles import family_ratio_power


def test_lip_norm_examples(p3):
    X, E = p3
    assert lip_norm(zero_operator(X, E)) == 0
    assert lip_norm(operator(X, E, [[0], [1], [2]])) == 1


def test_rank_one_p3(p3):
    X, E = p3
    f = rank_one(functional(X, [0, 1, 2]), [3], E)
    assert f.values == ((0,), (3,), (6,))
    assert lip_alpha_norm(f, "pi") == 3 and lip_alpha_norm(f, "eps") == 3
    assert rank_one(functional(X, [0, 0, 0]), [3], E).is_zero()


def test_rank_one_isometry_random():
    rng = random.Random(3)
    for seed in range(25):
        X, E = random_instance(seed, rng.randint(2, 5), rng.randint(1, 3))
        g = random_functional(rng, X)
        phi = tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(E.dim))
        f = rank_one(g, phi, E)
        target = lip_constant(g) * E.dual_norm(phi)
        assert lip_alpha_norm(f, "pi") == target
        assert lip_alpha_norm(f, "eps") == target


def test_eps_dual_dominates_pi_dual():
    rng = random.Random(4)
    for seed in range(25):
        X, E = random_instance(seed, rng.randint(2, 5), rng.randint(1, 3))
        f = random_operator(rng, X, E)
        assert lip_alpha_norm(f, "eps") >= lip_alpha_norm(f, "pi")


def test_injective_dual_certificate():
    rng = random.Random(5)
    for seed in range(15):
        X, E = random_instance(seed, rng.randint(2, 5), rng.randint(1, 2))
        f = random_operator(rng, X, E)
        if f.is_zero():
            continue
        c = injective_dual(f)
        assert eps_norm(c.molecule).value <= 1
        assert pairing(c.molecule, f) == c.value
        assert sum(t[0] for t in c.decomposition) == c.value


def test_unknown_alpha(p3):
    with pytest.raises(errors.InputError):
        lip_alpha_norm(zero_operator(*p3), "dp")


def test_summing_basics(p3):
    X, E = p3
    assert p_summing_norm(zero_operator(X, E), Fraction(2)).value == 0
    f = operator(X, E, [[0], [1], [2]])
    assert p_summing_norm(f, INF).value == lip_norm(f)
    for p in (Fraction(1), Fraction(2), Fraction(3, 2)):
        assert p_summing_norm(f, p).value >= lip_norm(f)


def test_summing_monotone_in_p():
    rng = random.Random(6)
    for seed in range(15):
        X, E = random_instance(seed, rng.randint(2, 5), rng.randint(1, 2))
        f = random_operator(rng, X, E)
        one, two, three = (p_summing_norm(f, Fraction(k)) for k in (1, 2, 3))
        inf = p_summing_norm(f, INF)
        assert inf.value <= three.upper and three.lower <= two.upper and two.lower <= one.value


def test_summing_certificate_invariant():
    rng = random.Random(7)
    for seed in range(10):
        X, E = random_instance(seed, rng.randint(2, 5), rng.randint(1, 2))
        f = random_operator(rng, X, E)
        c = p_summing_norm(f, Fraction(2))
        if f.is_zero():
            continue
        a = [E.dual_norm(tuple(x - y for x, y in zip(f.values[i], f.values[j]))) ** 2 for i, j in c.pairs]
        worst = max(sum(w * (g[i] - g[j]) ** 2 for w, (i, j) in zip(c.weights, c.pairs))
                    for g in vertex_values(X))
        assert sum(w * ai for w, ai in zip(c.weights, a)) == c.power
        assert worst <= 1
        assert c.lower ** 2 <= c.power <= c.upper ** 2


def test_summing_brute_force_families():
    rng = random.Random(8)
    for seed in range(8):
        X, E = random_instance(seed, rng.randint(2, 3), rng.randint(1, 2))
        f = random_operator(rng, X, E)
        pairs, verts = X.pairs(), vertex_values(X)
        for p in (1, 2):
            c = p_summing_norm(f, Fraction(p))
            for mult in itertools.product(range(3), repeat=len(pairs)):
                if any(mult):
                    assert family_ratio_power(f, X, E, pairs, mult, p, verts) <= c.power


def test_d_p_operator_norm_conjugation(p3):
    X, E = p3
    f = operator(X, E, [[0], [3], [1]])
    assert d_p_operator_norm(f, INF) == p_summing_norm(f, Fraction(1)).value
    assert d_p_operator_norm(f, Fraction(1)) == lip_norm(f)


def test_d_p_defining_inequality():
    rng = random.Random(9)
    for seed in range(10):
        X, E = random_instance(seed, rng.randint(2, 4), rng.randint(1, 2))
        u, f = random_molecule(rng, X, E), random_operator(rng, X, E)
        for p in (Fraction(2), INF):
            assert abs(pairing(u, f)) <= d_p_operator_norm(f, p) * d_p_bounds(u, p, n_random=3).upper


def test_extremal_p3(p3):
    X, E = p3
    u = elementary(X, E, 0, 2, [1])
    f = extremal_functional(u, "pi")
    assert pairing(u, f) == 2 == pi_norm(u).value
    assert lip_norm(f) == 1
    assert f.values[2] == (-2,)


def test_extremal_attains():
    rng = random.Random(10)
    for seed in range(20):
        X, E = random_instance(seed, rng.randint(2, 5), rng.randint(1, 2))
        u = random_molecule(rng, X, E)
        if u.is_zero():
            continue
        for alpha, norm in (("pi", pi_norm(u).value), ("eps", eps_norm(u).value)):
            f = extremal_functional(u, alpha)
            assert pairing(u, f) == norm and lip_alpha_norm(f, alpha) == 1


def test_extremal_zero_molecule(p3):
    with pytest.raises(errors.ZeroMolecule):
        extremal_functional(zero_molecule(*p3), "pi")


def test_alpha_prime(p3):
    X, E = p3
    g = functional(X, [0, 1, 2])
    assert alpha_prime_norm([(g, [3])], "eps", E) == 3
    assert alpha_prime_norm([(g, [3]), (g, [-3])], "pi", E) == 0
    rng = random.Random(1)
    X, E = random_instance(2, 4, 2)
    terms = [(random_functional(rng, X), (Fraction(1), Fraction(-2))),
             (random_functional(rng, X), (Fraction(1, 2), Fraction(1)))]
    f = rank_one(terms[0][0], terms[0][1], E) + rank_one(terms[1][0], terms[1][1], E)
    assert alpha_prime_norm(terms, "pi", E) == lip_norm(f)


def test_ideal_inequality():
    rng = random.Random(11)
    for seed in range(20):
        X, E = random_instance(seed, rng.randint(2, 5), rng.randint(1, 2))
        f = random_operator(rng, X, E)
        h, s = random_point_map(rng, X), random_matrix(rng, E.dim)
        g = compose(s, f, h)
        scale = operator_norm(dual_space(E), s) * point_map_lip(X, h)
        for alpha in ("pi", "eps"):
            assert lip_alpha_norm(g, alpha) <= scale * lip_alpha_norm(f, alpha)


def test_lambda_round_trip():
    rng = random.Random(12)
    X, E = random_instance(3, 4, 3)
    f = random_operator(rng, X, E)
    rebuilt = [tuple(pairing(elementary(X, E, x, 0, tuple(Fraction(int(s == t)) for s in range(E.dim))), f)
                     for t in range(E.dim)) if x else f.values[0] for x in range(X.n)]
    assert tuple(rebuilt) == f.values


def test_duality_pairing_bound():
    rng = random.Random(13)
    for seed in range(30):
        X, E = random_instance(seed, rng.randint(2, 5), rng.randint(1, 2))
        u, f = random_molecule(rng, X, E), random_operator(rng, X, E)
        assert abs(pairing(u, f)) <= lip_alpha_norm(f, "pi") * pi_norm(u).value
        assert abs(pairing(u, f)) <= lip_alpha_norm(f, "eps") * eps_norm(u).value


def test_molecule_in_gap_fixture(triangle_linf2):
    X, E = triangle_linf2
    u = molecule(X, E, [[1, 0], [0, 1]])
    f = extremal_functional(u, "eps")
    assert pairing(u, f) == 1 and lip_alpha_norm(f, "eps") == 1
