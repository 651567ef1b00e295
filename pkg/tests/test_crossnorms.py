import random
from fractions import Fraction

import pytest

from liptensor import errors
from liptensor.crossnorms import (DominationWitness, PrecInfeasible, d_p_bounds, dp_representation_cost,
                                  eps_norm, pi_norm, point_map_lip, prec_check, pushforward, w_p_upper)
from liptensor.ideals import lip_norm
from liptensor.instances import (build_space, elementary, molecule, molecule_from_representation, operator_norm, pairing,
                                 random_instance, random_matrix, random_molecule, random_point_map,
                                 representation, validate_metric, zero_molecule)
from liptensor.rationals import INF


def test_pi_p3(p3):
    X, E = p3
    r = pi_norm(molecule(X, E, [[1], [1]]))
    assert r.value == 3
    assert r.dual_witness.values == ((0,), (1,), (2,))
    assert r.primal_cost == 3
    assert molecule_from_representation(r.primal_witness) == molecule(X, E, [[1], [1]])


def test_zero_molecule(p3):
    X, E = p3
    u = zero_molecule(X, E)
    assert pi_norm(u).value == 0 and eps_norm(u).value == 0
    r = w_p_upper(u, Fraction(1))
    assert (r.lower, r.upper) == (0, 0)


def test_strict_gap_fixture(triangle_linf2):
    X, E = triangle_linf2
    u = molecule(X, E, [[1, 0], [0, 1]])
    assert eps_norm(u).value == 1
    pi = pi_norm(u)
    assert pi.value == Fraction(3, 2)
    assert pi.dual_witness is not None and pairing(u, pi.dual_witness) == Fraction(3, 2)
    # an explicit norm-one witness found by hand
    from liptensor.instances import operator
    f = operator(X, E, [[0, 0], [Fraction(3, 4), Fraction(1, 4)], [Fraction(1, 4), Fraction(3, 4)]])
    assert lip_norm(f) == 1 and pairing(u, f) == Fraction(3, 2)


def test_elementary_identity():
    rng = random.Random(5)
    for seed in range(20):
        X, E = random_instance(seed, rng.randint(2, 5), rng.randint(1, 3))
        x, y = rng.sample(range(X.n), 2)
        e = (Fraction(rng.randint(1, 4)),) + tuple(Fraction(rng.randint(-3, 3)) for _ in range(E.dim - 1))
        u = elementary(X, E, x, y, e)
        target = X.d[x][y] * E.norm(e)
        assert pi_norm(u).value == target and eps_norm(u).value == target
        d1 = d_p_bounds(u, Fraction(1), n_random=5)
        assert d1.lower == d1.upper == target


def test_eps_equals_pi_for_scalar_codomain():
    rng = random.Random(8)
    for seed in range(30):
        X, E = random_instance(seed, rng.randint(2, 5), 1)
        u = random_molecule(rng, X, E)
        assert eps_norm(u).value == pi_norm(u).value


def test_d1_p3_representations(p3):
    X, E = p3
    u = elementary(X, E, 0, 2, [1])
    assert d_p_bounds(u, Fraction(1), n_random=5).value == 2
    one = representation(X, E, [(0, 2, [1])])
    chain = representation(X, E, [(0, 1, [1]), (1, 2, [1])])
    assert dp_representation_cost(one, [1], Fraction(1)) == 2
    assert dp_representation_cost(chain, [1, 1], Fraction(1)) == 2


def test_d1_scalars_matter():
    # without term scalars the best unscaled cost here is 6 while pi = 4
    X = validate_metric([[0, 1, 3], [1, 0, 3], [3, 3, 0]])
    E = build_space(1, "linf")
    u = molecule(X, E, [[1], [1]])
    assert pi_norm(u).value == 4
    rep = representation(X, E, [(1, 0, [1]), (2, 0, [1])])
    assert dp_representation_cost(rep, [1, 1], Fraction(1)) == 6
    assert dp_representation_cost(rep, [1, Fraction(1, 3)], Fraction(1)) == 4
    assert d_p_bounds(u, Fraction(1), n_random=5).value == 4


@pytest.mark.parametrize("p", [Fraction(2), Fraction(3, 2), INF])
def test_dp_interval_sandwich(p):
    rng = random.Random(13)
    for seed in range(12):
        X, E = random_instance(seed, rng.randint(2, 5), rng.randint(1, 2))
        u = random_molecule(rng, X, E)
        r = d_p_bounds(u, p, n_random=5)
        eps, pi = eps_norm(u).value, pi_norm(u).value
        assert r.lower <= r.upper <= pi
        if p != Fraction(3, 2):  # integral conjugate: no rounding in the lower end
            assert eps <= r.lower
        f = r.dual_witness
        assert pairing(u, f) == r.lower * r.dual_bound


def test_d_inf_is_eps():
    rng = random.Random(2)
    for seed in range(10):
        X, E = random_instance(seed, rng.randint(2, 4), rng.randint(1, 2))
        u = random_molecule(rng, X, E)
        r = d_p_bounds(u, INF, n_random=5)
        assert r.lower == eps_norm(u).value


def test_prec_examples(p3):
    X, _ = p3
    w = prec_check(X, INF, [(1, 0, 1)], [(1, 0, 1)])
    assert isinstance(w, DominationWitness) and w.matrix == ((1,),) and w.verify(X)
    assert isinstance(prec_check(X, INF, [(2, 0, 1)], [(1, 0, 1)]), PrecInfeasible)
    fam = [(1, 0, 1), (1, 1, 2)]
    w1 = prec_check(X, Fraction(1), [(1, 0, 2)], fam)
    assert isinstance(w1, DominationWitness) and w1.matrix == ((1, 1),)
    assert isinstance(prec_check(X, INF, [(1, 0, 2)], fam), PrecInfeasible)


def test_prec_unsupported_exponent(p3):
    X, _ = p3
    with pytest.raises(errors.UnsupportedExponent):
        prec_check(X, Fraction(2), [(1, 0, 1)], [(1, 0, 1)])
    with pytest.raises(errors.UnsupportedExponent):
        w_p_upper(zero_molecule(*p3), Fraction(2))


def test_prec_infeasible_certificate(p3):
    from liptensor.lp import lp_check_certificate
    X, _ = p3
    res = prec_check(X, INF, [(2, 0, 1)], [(1, 0, 1)])
    assert lp_check_certificate(res.problem, res.solution)


@pytest.mark.parametrize("p", [Fraction(1), INF])
def test_wp_sandwich(p):
    rng = random.Random(21)
    for seed in range(15):
        X, E = random_instance(seed, rng.randint(2, 5), rng.randint(1, 2))
        u = random_molecule(rng, X, E)
        r = w_p_upper(u, p)
        assert eps_norm(u).value == r.lower <= r.upper <= pi_norm(u).value
        if not u.is_zero():
            assert r.details["domination"].verify(X)


def test_wp_elementary_self_domination(p3):
    X, E = p3
    u = elementary(X, E, 1, 2, [3])
    for p in (Fraction(1), INF):
        assert w_p_upper(u, p).upper == 3


def test_pushforward_homogeneity_and_uniformity():
    rng = random.Random(4)
    for seed in range(20):
        X, E = random_instance(seed, rng.randint(2, 5), rng.randint(1, 2))
        u = random_molecule(rng, X, E)
        two = tuple(tuple(Fraction(2 * int(i == j)) for j in range(E.dim)) for i in range(E.dim))
        v = pushforward(u, list(range(X.n)), two)
        assert pi_norm(v).value == 2 * pi_norm(u).value
        assert eps_norm(v).value == 2 * eps_norm(u).value
        assert pushforward(u, [0] * X.n, two).is_zero()
        h, t = random_point_map(rng, X), random_matrix(rng, E.dim)
        w = pushforward(u, h, t)
        scale = point_map_lip(X, h) * operator_norm(E, t)
        assert pi_norm(w).value <= scale * pi_norm(u).value
        assert eps_norm(w).value <= scale * eps_norm(u).value


def test_pushforward_base_point(p3):
    X, E = p3
    with pytest.raises(errors.BasePointNotFixed):
        pushforward(zero_molecule(X, E), [1, 1, 2], ((1,),))


def test_representation_costs_dominate_pi():
    rng = random.Random(17)
    from liptensor.instances import random_representation
    for seed in range(20):
        X, E = random_instance(seed, rng.randint(2, 5), rng.randint(1, 2))
        rep = random_representation(rng, X, E, terms=4)
        u = molecule_from_representation(rep)
        assert rep.projective_cost() >= pi_norm(u).value
