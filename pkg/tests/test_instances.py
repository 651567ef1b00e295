import random
from fractions import Fraction

import pytest

from liptensor import errors
from liptensor.instances import (build_space, dual_space, elementary, molecule, molecule_from_representation,
                                 operator, pairing, pairing_formal, random_instance, random_molecule,
                                 random_operator, random_representation, representation, space_from_facets,
                                 validate_metric, zero_molecule)


def test_two_point_space():
    X = validate_metric([[0, 1], [1, 0]])
    assert X.n == 2 and X.d[0][1] == 1


def test_triangle_violation_witness():
    with pytest.raises(errors.TriangleViolation) as exc:
        validate_metric([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    assert exc.value.witness == (0, 1, 2)


@pytest.mark.parametrize("d, err", [
    ([[0, 1], [2, 0]], errors.AsymmetricMatrix),
    ([[0, -1], [-1, 0]], errors.NegativeDistance),
    ([[0, 0], [0, 0]], errors.ZeroOffDiagonal),
    ([[1, 1], [1, 0]], errors.NonZeroDiagonal),
    ([[0, 1], [1]], errors.NotSquareMatrix),
    ([[0]], errors.MinSizeError),
])
def test_metric_errors(d, err):
    with pytest.raises(err):
        validate_metric(d)


def test_named_spaces():
    linf1 = build_space(1, "linf")
    assert linf1.facets == ((-1,), (1,)) and linf1.vertices == ((-1,), (1,))
    l12 = build_space(2, "l1")
    assert len(l12.facets) == 4
    assert set(l12.vertices) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    linf2 = build_space(2, "linf")
    assert set(linf2.facets) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert set(linf2.vertices) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}


def test_polarity():
    assert dual_space(build_space(2, "l1")) == build_space(2, "linf")
    assert dual_space(build_space(1, "linf")) == build_space(1, "l1")
    hexagon = space_from_facets(2, [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)])
    assert len(hexagon.vertices) == 6
    assert dual_space(dual_space(hexagon)) == hexagon


def test_space_errors():
    with pytest.raises(errors.AsymmetricFacets):
        build_space(1, [(1,)])
    with pytest.raises(errors.UnboundedBall):
        build_space(2, [(1, 0), (-1, 0)])


def test_norm_descriptions_agree():
    rng = random.Random(3)
    for seed in range(30):
        _, E = random_instance(seed, 2, rng.randint(1, 3))
        Es = dual_space(E)
        for _ in range(5):
            e = tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(E.dim))
            assert E.norm(e) == Es.dual_norm(e) == max(sum(a * b for a, b in zip(phi, e)) for phi in Es.vertices)


def test_molecule_from_representation(p3):
    X, E = p3
    u = molecule_from_representation(representation(X, E, [(1, 0, [1])]))
    assert u.coeffs == ((1,), (0,))
    a = molecule_from_representation(representation(X, E, [(1, 0, [1]), (0, 2, [1])]))
    b = molecule_from_representation(representation(X, E, [(1, 2, [1])]))
    assert a == b and a.coeffs == ((1,), (-1,))
    assert molecule_from_representation(representation(X, E, [(1, 2, [3]), (2, 1, [3])])).is_zero()


def test_representation_errors(p3):
    X, E = p3
    with pytest.raises(errors.IndexOutOfRange):
        representation(X, E, [(5, 0, [1])])
    with pytest.raises(errors.DegeneratePair):
        representation(X, E, [(1, 1, [1])])


def test_pairing_p3(p3):
    X, E = p3
    u = molecule(X, E, [[1], [1]])
    f = operator(X, E, [[0], [1], [2]])
    assert pairing(u, f) == 3
    rep = representation(X, E, [(1, 0, [1]), (2, 1, [1]), (1, 0, [1])])
    assert molecule_from_representation(rep) == u
    assert pairing_formal(rep, f) == 3
    assert pairing(zero_molecule(X, E), f) == 0
    assert pairing(elementary(X, E, 1, 2, [5]), f) == 5 * (1 - 2)


def test_pairing_space_mismatch(p3, triangle_linf2):
    X, E = p3
    Y, F = triangle_linf2
    with pytest.raises(errors.SpaceMismatch):
        pairing(zero_molecule(X, E), operator(Y, F, [[0, 0], [1, 1], [0, 1]]))


def test_canonical_form_soundness():
    rng = random.Random(11)
    for seed in range(20):
        X, E = random_instance(seed, rng.randint(2, 5), rng.randint(1, 2))
        r1 = random_representation(rng, X, E, terms=3)
        u = molecule_from_representation(r1)
        # a second representation of u: telescope every term through the base point
        terms = []
        for x, y, e in r1.terms:
            if x and y:
                terms += [(x, 0, e), (0, y, e)]
            else:
                terms.append((x, y, e))
        r2 = representation(X, E, terms)
        assert molecule_from_representation(r2) == u
        for _ in range(100 // 20):
            f = random_operator(rng, X, E)
            assert pairing_formal(r1, f) == pairing_formal(r2, f) == pairing(u, f)


def test_random_instance_deterministic_and_valid():
    for seed in range(1000):
        n = 2 + seed % 5
        X, E = random_instance(seed, n, 1 + seed % 3)
        validate_metric(X.d)
    assert random_instance(0, 3, 2) == random_instance(0, 3, 2)


def test_random_instance_cap():
    with pytest.raises(errors.CapExceeded):
        random_instance(0, 50, 1)


def test_subspace_requires_base_point(p3):
    X, _ = p3
    with pytest.raises(errors.BasePointMissing):
        X.subspace([1, 2])
    with pytest.raises(errors.MinSizeError):
        X.subspace([0])


def test_random_molecule_shape():
    X, E = random_instance(5, 4, 2)
    u = random_molecule(random.Random(0), X, E)
    assert len(u.coeffs) == 3 and all(len(c) == 2 for c in u.coeffs)
