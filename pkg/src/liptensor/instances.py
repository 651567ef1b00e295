"""Exact domain model: pointed metric spaces, polyhedral normed spaces,
molecules of the Lipschitz tensor product and Lipschitz operators.

Conventions used everywhere:

* the base point of a metric space is index 0;
* a :class:`Molecule` stores its canonical coefficients ``m(x)`` for the
  points ``x = 1..n-1``; ``m(0) = -sum m(x)`` is implied;
* operators ``f: X -> E*`` store values in the coordinates dual to those of
  ``E``, so ``<f(x), e>`` is the plain dot product.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from . import errors
from .polytope import polar_vertices, rank
from .rationals import dot, to_rat, to_vec, vadd, vscale, vsub, zeros

# --------------------------------------------------------------------------
# metric spaces


@dataclass(frozen=True)
class FiniteMetricSpace:
    d: tuple
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        _check_metric(self.d)
        if not self.labels:
            object.__setattr__(self, "labels", default_labels(len(self.d)))
        elif len(self.labels) != len(self.d):
            raise errors.InputError(
                f"{len(self.labels)} labels for {len(self.d)} points")

    @property
    def n(self) -> int:
        return len(self.d)

    def dist(self, i: int, j: int) -> Fraction:
        return self.d[i][j]

    def pairs(self) -> list[tuple[int, int]]:
        """Unordered pairs ``(i, j)`` with ``i < j``."""
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)]

    def subspace(self, points: Sequence[int]) -> "FiniteMetricSpace":
        """Metric subspace on ``points``; must contain the base point 0,
        which stays first. Other points keep their relative order."""
        pts = list(dict.fromkeys(points))
        if 0 not in pts:
            raise errors.BasePointMissing("subspace must contain the base point 0")
        pts = [0] + sorted(p for p in pts if p != 0)
        if len(pts) < 2:
            raise errors.MinSizeError("a pointed metric space needs at least 2 points")
        d = tuple(tuple(self.d[i][j] for j in pts) for i in pts)
        return FiniteMetricSpace(d, tuple(self.labels[i] for i in pts))


def default_labels(n: int) -> tuple:
    return ("0",) + tuple(f"x{i}" for i in range(1, n))


def _check_metric(d) -> None:
    n = len(d)
    if n < 2:
        raise errors.MinSizeError("a pointed metric space needs at least 2 points")
    for row in d:
        if len(row) != n:
            raise errors.NotSquareMatrix(f"distance matrix is not {n}x{n}")
    for i in range(n):
        if d[i][i] != 0:
            raise errors.NonZeroDiagonal(f"d[{i}][{i}] = {d[i][i]} != 0")
    for i in range(n):
        for j in range(i + 1, n):
            if d[i][j] != d[j][i]:
                raise errors.AsymmetricMatrix(
                    f"d[{i}][{j}] = {d[i][j]} but d[{j}][{i}] = {d[j][i]}")
            if d[i][j] < 0:
                raise errors.NegativeDistance(f"d[{i}][{j}] = {d[i][j]} < 0")
            if d[i][j] == 0:
                raise errors.ZeroOffDiagonal(f"d[{i}][{j}] = 0 for distinct points")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if d[i][k] > d[i][j] + d[j][k]:
                    raise errors.TriangleViolation(
                        (i, j, k),
                        f"triangle inequality fails at ({i},{j},{k}): "
                        f"d[{i}][{k}] = {d[i][k]} > {d[i][j]} + {d[j][k]}")


def validate_metric(d: Sequence[Sequence], labels: Sequence[str] | None = None) -> FiniteMetricSpace:
    """Parse and validate a distance matrix; base point is index 0."""
    rows = tuple(to_vec(r) for r in d)
    return FiniteMetricSpace(rows, tuple(labels) if labels else ())


# --------------------------------------------------------------------------
# polyhedral normed spaces


@dataclass(frozen=True)
class PolyhedralSpace:
    """Finite-dimensional space whose unit ball is ``{e : <phi, e> <= 1}``.

    ``facets`` are the irredundant facet normals (equivalently the vertices of
    the dual ball), ``vertices`` the extreme points of the unit ball. Both are
    sorted, so equal spaces compare equal.
    """

    dim: int
    facets: tuple
    vertices: tuple
    name: str | None = field(default=None, compare=False)

    def norm(self, e: Sequence[Fraction]) -> Fraction:
        return max(dot(phi, e) for phi in self.facets)

    def dual_norm(self, phi: Sequence[Fraction]) -> Fraction:
        """Norm of a functional in E*, i.e. ``max <phi, v>`` over ball vertices."""
        return max(dot(phi, v) for v in self.vertices)

    def norming_functional(self, e: Sequence[Fraction]) -> tuple:
        """A dual-ball vertex ``phi`` with ``<phi, e> = ||e||``."""
        return max(self.facets, key=lambda phi: dot(phi, e))

    def norming_vector(self, phi: Sequence[Fraction]) -> tuple:
        return max(self.vertices, key=lambda v: dot(phi, v))

    def half_facets(self) -> list[tuple]:
        """One representative of each facet pair ``{phi, -phi}``."""
        return [f for f in self.facets if f > tuple(-x for x in f)]

    def half_vertices(self) -> list[tuple]:
        return [v for v in self.vertices if v > tuple(-x for x in v)]


def space_from_facets(dim: int, facets: Iterable[Sequence], name: str | None = None) -> PolyhedralSpace:
    rows = [to_vec(f) for f in facets]
    for r in rows:
        if len(r) != dim:
            raise errors.SpaceError(f"facet {list(map(str, r))} has length {len(r)}, expected {dim}")
    row_set = set(rows)
    for r in rows:
        if tuple(-x for x in r) not in row_set:
            raise errors.AsymmetricFacets(f"facet set lacks the negation of {list(map(str, r))}")
    if rank(rows) < dim:
        raise errors.UnboundedBall("facets do not span the dual space; the unit ball is unbounded")
    verts = polar_vertices(rows, dim)
    return PolyhedralSpace(dim, tuple(polar_vertices(verts, dim)), tuple(verts), name)


def space_from_vertices(dim: int, points: Iterable[Sequence], name: str | None = None) -> PolyhedralSpace:
    """Space whose unit ball is the convex hull of a symmetric point set."""
    pts = [to_vec(p) for p in points]
    if rank(pts) < dim:
        raise errors.UnboundedBall("points do not span; the unit ball is degenerate")
    facets = polar_vertices(pts, dim)
    return PolyhedralSpace(dim, tuple(facets), tuple(polar_vertices(facets, dim)), name)


def build_space(dim: int, spec) -> PolyhedralSpace:
    """``spec`` is ``"l1"``, ``"linf"`` or an explicit list of facet normals."""
    if dim < 1:
        raise errors.SpaceError("dimension must be >= 1")
    if spec == "l1":
        facets = [tuple(Fraction(s) for s in signs) for signs in product((1, -1), repeat=dim)]
        return space_from_facets(dim, facets, "l1")
    if spec == "linf":
        facets = []
        for i in range(dim):
            for s in (1, -1):
                v = [Fraction(0)] * dim
                v[i] = Fraction(s)
                facets.append(tuple(v))
        return space_from_facets(dim, facets, "linf")
    if isinstance(spec, str):
        raise errors.SpaceError(f"unknown norm {spec!r}; expected 'l1', 'linf' or a facet list")
    if isinstance(spec, dict):
        spec = spec["facets"]
    return space_from_facets(dim, spec)


def dual_space(space: PolyhedralSpace) -> PolyhedralSpace:
    name = {"l1": "linf", "linf": "l1"}.get(space.name or "")
    return PolyhedralSpace(space.dim, space.vertices, space.facets, name)


def operator_norm(space: PolyhedralSpace, t: Sequence[Sequence[Fraction]]) -> Fraction:
    """Norm of the linear map ``e -> t e`` on ``space`` (attained at a vertex)."""
    return max(space.norm(tuple(dot(row, v) for row in t)) for v in space.vertices)


# --------------------------------------------------------------------------
# molecules and representations


@dataclass(frozen=True)
class Molecule:
    X: FiniteMetricSpace
    E: PolyhedralSpace
    coeffs: tuple  # coeffs[x - 1] = m(x) for x = 1..n-1

    def __post_init__(self):
        if len(self.coeffs) != self.X.n - 1:
            raise errors.DimensionMismatch(
                f"molecule has {len(self.coeffs)} coefficient rows, expected {self.X.n - 1}")
        for c in self.coeffs:
            if len(c) != self.E.dim:
                raise errors.DimensionMismatch(f"coefficient of length {len(c)}, expected {self.E.dim}")

    def at(self, x: int) -> tuple:
        if x == 0:
            total = zeros(self.E.dim)
            for c in self.coeffs:
                total = vsub(total, c)
            return total
        return self.coeffs[x - 1]

    def is_zero(self) -> bool:
        return all(v == 0 for c in self.coeffs for v in c)

    def support(self) -> list[int]:
        """Points ``x != 0`` with ``m(x) != 0``."""
        return [x for x in range(1, self.X.n) if any(self.coeffs[x - 1])]

    def __add__(self, other: "Molecule") -> "Molecule":
        _same_spaces(self, other)
        return Molecule(self.X, self.E, tuple(vadd(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> "Molecule":
        c = to_rat(c)
        return Molecule(self.X, self.E, tuple(vscale(c, a) for a in self.coeffs))

    def flat(self) -> list[Fraction]:
        return [v for c in self.coeffs for v in c]


def zero_molecule(X: FiniteMetricSpace, E: PolyhedralSpace) -> Molecule:
    return Molecule(X, E, tuple(zeros(E.dim) for _ in range(X.n - 1)))


@dataclass(frozen=True)
class FormalRepresentation:
    """A formal sum ``sum_i delta_(x_i, y_i) ⊠ e_i``."""

    X: FiniteMetricSpace
    E: PolyhedralSpace
    terms: tuple  # of (x, y, e)

    def __post_init__(self):
        for x, y, e in self.terms:
            for idx in (x, y):
                if not 0 <= idx < self.X.n:
                    raise errors.IndexOutOfRange(f"point index {idx} not in 0..{self.X.n - 1}")
            if x == y:
                raise errors.DegeneratePair(f"term with x = y = {x}")
            if len(e) != self.E.dim:
                raise errors.DimensionMismatch(f"vector of length {len(e)}, expected {self.E.dim}")

    def projective_cost(self) -> Fraction:
        """``sum d(x_i, y_i) ||e_i||``."""
        return sum((self.X.dist(x, y) * self.E.norm(e) for x, y, e in self.terms), Fraction(0))


def representation(X, E, terms: Iterable) -> FormalRepresentation:
    return FormalRepresentation(X, E, tuple((int(x), int(y), to_vec(e)) for x, y, e in terms))


def molecule_from_representation(rep: FormalRepresentation) -> Molecule:
    X, E = rep.X, rep.E
    m = [zeros(E.dim) for _ in range(X.n)]
    for x, y, e in rep.terms:
        m[x] = vadd(m[x], e)
        m[y] = vsub(m[y], e)
    return Molecule(X, E, tuple(m[1:]))


def elementary(X, E, x: int, y: int, e: Sequence) -> Molecule:
    """The molecule of ``delta_(x, y) ⊠ e``."""
    return molecule_from_representation(representation(X, E, [(x, y, e)]))


def molecule(X, E, coeffs: Sequence[Sequence]) -> Molecule:
    return Molecule(X, E, tuple(to_vec(c) for c in coeffs))


# --------------------------------------------------------------------------
# operators and functionals


@dataclass(frozen=True)
class LipFunctional:
    X: FiniteMetricSpace
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.X.n:
            raise errors.DimensionMismatch(f"{len(self.values)} values for {self.X.n} points")
        if self.values[0] != 0:
            raise errors.BasePointNotFixed(f"g(0) = {self.values[0]} != 0")

    def __neg__(self) -> "LipFunctional":
        return LipFunctional(self.X, tuple(-v for v in self.values))


def functional(X, values: Sequence) -> LipFunctional:
    return LipFunctional(X, to_vec(values))


@dataclass(frozen=True)
class LipOperator:
    """Base-point preserving map ``X -> E*`` given by its value table."""

    X: FiniteMetricSpace
    E: PolyhedralSpace
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.X.n:
            raise errors.DimensionMismatch(f"{len(self.values)} values for {self.X.n} points")
        for v in self.values:
            if len(v) != self.E.dim:
                raise errors.DimensionMismatch(f"value of length {len(v)}, expected {self.E.dim}")
        if any(self.values[0]):
            raise errors.BasePointNotFixed("f(0) must be the zero functional")

    def __add__(self, other: "LipOperator") -> "LipOperator":
        _same_spaces(self, other)
        return LipOperator(self.X, self.E, tuple(vadd(a, b) for a, b in zip(self.values, other.values)))

    def scale(self, c) -> "LipOperator":
        c = to_rat(c)
        return LipOperator(self.X, self.E, tuple(vscale(c, a) for a in self.values))

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.values for v in row)


def operator(X, E, values: Sequence[Sequence]) -> LipOperator:
    return LipOperator(X, E, tuple(to_vec(v) for v in values))


def zero_operator(X, E) -> LipOperator:
    return LipOperator(X, E, tuple(zeros(E.dim) for _ in range(X.n)))


def _same_spaces(a, b) -> None:
    if a.X != b.X or a.E != b.E:
        raise errors.SpaceMismatch("objects live over different (X, E)")


def pairing(u: Molecule, f: LipOperator) -> Fraction:
    """``u(f) = sum_{x != 0} <f(x), m(x)>``."""
    _same_spaces(u, f)
    return sum((dot(f.values[x], u.coeffs[x - 1]) for x in range(1, u.X.n)), Fraction(0))


def pairing_formal(rep: FormalRepresentation, f: LipOperator) -> Fraction:
    """``sum_i <f(x_i) - f(y_i), e_i>`` evaluated term by term."""
    _same_spaces(rep, f)
    return sum((dot(vsub(f.values[x], f.values[y]), e) for x, y, e in rep.terms), Fraction(0))


# --------------------------------------------------------------------------
# seeded generators

MAX_POINTS = 7
MAX_DIM = 4
NORMS = ("l1", "linf", "random")


def random_rat(rng: random.Random, bound: int = 3, den: int = 3, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-bound * den, bound * den), rng.randint(1, den))
        if q or not nonzero:
            return q


def random_metric(rng: random.Random, n: int) -> FiniteMetricSpace:
    """Shortest-path closure of random positive rational edge weights."""
    w = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q = rng.randint(1, 4)
            w[i][j] = w[j][i] = Fraction(rng.randint(1, 4 * q), q)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if w[i][k] + w[k][j] < w[i][j]:
                    w[i][j] = w[i][k] + w[k][j]
    return FiniteMetricSpace(tuple(tuple(r) for r in w))


def random_space(rng: random.Random, dim: int, norm: str = "random") -> PolyhedralSpace:
    if norm == "mixed":
        norm = rng.choice(NORMS)
    if norm in ("l1", "linf"):
        return build_space(dim, norm)
    if norm != "random":
        raise errors.SpaceError(f"unknown norm spec {norm!r}")
    while True:
        k = rng.randint(dim, dim + 2)
        vecs = []
        for _ in range(k):
            v = tuple(Fraction(rng.randint(-2, 2)) for _ in range(dim))
            if any(v):
                vecs.append(v)
        facets = set(vecs) | {tuple(-x for x in v) for v in vecs}
        if facets and rank(list(facets)) == dim:
            return space_from_facets(dim, sorted(facets))


def random_instance(seed, n_points: int, dim: int, norm: str = "mixed") -> tuple[FiniteMetricSpace, PolyhedralSpace]:
    """Deterministic random ``(X, E)`` for a fixed seed."""
    if not 2 <= n_points <= MAX_POINTS:
        raise errors.CapExceeded(f"n_points must be in 2..{MAX_POINTS}")
    if not 1 <= dim <= MAX_DIM:
        raise errors.CapExceeded(f"dim must be in 1..{MAX_DIM}")
    rng = random.Random(seed)
    X = random_metric(rng, n_points)
    return X, random_space(rng, dim, norm)


def random_molecule(rng: random.Random, X, E, density: float = 0.7) -> Molecule:
    coeffs = []
    for _ in range(X.n - 1):
        if rng.random() < density:
            coeffs.append(tuple(random_rat(rng) for _ in range(E.dim)))
        else:
            coeffs.append(zeros(E.dim))
    return Molecule(X, E, tuple(coeffs))


def random_elementary(rng: random.Random, X, E) -> tuple[int, int, tuple, Molecule]:
    x, y = rng.sample(range(X.n), 2)
    e = tuple(random_rat(rng) for _ in range(E.dim))
    return x, y, e, elementary(X, E, x, y, e)


def random_representation(rng: random.Random, X, E, terms: int = 3) -> FormalRepresentation:
    out = []
    for _ in range(terms):
        x, y = rng.sample(range(X.n), 2)
        out.append((x, y, tuple(random_rat(rng) for _ in range(E.dim))))
    return FormalRepresentation(X, E, tuple(out))


def random_functional(rng: random.Random, X) -> LipFunctional:
    return LipFunctional(X, (Fraction(0),) + tuple(random_rat(rng) for _ in range(X.n - 1)))


def random_operator(rng: random.Random, X, E) -> LipOperator:
    vals = [zeros(E.dim)] + [tuple(random_rat(rng) for _ in range(E.dim)) for _ in range(X.n - 1)]
    return LipOperator(X, E, tuple(vals))


def random_point_map(rng: random.Random, X) -> tuple:
    """Base-point preserving self-map ``h: X -> X`` as an index table."""
    return (0,) + tuple(rng.randrange(X.n) for _ in range(X.n - 1))


def random_matrix(rng: random.Random, dim: int) -> tuple:
    return tuple(tuple(random_rat(rng, bound=2, den=2) for _ in range(dim)) for _ in range(dim))
