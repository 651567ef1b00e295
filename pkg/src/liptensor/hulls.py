"""Finite shadows of the hull constructions: restrictions to subsets of X,
quotients of the codomain, the finitely generated norm and the maximal hull.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import errors
from .crossnorms import cross_norm
from .ideals import lip_norm, p_summing_norm
from .instances import LipOperator, Molecule, PolyhedralSpace, dual_space, space_from_vertices
from .lippolytope import DEFAULT_CAP
from .polytope import null_space, rank
from .rationals import Exponent, dot, fmt_exponent, to_vec


@dataclass(frozen=True)
class QuotientSpace:
    """``parent / L`` in coordinates ``x -> (<k_1, x>, ..., <k_r, x>)`` where
    the ``k_i`` span the annihilator of ``L``; the ball is the image of the
    parent ball."""

    parent: PolyhedralSpace
    subspace: tuple  # basis of L
    annihilator: tuple  # k_1..k_r
    quotient: PolyhedralSpace

    def project(self, x: Sequence[Fraction]) -> tuple:
        return tuple(dot(k, x) for k in self.annihilator)

    def projection_norm(self) -> Fraction:
        """Norm of the quotient map, attained at a parent ball vertex."""
        return max(self.quotient.norm(self.project(v)) for v in self.parent.vertices)


def quotient_space(parent: PolyhedralSpace, subspace: Sequence[Sequence]) -> QuotientSpace:
    basis = [to_vec(v) for v in subspace]
    for v in basis:
        if len(v) != parent.dim:
            raise errors.DimensionMismatch(f"subspace vector of length {len(v)}, expected {parent.dim}")
    basis = [v for v in basis if any(v)]
    if rank(basis) >= parent.dim:
        raise errors.FullSubspace("the quotient by the whole space is trivial")
    ann = tuple(null_space(basis, parent.dim))
    image = {tuple(dot(k, v) for k in ann) for v in parent.vertices}
    quotient = space_from_vertices(len(ann), image)
    return QuotientSpace(parent, tuple(basis), ann, quotient)


def restrict_operator(f: LipOperator, points: Sequence[int]) -> LipOperator:
    """``f`` restricted to the metric subspace on ``points`` (which must contain 0)."""
    for p in points:
        if not 0 <= p < f.X.n:
            raise errors.IndexOutOfRange(f"point index {p} not in 0..{f.X.n - 1}")
    Y = f.X.subspace(points)
    kept = [0] + sorted(set(points) - {0})
    return LipOperator(Y, f.E, tuple(f.values[i] for i in kept))


def quotient_operator(f: LipOperator, subspace: Sequence[Sequence]) -> LipOperator:
    """``Q_L ∘ f`` for a subspace ``L`` of E*.

    The new codomain ``E*/L`` is the dual of the annihilator of ``L`` in E,
    so the returned operator lives over ``dual_space(quotient)``.
    """
    qs = quotient_space(dual_space(f.E), subspace)
    F = dual_space(qs.quotient)
    return LipOperator(f.X, F, tuple(qs.project(v) for v in f.values))


def _ideal_norm(f: LipOperator, ideal) -> Fraction:
    if ideal == "lip":
        return lip_norm(f)
    if isinstance(ideal, tuple) and ideal[0] == "psumming":
        return p_summing_norm(f, ideal[1]).value
    raise errors.InputError(f"unknown ideal {ideal!r}; expected 'lip' or ('psumming', p)")


def ideal_label(ideal) -> str:
    return "lip" if ideal == "lip" else f"psumming({fmt_exponent(ideal[1])})"


def sample_subspaces(E: PolyhedralSpace, samples: int = 4, seed: int = 0) -> list[tuple]:
    """Subspaces of E*: ``{0}``, coordinate lines, kernels of ball vertices of
    E (as functionals on E*) and ``samples`` random rational lines."""
    dim = E.dim
    out: list[tuple] = [()]
    if dim == 1:
        return out
    for i in range(dim):
        out.append((tuple(Fraction(int(i == j)) for j in range(dim)),))
    for v in E.half_vertices():
        out.append(tuple(null_space([v], dim)))
    rng = random.Random(seed)
    for _ in range(samples):
        v = tuple(Fraction(rng.randint(-3, 3)) for _ in range(dim))
        if any(v):
            out.append((v,))
    seen, uniq = set(), []
    for L in out:
        if L not in seen:
            seen.add(L)
            uniq.append(L)
    return uniq


@dataclass(frozen=True)
class AMaxBound:
    value: Fraction
    points: tuple
    subspace: tuple
    full: Fraction
    terms: int
    monotone: bool  # every sampled term was <= the full norm


def a_max_lower_bound(f: LipOperator, ideal="lip", samples: int = 4, seed: int = 0,
                      cap: int = DEFAULT_CAP) -> AMaxBound:
    """Sup of ``||Q_L ∘ f ∘ I_Y||`` over every subset ``Y ∋ 0`` of at least two
    points and sampled quotients ``L``."""
    X = f.X
    if X.n > cap:
        raise errors.CapExceeded(f"subset enumeration capped at {cap} points, got {X.n}")
    full = _ideal_norm(f, ideal)
    best: tuple | None = None
    monotone, count = True, 0
    subspaces = sample_subspaces(f.E, samples, seed)
    others = list(range(1, X.n))
    for size in range(X.n - 1, 0, -1):
        for rest in combinations(others, size):
            pts = (0,) + rest
            g = restrict_operator(f, pts)
            for L in subspaces:
                val = _ideal_norm(quotient_operator(g, L), ideal)
                count += 1
                monotone = monotone and val <= full
                if best is None or val > best[0]:
                    best = (val, pts, L)
    value, pts, L = best
    return AMaxBound(value, pts, L, full, count, monotone)


@dataclass(frozen=True)
class ThetaResult:
    value: Fraction
    points: tuple
    full: Fraction


def restrict_molecule(u: Molecule, points: Sequence[int]) -> Molecule:
    """``u`` viewed on the subspace ``points``, which must carry its support."""
    Y = u.X.subspace(points)
    kept = sorted(set(points) - {0})
    missing = set(u.support()) - set(kept)
    if missing:
        raise errors.InputError(f"subset misses support points {sorted(missing)}")
    return Molecule(Y, u.E, tuple(u.coeffs[x - 1] for x in kept))


def theta_norm(u: Molecule, alpha: str, cap: int = DEFAULT_CAP, check: bool = True) -> ThetaResult:
    """Finitely generated norm: min of ``alpha(u; X_0, E)`` over every subset
    ``X_0`` containing the base point and the support of ``u``."""
    X = u.X
    if X.n > cap:
        raise errors.CapExceeded(f"subset enumeration capped at {cap} points, got {X.n}")
    full = cross_norm(u, alpha)
    core = set(u.support())
    free = [x for x in range(1, X.n) if x not in core]
    best: tuple | None = None
    for size in range(len(free) + 1):
        for extra in combinations(free, size):
            pts = tuple(sorted({0} | core | set(extra)))
            if len(pts) < 2:
                pts = (0, 1)
            val = cross_norm(restrict_molecule(u, pts), alpha)
            if best is None or val < best[0]:
                best = (val, pts)
    result = ThetaResult(best[0], best[1], full)
    if check and result.value != full:
        raise errors.InternalDualityGap(f"theta {result.value} != {alpha}(u) = {full}")
    return result


__all__ = [
    "QuotientSpace", "quotient_space", "restrict_operator", "quotient_operator", "sample_subspaces",
    "AMaxBound", "a_max_lower_bound", "ThetaResult", "restrict_molecule", "theta_norm", "ideal_label",
]
