"""Exact linear algebra and vertex enumeration for small symmetric polytopes.

A centrally symmetric polytope with 0 in its interior is handled through
polarity: the vertices of ``{e : <r, e> <= 1 for r in rows}`` and the facet
normals of ``conv(rows)`` are both computed by :func:`polar_vertices`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .rationals import dot


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> tuple | None:
    """Solve the square system ``a x = b``; None when singular."""
    n = len(a)
    m = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        row = [v / pv for v in m[col]]
        m[col] = row
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], row)]
    return tuple(m[r][n] for r in range(n))


def row_echelon(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(row_echelon(rows)[0])


def null_space(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[tuple]:
    """Basis of ``{x : r.x = 0 for r in rows}``."""
    red, pivots = row_echelon(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[fc]
        basis.append(tuple(x))
    return basis


def polar_vertices(rows: Sequence[Sequence[Fraction]], dim: int) -> list[tuple]:
    """Vertices of ``{e in Q^dim : <r, e> <= 1 for all r in rows}``.

    Brute-force basis enumeration: every ``dim``-subset of rows with full rank
    is intersected and kept when feasible. Intended for dim <= 4.
    """
    rows = [tuple(r) for r in rows]
    one = (Fraction(1),) * dim
    found: set[tuple] = set()
    for combo in combinations(range(len(rows)), dim):
        sub = [rows[i] for i in combo]
        x = solve(sub, one)
        if x is None or x in found:
            continue
        if all(dot(r, x) <= 1 for r in rows):
            found.add(x)
    return sorted(found)


def convex_hull_vertices(points: Sequence[Sequence[Fraction]], dim: int) -> list[tuple]:
    """Extreme points of the convex hull of a symmetric full-dimensional point set."""
    facets = polar_vertices(points, dim)
    pts = sorted(set(tuple(p) for p in points))
    return [p for p in pts if sum(1 for f in facets if dot(f, p) == 1) >= dim
            and rank([f for f in facets if dot(f, p) == 1]) == dim]
