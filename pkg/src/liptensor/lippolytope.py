"""Vertices of the Lipschitz unit ball of a finite pointed metric space.

The ball ``{g : g(0) = 0, |g(x) - g(y)| <= d(x, y)}`` lives in ``Q^(n-1)``.
A constraint row is ``e_x - e_y``, so a set of tight constraints is linearly
independent exactly when its edges form a forest; a vertex is therefore a
feasible ``g`` whose tight edges contain a spanning tree through the base
point. Vertices are enumerated by growing such trees from 0 one point at a
time, which is basis enumeration restricted to the graphic bases.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CapExceeded
from .instances import FiniteMetricSpace, LipFunctional

DEFAULT_CAP = 7


@dataclass(frozen=True)
class LipPolytopeVertexSet:
    space: FiniteMetricSpace
    vertices: tuple  # of LipFunctional, sorted, closed under negation

    def __len__(self) -> int:
        return len(self.vertices)

    def value_table(self) -> list[tuple]:
        return [g.values for g in self.vertices]

    def half(self) -> list[LipFunctional]:
        """One vertex from each pair ``{g, -g}``."""
        return [g for g in self.vertices if g.values > tuple(-v for v in g.values)]


_memo: dict[tuple, tuple] = {}
_memo_lock = threading.Lock()


def _grow(d: Sequence[Sequence[Fraction]]) -> list[tuple]:
    n = len(d)
    start = ((0, Fraction(0)),)
    seen = {start}
    stack = [start]
    out: set[tuple] = set()
    while stack:
        state = stack.pop()
        assigned = dict(state)
        if len(assigned) == n:
            out.add(tuple(assigned[i] for i in range(n)))
            continue
        for x in range(n):
            if x in assigned:
                continue
            for y, gy in state:
                for val in (gy + d[x][y], gy - d[x][y]):
                    if all(abs(val - gz) <= d[x][z] for z, gz in state):
                        new = tuple(sorted(state + ((x, val),)))
                        if new not in seen:
                            seen.add(new)
                            stack.append(new)
    return sorted(out)


def vertex_values(X: FiniteMetricSpace, cap: int = DEFAULT_CAP) -> tuple:
    """Vertex value tables, memoized by distance matrix."""
    if X.n > cap:
        raise CapExceeded(f"vertex enumeration capped at {cap} points, got {X.n}")
    key = X.d
    hit = _memo.get(key)
    if hit is not None:
        return hit
    verts = tuple(_grow(X.d))
    with _memo_lock:
        return _memo.setdefault(key, verts)


def enumerate_vertices(X: FiniteMetricSpace, cap: int = DEFAULT_CAP) -> LipPolytopeVertexSet:
    return LipPolytopeVertexSet(X, tuple(LipFunctional(X, v) for v in vertex_values(X, cap)))


def lip_constant(g: LipFunctional) -> Fraction:
    """``max |g(x) - g(y)| / d(x, y)`` over pairs of distinct points."""
    X = g.X
    return max(abs(g.values[i] - g.values[j]) / X.d[i][j] for i, j in X.pairs())
