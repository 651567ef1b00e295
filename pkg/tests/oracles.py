"""Independent brute-force oracles used by the unit and acceptance tests."""

import itertools
from fractions import Fraction

from liptensor.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, make_problem
from liptensor.polytope import solve


def random_lp(rng, max_vars=3, max_rows=4):
    """Small LP whose variables all have finite lower bounds (pointed feasible set)."""
    n = rng.randint(1, max_vars)
    m = rng.randint(1, max_rows)
    cons = []
    for _ in range(m):
        row = [rng.randint(-3, 3) for _ in range(n)]
        rel = rng.choice(["<=", "<=", ">=", "="])
        cons.append((row, rel, rng.randint(-4, 6)))
    bounds = []
    for _ in range(n):
        lo = rng.choice([0, 0, -2, 1])
        hi = rng.choice([None, None, lo + rng.randint(0, 4)])
        bounds.append((lo, hi))
    obj = [rng.randint(-4, 4) for _ in range(n)]
    return make_problem(obj, cons, rng.choice(["min", "max"]), bounds)


def _rows(p):
    """All constraints as (row, rel, rhs), bounds included."""
    rows = list(p.constraints)
    n = p.n_vars
    for j, (lo, hi) in enumerate(p.var_bounds()):
        e = tuple(Fraction(int(k == j)) for k in range(n))
        if lo is not None:
            rows.append((e, ">=", lo))
        if hi is not None:
            rows.append((e, "<=", hi))
    return rows


def _ok(lhs, rel, rhs):
    return lhs <= rhs if rel == "<=" else lhs >= rhs if rel == ">=" else lhs == rhs


def _basic_points(rows, n):
    pts = set()
    for combo in itertools.combinations(range(len(rows)), n):
        x = solve([rows[k][0] for k in combo], [rows[k][2] for k in combo])
        if x is None:
            continue
        if all(_ok(sum(a * v for a, v in zip(r, x)), rel, b) for r, rel, b in rows):
            pts.add(x)
    return pts


def brute_force_lp(p):
    """(status, objective) by enumerating vertices and extreme rays."""
    n = p.n_vars
    rows = _rows(p)
    verts = _basic_points(rows, n)
    if not verts:
        return INFEASIBLE, None
    sign = 1 if p.sense == "max" else -1
    # recession cone, normalised by sum of |d| on the sign pattern of the bounds
    cone = [(r, rel, Fraction(0)) for r, rel, _ in rows]
    for signs in itertools.product((1, -1), repeat=n):
        norm = (tuple(Fraction(s) for s in signs), "=", Fraction(1))
        orth = [(tuple(Fraction(s * int(k == j)) for k in range(n)), ">=", Fraction(0))
                for j, s in enumerate(signs)]
        for d in _basic_points(cone + orth + [norm], n):
            if sign * sum(c * v for c, v in zip(p.objective, d)) > 0:
                return UNBOUNDED, None
    best = max(sign * sum(c * v for c, v in zip(p.objective, x)) for x in verts)
    return OPTIMAL, sign * best


def family_ratio_power(f, X, E, pairs, mult, p, verts):
    """Definitional ratio (sum m ||df||^p) / max_g (sum m |dg|^p), exactly."""
    from liptensor.rationals import vsub
    num = sum((m * E.dual_norm(vsub(f.values[i], f.values[j])) ** p
               for m, (i, j) in zip(mult, pairs)), Fraction(0))
    den = max(sum((m * abs(g[i] - g[j]) ** p for m, (i, j) in zip(mult, pairs)), Fraction(0))
              for g in verts)
    return num / den
