"""Exact rational linear programming.

Dense two-phase tableau simplex over ``gmpy2.mpq``. Pricing is Dantzig's rule
until a run of degenerate pivots is seen, after which Bland's rule is used for
the rest of the solve, so the method always terminates.

Dual values use the shadow-price convention: ``dual[i]`` is the rate of change
of the optimal objective in ``rhs[i]``. Infeasibility certificates ``y`` have
``y_i >= 0`` on ``<=`` rows, ``y_i <= 0`` on ``>=`` rows, and satisfy
``min_{x in bounds} (y^T A) x > y^T b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from .errors import DimensionMismatch, MalformedProblem
from .rationals import fmt_rat, to_rat

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
UNBOUNDED = "Unbounded"

RELATIONS = ("<=", "=", ">=")

# consecutive degenerate pivots tolerated before switching to Bland's rule
DEGENERATE_RUN = 20


@dataclass(frozen=True)
class LpProblem:
    objective: tuple
    constraints: tuple  # of (row, relation, rhs)
    sense: str = "min"
    bounds: tuple = ()  # per variable (lower | None, upper | None); empty means all (0, None)

    def __post_init__(self):
        n = len(self.objective)
        if not self.bounds:
            object.__setattr__(self, "bounds", ((Fraction(0), None),) * n)
        if self.sense not in ("min", "max"):
            raise MalformedProblem(f"sense must be 'min' or 'max', got {self.sense!r}")
        for k, (row, rel, _) in enumerate(self.constraints):
            if len(row) != n:
                raise MalformedProblem(f"constraint {k} has {len(row)} coefficients, expected {n}")
            if rel not in RELATIONS:
                raise MalformedProblem(f"constraint {k} has unknown relation {rel!r}")
        if self.bounds and len(self.bounds) != n:
            raise MalformedProblem(f"{len(self.bounds)} bounds for {n} variables")
        for j, (lo, hi) in enumerate(self.var_bounds()):
            if lo is not None and hi is not None and lo > hi:
                raise MalformedProblem(f"variable {j} has lower bound {lo} > upper bound {hi}")

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def var_bounds(self) -> tuple:
        return self.bounds


def make_problem(objective: Sequence, constraints: Sequence, sense: str = "min",
                 bounds: Sequence | None = None) -> LpProblem:
    """Build an :class:`LpProblem`, parsing every number as an exact rational."""
    cons = tuple((tuple(to_rat(a) for a in row), rel, to_rat(rhs)) for row, rel, rhs in constraints)
    bnds = ()
    if bounds is not None:
        bnds = tuple((None if lo is None else to_rat(lo), None if hi is None else to_rat(hi))
                     for lo, hi in bounds)
    return LpProblem(tuple(to_rat(c) for c in objective), cons, sense, bnds)


@dataclass(frozen=True)
class LpSolution:
    status: str
    primal: tuple = ()
    dual: tuple = ()
    objective: Fraction | None = None
    certificate: tuple = ()  # Farkas vector (Infeasible) or ray (Unbounded)

    def to_json(self) -> dict:
        out = {"status": self.status,
               "primal": [fmt_rat(v) for v in self.primal],
               "dual": [fmt_rat(v) for v in self.dual]}
        if self.objective is not None:
            out["objective"] = fmt_rat(self.objective)
        if self.certificate:
            out["certificate"] = [fmt_rat(v) for v in self.certificate]
        return out


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class _Standard:
    """``min c x, A x = b, x >= 0`` with ``b >= 0``, plus the map back."""

    def __init__(self, p: LpProblem):
        self.var_map = []  # per original var: (offset, [(col, coef)])
        ncols = 0
        rows = []  # (coeff dict, rel, rhs)
        bounds = p.var_bounds()
        for lo, hi in bounds:
            if lo is not None:
                self.var_map.append((lo, [(ncols, 1)]))
                if hi is not None:
                    rows.append(({ncols: mpq(1)}, "<=", mpq(hi - lo)))
                ncols += 1
            elif hi is not None:
                self.var_map.append((hi, [(ncols, -1)]))
                ncols += 1
            else:
                self.var_map.append((Fraction(0), [(ncols, 1), (ncols + 1, -1)]))
                ncols += 2
        self.n_struct = ncols
        cons = []
        for row, rel, rhs in p.constraints:
            coeffs: dict[int, mpq] = {}
            b = mpq(rhs)
            for j, a in enumerate(row):
                if not a:
                    continue
                offset, cols = self.var_map[j]
                b -= mpq(a) * mpq(offset)
                for col, s in cols:
                    coeffs[col] = coeffs.get(col, mpq(0)) + s * mpq(a)
            cons.append((coeffs, rel, b))
        self.n_orig_rows = len(cons)
        cons.extend(rows)
        sign = -1 if p.sense == "max" else 1
        self.cost = [mpq(0)] * ncols
        self.cost_offset = mpq(0)
        for j, c in enumerate(p.objective):
            offset, cols = self.var_map[j]
            self.cost_offset += mpq(c) * mpq(offset) * sign
            for col, s in cols:
                self.cost[col] += sign * s * mpq(c)
        # slacks
        m = len(cons)
        self.slack_col: list[int | None] = []
        for coeffs, rel, _ in cons:
            if rel == "=":
                self.slack_col.append(None)
            else:
                self.slack_col.append(ncols)
                ncols += 1
        self.n_with_slack = ncols
        self.flip = []
        self.rows: list[list[mpq]] = []
        self.rhs: list[mpq] = []
        for i, (coeffs, rel, b) in enumerate(cons):
            dense = [mpq(0)] * ncols
            for col, a in coeffs.items():
                dense[col] = a
            if rel == "<=":
                dense[self.slack_col[i]] = mpq(1)
            elif rel == ">=":
                dense[self.slack_col[i]] = mpq(-1)
            s = -1 if b < 0 else 1
            if s < 0:
                dense = [-v for v in dense]
                b = -b
            self.flip.append(s)
            self.rows.append(dense)
            self.rhs.append(b)
        self.m = m

    def original_x(self, xs: Sequence[mpq]) -> tuple:
        out = []
        for offset, cols in self.var_map:
            v = mpq(offset)
            for col, s in cols:
                v += s * xs[col]
            out.append(_frac(v))
        return out

    def original_direction(self, ds: Sequence[mpq]) -> tuple:
        out = []
        for _, cols in self.var_map:
            v = mpq(0)
            for col, s in cols:
                v += s * ds[col]
            out.append(_frac(v))
        return out


class _Tableau:
    def __init__(self, std: _Standard):
        self.std = std
        m = std.m
        n = std.n_with_slack
        # initial basis: a +1 slack where available, else an artificial
        self.unit_col: list[int] = []
        self.artificial: set[int] = set()
        ncols = n
        for i in range(m):
            sc = std.slack_col[i]
            if sc is not None and std.rows[i][sc] == 1:
                self.unit_col.append(sc)
            else:
                self.unit_col.append(ncols)
                self.artificial.add(ncols)
                ncols += 1
        self.ncols = ncols
        self.T: list[list[mpq]] = []
        for i in range(m):
            row = std.rows[i] + [mpq(0)] * (ncols - n) + [std.rhs[i]]
            if self.unit_col[i] >= n:
                row[self.unit_col[i]] = mpq(1)
            self.T.append(row)
        self.basis = list(self.unit_col)
        self.r: list[mpq] = []

    def set_costs(self, cost: Sequence[mpq]) -> None:
        c = list(cost) + [mpq(0)] * (self.ncols - len(cost)) + [mpq(0)]
        for i, b in enumerate(self.basis):
            cb = c[b]
            if cb:
                row = self.T[i]
                c = [cj - cb * tj for cj, tj in zip(c, row)]
        self.r = c
        self.cost = list(cost) + [mpq(0)] * (self.ncols - len(cost))

    def pivot(self, row: int, col: int) -> None:
        prow = self.T[row]
        pv = prow[col]
        if pv != 1:
            prow = [v / pv for v in prow]
            self.T[row] = prow
        nz = [k for k, v in enumerate(prow) if v]
        for i, trow in enumerate(self.T):
            if i != row:
                f = trow[col]
                if f:
                    for k in nz:
                        trow[k] -= f * prow[k]
        f = self.r[col]
        if f:
            r = self.r
            for k in nz:
                r[k] -= f * prow[k]
        self.basis[row] = col

    def run(self, allowed: Sequence[int]) -> int | None:
        """Minimize; returns None at optimum, or an unbounded entering column."""
        bland = False
        degenerate = 0
        while True:
            r = self.r
            if bland:
                col = next((j for j in allowed if r[j] < 0), None)
            else:
                col, best = None, 0
                for j in allowed:
                    if r[j] < best:
                        col, best = j, r[j]
            if col is None:
                return None
            row, ratio = None, None
            for i, trow in enumerate(self.T):
                a = trow[col]
                if a > 0:
                    q = trow[-1] / a
                    if ratio is None or q < ratio or (q == ratio and self.basis[i] < self.basis[row]):
                        row, ratio = i, q
            if row is None:
                return col
            if ratio == 0:
                degenerate += 1
                if degenerate >= DEGENERATE_RUN:
                    bland = True
            else:
                degenerate = 0
            self.pivot(row, col)

    def objective(self) -> mpq:
        return -self.r[-1]

    def row_duals(self) -> list[mpq]:
        """``y_i = c_u - r_u`` at the initial unit column of row ``i``."""
        return [self.cost[u] - self.r[u] for u in self.unit_col]

    def values(self) -> list[mpq]:
        xs = [mpq(0)] * self.ncols
        for i, b in enumerate(self.basis):
            xs[b] = self.T[i][-1]
        return xs


def lp_solve(p: LpProblem) -> LpSolution:
    """Solve ``p`` exactly. Deterministic for a given problem."""
    if not isinstance(p, LpProblem):
        raise MalformedProblem("lp_solve expects an LpProblem")
    std = _Standard(p)
    tab = _Tableau(std)
    m = std.m

    if tab.artificial:
        tab.set_costs([mpq(0)] * std.n_with_slack + [mpq(1) if j in tab.artificial else mpq(0)
                                                       for j in range(std.n_with_slack, tab.ncols)])
        tab.run([j for j in range(tab.ncols)])
        if tab.objective() > 0:
            y = tab.row_duals()
            cert = [-std.flip[i] * y[i] for i in range(std.n_orig_rows)]
            scale = max((abs(v) for v in cert), default=mpq(1)) or mpq(1)
            return LpSolution(INFEASIBLE, certificate=tuple(_frac(v / scale) for v in cert))
        # drive zero-level artificials out of the basis where possible
        for i in range(m):
            if tab.basis[i] in tab.artificial:
                col = next((j for j in range(std.n_with_slack) if tab.T[i][j] != 0), None)
                if col is not None:
                    tab.pivot(i, col)

    tab.set_costs(std.cost)
    allowed = list(range(std.n_with_slack))
    unbounded_col = tab.run(allowed)
    xs = tab.values()
    primal = tuple(std.original_x(xs))
    if unbounded_col is not None:
        ds = [mpq(0)] * tab.ncols
        ds[unbounded_col] = mpq(1)
        for i, b in enumerate(tab.basis):
            ds[b] = -tab.T[i][unbounded_col]
        return LpSolution(UNBOUNDED, primal=primal, certificate=tuple(std.original_direction(ds)))
    y = tab.row_duals()
    sign = -1 if p.sense == "max" else 1
    dual = tuple(_frac(sign * std.flip[i] * y[i]) for i in range(std.n_orig_rows))
    objective = sum((c * x for c, x in zip(p.objective, primal)), Fraction(0))
    return LpSolution(OPTIMAL, primal=primal, dual=dual, objective=objective)


# ---------------------------------------------------------------------------
# independent exact re-verification


def _row_ok(lhs: Fraction, rel: str, rhs: Fraction) -> bool:
    if rel == "<=":
        return lhs <= rhs
    if rel == ">=":
        return lhs >= rhs
    return lhs == rhs


def _primal_feasible(p: LpProblem, x: Sequence[Fraction]) -> bool:
    for (lo, hi), v in zip(p.var_bounds(), x):
        if lo is not None and v < lo:
            return False
        if hi is not None and v > hi:
            return False
    for row, rel, rhs in p.constraints:
        if not _row_ok(sum((a * v for a, v in zip(row, x)), Fraction(0)), rel, rhs):
            return False
    return True


def _reduced(p: LpProblem, y: Sequence[Fraction]) -> list[Fraction]:
    z = [Fraction(0)] * p.n_vars
    for yi, (row, _, _) in zip(y, p.constraints):
        if yi:
            for j, a in enumerate(row):
                if a:
                    z[j] += yi * a
    return z


def lp_check_certificate(p: LpProblem, s: LpSolution) -> bool:
    """Re-verify a solution by exact arithmetic, independently of the solver."""
    m, n = len(p.constraints), p.n_vars
    if s.status == OPTIMAL:
        if len(s.primal) != n or len(s.dual) != m:
            raise DimensionMismatch("solution dimensions do not match the problem")
        x, y = s.primal, s.dual
        if not _primal_feasible(p, x):
            return False
        primal_obj = sum((c * v for c, v in zip(p.objective, x)), Fraction(0))
        if s.objective is not None and s.objective != primal_obj:
            return False
        maximize = p.sense == "max"
        for yi, (_, rel, _) in zip(y, p.constraints):
            if rel == "<=" and (yi < 0 if maximize else yi > 0):
                return False
            if rel == ">=" and (yi > 0 if maximize else yi < 0):
                return False
        z = _reduced(p, y)
        dual_obj = sum((yi * rhs for yi, (_, _, rhs) in zip(y, p.constraints)), Fraction(0))
        for c, zj, (lo, hi) in zip(p.objective, z, p.var_bounds()):
            r = c - zj
            if r == 0:
                continue
            # which bound the reduced cost pushes the variable against
            at_upper = (r > 0) == maximize
            bound = hi if at_upper else lo
            if bound is None:
                return False
            dual_obj += r * bound
        return dual_obj == primal_obj
    if s.status == INFEASIBLE:
        y = s.certificate
        if len(y) != m:
            raise DimensionMismatch("Farkas vector length does not match the constraints")
        for yi, (_, rel, _) in zip(y, p.constraints):
            if (rel == "<=" and yi < 0) or (rel == ">=" and yi > 0):
                return False
        z = _reduced(p, y)
        box_min = Fraction(0)
        for zj, (lo, hi) in zip(z, p.var_bounds()):
            if zj > 0:
                if lo is None:
                    return False
                box_min += zj * lo
            elif zj < 0:
                if hi is None:
                    return False
                box_min += zj * hi
        rhs = sum((yi * b for yi, (_, _, b) in zip(y, p.constraints)), Fraction(0))
        return box_min > rhs
    if s.status == UNBOUNDED:
        x, d = s.primal, s.certificate
        if len(x) != n or len(d) != n:
            raise DimensionMismatch("ray or point length does not match the problem")
        if not _primal_feasible(p, x):
            return False
        for (lo, hi), dj in zip(p.var_bounds(), d):
            if (lo is not None and dj < 0) or (hi is not None and dj > 0):
                return False
        for row, rel, _ in p.constraints:
            if not _row_ok(sum((a * v for a, v in zip(row, d)), Fraction(0)), rel, Fraction(0)):
                return False
        slope = sum((c * v for c, v in zip(p.objective, d)), Fraction(0))
        return slope > 0 if p.sense == "max" else slope < 0
    return False


def problem_to_json(p: LpProblem) -> dict:
    return {
        "sense": p.sense,
        "objective": [fmt_rat(c) for c in p.objective],
        "constraints": [{"row": [fmt_rat(a) for a in row], "rel": rel, "rhs": fmt_rat(rhs)}
                        for row, rel, rhs in p.constraints],
        "bounds": [[None if lo is None else fmt_rat(lo), None if hi is None else fmt_rat(hi)]
                   for lo, hi in p.var_bounds()],
    }


def problem_from_json(data: dict) -> LpProblem:
    return make_problem(data["objective"],
                        [(c["row"], c["rel"], c["rhs"]) for c in data["constraints"]],
                        data.get("sense", "min"), data.get("bounds"))


def solution_from_json(data: dict) -> LpSolution:
    obj = data.get("objective")
    return LpSolution(data["status"],
                      tuple(to_rat(v) for v in data.get("primal", [])),
                      tuple(to_rat(v) for v in data.get("dual", [])),
                      None if obj is None else to_rat(obj),
                      tuple(to_rat(v) for v in data.get("certificate", [])))
