"""Lipschitz cross-norms of molecules.

``pi_norm`` and ``eps_norm`` are exact. ``d_p_bounds`` and ``w_p_upper``
return certified intervals: the upper end is the cost of an explicit
representation, the lower end is ``|u(f)|`` for an explicit operator whose
dual norm is certified to be at most one.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import errors
from .instances import (FormalRepresentation, LipOperator, Molecule, pairing, random_operator,
                        zero_operator)
from .lippolytope import DEFAULT_CAP, vertex_values
from .lp import OPTIMAL, LpProblem, LpSolution, lp_check_certificate, lp_solve, make_problem
from .rationals import (INF, Exponent, conjugate, dot, fmt_exponent, mat_vec, pnorm_bounds,
                        pow_bounds, vadd, vscale, vsub, zeros)

EXACT = "Exact"
INTERVAL = "Interval"


@dataclass(frozen=True)
class NormResult:
    kind: str
    lower: Fraction
    upper: Fraction
    method: str
    p: Exponent | None = None
    primal_witness: FormalRepresentation | None = None
    primal_cost: Fraction | None = None
    dual_witness: LipOperator | None = None
    # certified upper bound on the dual norm of dual_witness; lower = u(f) / dual_bound
    dual_bound: Fraction | None = None
    details: dict = field(default_factory=dict, compare=False)
    lp_certificates: tuple = field(default=(), compare=False)  # of (LpProblem, LpSolution)

    @property
    def value(self) -> Fraction:
        if self.kind != EXACT:
            raise ValueError(f"interval result [{self.lower}, {self.upper}] has no single value")
        return self.lower

    @property
    def p_conjugate(self) -> Exponent | None:
        return None if self.p is None else conjugate(self.p)

    def contains(self, q: Fraction) -> bool:
        return self.lower <= q <= self.upper


# ---------------------------------------------------------------------------
# projective norm


def _pi_primal_problem(u: Molecule) -> tuple[LpProblem, list]:
    """min sum d(x,y) c_{xy,v} over vertex multiples c >= 0 reproducing u."""
    X, E = u.X, u.E
    cols = [(i, j, v) for i, j in X.pairs() for v in E.vertices]
    nrows = (X.n - 1) * E.dim
    rows = [[Fraction(0)] * len(cols) for _ in range(nrows)]
    for k, (i, j, v) in enumerate(cols):
        for t, vt in enumerate(v):
            if not vt:
                continue
            if i:
                rows[(i - 1) * E.dim + t][k] += vt
            if j:
                rows[(j - 1) * E.dim + t][k] -= vt
    rhs = u.flat()
    cost = [X.d[i][j] for i, j, _ in cols]
    prob = LpProblem(tuple(cost), tuple((tuple(r), "=", b) for r, b in zip(rows, rhs)), "min")
    return prob, cols


def _pi_dual_problem(u: Molecule) -> LpProblem:
    """max u(f) over f with <f(x) - f(y), v> <= d(x, y) for ball vertices v."""
    X, E = u.X, u.E
    nvars = (X.n - 1) * E.dim
    cons = []
    for i, j in X.pairs():
        for v in E.vertices:
            row = [Fraction(0)] * nvars
            for t, vt in enumerate(v):
                if i:
                    row[(i - 1) * E.dim + t] += vt
                if j:
                    row[(j - 1) * E.dim + t] -= vt
            cons.append((tuple(row), "<=", X.d[i][j]))
    return LpProblem(tuple(u.flat()), tuple(cons), "max", ((None, None),) * nvars)


def _operator_from_flat(X, E, flat: Sequence[Fraction]) -> LipOperator:
    vals = [zeros(E.dim)]
    for x in range(1, X.n):
        vals.append(tuple(flat[(x - 1) * E.dim:(x) * E.dim]))
    return LipOperator(X, E, tuple(vals))


def pi_norm(u: Molecule, verify: bool = True) -> NormResult:
    """Projective norm by two independent LPs whose optima must coincide."""
    X, E = u.X, u.E
    primal, cols = _pi_primal_problem(u)
    ps = lp_solve(primal)
    dual = _pi_dual_problem(u)
    ds = lp_solve(dual)
    if ps.status != OPTIMAL or ds.status != OPTIMAL:
        raise errors.InternalDualityGap(f"projective LPs not optimal: {ps.status}, {ds.status}")
    if ps.objective != ds.objective:
        raise errors.InternalDualityGap(f"primal {ps.objective} != dual {ds.objective}")
    if verify and not (lp_check_certificate(primal, ps) and lp_check_certificate(dual, ds)):
        raise errors.InternalDualityGap("LP certificate failed exact re-check")
    agg: dict[tuple[int, int], tuple] = {}
    for c, (i, j, v) in zip(ps.primal, cols):
        if c:
            agg[(i, j)] = vadd(agg.get((i, j), zeros(E.dim)), vscale(c, v))
    terms = tuple((i, j, e) for (i, j), e in sorted(agg.items()) if any(e))
    rep = FormalRepresentation(X, E, terms)
    f = _operator_from_flat(X, E, ds.primal)
    return NormResult(EXACT, ps.objective, ps.objective, "lp-duality",
                      primal_witness=rep, primal_cost=rep.projective_cost(),
                      dual_witness=f, dual_bound=Fraction(1),
                      lp_certificates=((primal, ps), (dual, ds)))


# ---------------------------------------------------------------------------
# injective norm


def eps_pair(u: Molecule, cap: int = DEFAULT_CAP) -> tuple[Fraction, tuple, tuple]:
    """``(eps(u), g, phi)`` with ``(g ⊠ phi)(u) = eps(u)``; g, phi ball vertices."""
    X, E = u.X, u.E
    verts = vertex_values(X, cap)
    best, arg = None, None
    for phi in E.facets:
        s = [dot(phi, u.coeffs[x - 1]) for x in range(1, X.n)]
        for g in verts:
            val = sum((a * b for a, b in zip(g[1:], s)), Fraction(0))
            if best is None or val > best:
                best, arg = val, (g, phi)
    return best, arg[0], arg[1]


def eps_norm(u: Molecule, cap: int = DEFAULT_CAP) -> NormResult:
    """Injective norm: max of ``(g ⊠ phi)(u)`` over vertex pairs of the two dual balls.

    The objective is bilinear, so the sup over the product of polytopes is
    attained at a pair of vertices; both vertex sets are symmetric, so the
    max is already the max of the absolute value.
    """
    X, E = u.X, u.E
    value, g, phi = eps_pair(u, cap)
    f = LipOperator(X, E, tuple(vscale(gx, phi) for gx in g))
    return NormResult(EXACT, value, value, "vertex-enumeration", dual_witness=f,
                      dual_bound=Fraction(1), details={"g": g, "phi": phi})


# ---------------------------------------------------------------------------
# pushforward


def pushforward(u: Molecule, h: Sequence[int], t: Sequence[Sequence[Fraction]]) -> Molecule:
    """Canonical molecule of ``(h ⊠ T) u`` for a self-map ``h`` with ``h(0) = 0``."""
    X, E = u.X, u.E
    if len(h) != X.n:
        raise errors.DimensionMismatch(f"point map has {len(h)} entries, expected {X.n}")
    if h[0] != 0:
        raise errors.BasePointNotFixed(f"h(0) = {h[0]} != 0")
    m = [zeros(E.dim) for _ in range(X.n)]
    for x in range(1, X.n):
        m[h[x]] = vadd(m[h[x]], mat_vec(t, u.coeffs[x - 1]))
    return Molecule(X, E, tuple(m[1:]))


def point_map_lip(X, h: Sequence[int]) -> Fraction:
    return max(X.d[h[i]][h[j]] / X.d[i][j] for i, j in X.pairs())


# ---------------------------------------------------------------------------
# p-nuclear norm


@dataclass
class _ScaledRep:
    """``u = sum_i lam_i delta_(x_i, y_i) ⊠ e_i`` stored as (x, y, v = lam e) and lam."""

    terms: list  # (x, y, v)
    lams: list

    def formal(self, X, E) -> FormalRepresentation:
        return FormalRepresentation(X, E, tuple((x, y, v) for x, y, v in self.terms))


def _dp_score_upper(X, E, rep: _ScaledRep, p: Exponent, half_verts) -> Fraction:
    """Certified upper bound on ``sup_g (sum |lam_i dg_i|^p')^(1/p') * (sum ||e_i||^p)^(1/p)``."""
    q = conjugate(p)
    if q == INF:
        g_part = max(lam * X.d[x][y] for (x, y, _), lam in zip(rep.terms, rep.lams))
    else:
        worst = Fraction(0)
        for g in half_verts:
            s = Fraction(0)
            for (x, y, _), lam in zip(rep.terms, rep.lams):
                s += pow_bounds(abs(lam * (g[x] - g[y])), q)[1]
            worst = max(worst, s)
        g_part = pow_bounds(worst, 1 / q)[1]
    norms = [E.norm(v) / lam for (_, _, v), lam in zip(rep.terms, rep.lams)]
    return g_part * pnorm_bounds(norms, p)[1]


def _holder_lams(X, E, terms, p: Exponent) -> list[Fraction]:
    """Rational approximations of the Hölder-balancing scalars
    ``lam_i^p' ∝ ||v_i|| / d_i^(p'-1)``."""
    q = conjugate(p)
    out = []
    for x, y, v in terms:
        a, d = E.norm(v), X.d[x][y]
        if q == INF:
            out.append(1 / d)
        elif q == 1:
            out.append(a)
        else:
            w = a / pow_bounds(d, q - 1)[0]
            lam = pow_bounds(w, 1 / q)[0]
            out.append(lam if lam > 0 else Fraction(1, 1 << 20))
    return out


def _local_search(X, E, rep: _ScaledRep, p, half_verts, rounds: int) -> tuple[_ScaledRep, Fraction]:
    best = _dp_score_upper(X, E, rep, p, half_verts)
    steps = (Fraction(2), Fraction(3, 2), Fraction(2, 3), Fraction(1, 2))
    for _ in range(rounds):
        improved = False
        for i in range(len(rep.terms)):
            for s in steps:
                lams = list(rep.lams)
                lams[i] *= s
                cand = _ScaledRep(rep.terms, lams)
                score = _dp_score_upper(X, E, cand, p, half_verts)
                if score < best:
                    rep, best, improved = cand, score, True
        if not improved:
            break
    return rep, best


def star_representation(u: Molecule) -> FormalRepresentation:
    """``u = sum_x delta_(x, 0) ⊠ m(x)``."""
    return FormalRepresentation(u.X, u.E, tuple((x, 0, u.coeffs[x - 1]) for x in u.support()))


def d_p_bounds(u: Molecule, p: Exponent, n_random: int = 100, seed: int = 0,
               search_rounds: int = 2, cap: int = DEFAULT_CAP) -> NormResult:
    """Certified interval for the Lipschitz p-nuclear norm ``d_p(u)``.

    Upper end: best scaled representation found (projective-optimal and star
    supports, Hölder-balanced scalars refined by local search), or the exact
    Hölder bound ``sum d_i ||v_i||`` of the projective-optimal representation.
    Lower end: ``|u(f)| / pi_{p'}^L(f)`` maximised over the projective and
    injective extremal operators, their mixtures and ``n_random`` seeded
    operators. Rank-one operators add nothing beyond the injective witness,
    since their ratio is at most ``eps(u)``.
    """
    from .ideals import p_summing_norm

    X, E = u.X, u.E
    q = conjugate(p)
    pi = pi_norm(u)
    eps = eps_norm(u, cap)
    if u.is_zero():
        return NormResult(EXACT, Fraction(0), Fraction(0), "zero", p=p,
                          primal_witness=FormalRepresentation(X, E, ()), primal_cost=Fraction(0),
                          dual_witness=zero_operator(X, E), dual_bound=Fraction(0))
    half_verts = [g for g in vertex_values(X, cap) if g > tuple(-v for v in g)]

    # upper bound candidates
    best_upper = pi.upper
    best_rep = pi.primal_witness
    best_detail = {"scalars": "holder", "support": "projective"}
    for label, formal in (("projective", pi.primal_witness), ("star", star_representation(u))):
        terms = list(formal.terms)
        rep = _ScaledRep(terms, _holder_lams(X, E, terms, p))
        rounds = search_rounds if p != 1 else 0
        rep, score = _local_search(X, E, rep, p, half_verts, rounds)
        if score < best_upper:
            best_upper, best_rep = score, formal
            best_detail = {"scalars": [str(lam) for lam in rep.lams], "support": label}

    # lower bound candidates
    rng = random.Random(seed)
    candidates = [("projective-extremal", pi.dual_witness), ("injective-extremal", eps.dual_witness)]
    for t in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        candidates.append((f"mixture-{t}", pi.dual_witness.scale(1 - t) + eps.dual_witness.scale(t)))
    for k in range(n_random):
        candidates.append((f"random-{k}", random_operator(rng, X, E)))
    best_lower, best_f, best_label, best_bound = Fraction(0), zero_operator(X, E), "none", Fraction(1)
    for label, f in candidates:
        val = pairing(u, f)
        if val == 0:
            continue
        bound = p_summing_norm(f, q, cap=cap).upper
        if bound == 0:
            continue
        ratio = abs(val) / bound
        if ratio > best_lower:
            best_lower, best_label, best_bound = ratio, label, bound
            best_f = f if val > 0 else f.scale(-1)
    if best_lower > best_upper:
        raise errors.InternalDualityGap(f"d_p lower {best_lower} exceeds upper {best_upper}")
    if p == 1 and not (best_lower == best_upper == pi.value):
        raise errors.InternalDualityGap(f"d_1 interval [{best_lower}, {best_upper}] != pi = {pi.value}")
    kind = EXACT if best_lower == best_upper else INTERVAL
    details = dict(best_detail)
    details["lower_witness"] = best_label
    details["p_conjugate"] = fmt_exponent(q)
    return NormResult(kind, best_lower, best_upper, "representation-search/summing-duality", p=p,
                      primal_witness=best_rep, primal_cost=best_upper,
                      dual_witness=best_f, dual_bound=best_bound, details=details,
                      lp_certificates=pi.lp_certificates)


def dp_representation_cost(formal: FormalRepresentation, lams: Sequence[Fraction], p: Exponent,
                           cap: int = DEFAULT_CAP) -> Fraction:
    """Certified upper bound on the d_p score of a scaled representation."""
    X, E = formal.X, formal.E
    half_verts = [g for g in vertex_values(X, cap) if g > tuple(-v for v in g)]
    return _dp_score_upper(X, E, _ScaledRep(list(formal.terms), list(lams)), p, half_verts)


# ---------------------------------------------------------------------------
# domination and w_p


@dataclass(frozen=True)
class DominationWitness:
    """``lam_i delta_(y_i, y_i') = sum_j a_ij mu_j delta_(x_j, x_j')`` with ``||A|| <= 1``."""

    matrix: tuple  # n x m
    p_conjugate: Exponent
    lam: tuple
    mu: tuple

    def operator_norm(self) -> Fraction:
        a = self.matrix
        if not a or not a[0]:
            return Fraction(0)
        if self.p_conjugate == 1:
            return max(sum(abs(row[j]) for row in a) for j in range(len(a[0])))
        return max(sum(abs(v) for v in row) for row in a)

    def verify(self, X) -> bool:
        if self.operator_norm() > 1:
            return False
        for row, (lam, y, y2) in zip(self.matrix, self.lam):
            lhs = _scalar_molecule(X, [(lam, y, y2)])
            rhs = _scalar_molecule(X, [(a * mu, x, x2) for a, (mu, x, x2) in zip(row, self.mu)])
            if lhs != rhs:
                return False
        return True


@dataclass(frozen=True)
class PrecInfeasible:
    problem: LpProblem
    solution: LpSolution


def _scalar_molecule(X, terms) -> tuple:
    m = [Fraction(0)] * X.n
    for c, a, b in terms:
        m[a] += c
        m[b] -= c
    return tuple(m[1:])


def _check_prec_exponent(q: Exponent) -> None:
    if q not in (1, INF):
        raise errors.UnsupportedExponent(
            f"domination is only linear for p' in {{1, inf}}, got {fmt_exponent(q)}")


def prec_check(X, p_conjugate: Exponent, lam: Sequence, mu: Sequence):
    """Find ``A`` witnessing ``(lam_i, y_i, y_i') ≺_{p'} (mu_j, x_j, x_j')`` or an
    exact infeasibility certificate.

    ``p' = 1`` bounds column sums of ``|A|`` by one, ``p' = inf`` row sums.
    """
    _check_prec_exponent(p_conjugate)
    lam = [(Fraction(c), int(a), int(b)) for c, a, b in lam]
    mu = [(Fraction(c), int(a), int(b)) for c, a, b in mu]
    for _, a, b in lam + mu:
        for idx in (a, b):
            if not 0 <= idx < X.n:
                raise errors.IndexOutOfRange(f"point index {idx} not in 0..{X.n - 1}")
    n, m = len(lam), len(mu)
    nv = 2 * n * m  # a_ij then s_ij

    def a_idx(i, j):
        return i * m + j

    def s_idx(i, j):
        return n * m + i * m + j

    cons = []
    for i in range(n):
        for j in range(m):
            row = [0] * nv
            row[s_idx(i, j)], row[a_idx(i, j)] = 1, -1
            cons.append((row, ">=", 0))
            row = [0] * nv
            row[s_idx(i, j)], row[a_idx(i, j)] = 1, 1
            cons.append((row, ">=", 0))
    if p_conjugate == 1:
        for j in range(m):
            row = [0] * nv
            for i in range(n):
                row[s_idx(i, j)] = 1
            cons.append((row, "<=", 1))
    else:
        for i in range(n):
            row = [0] * nv
            for j in range(m):
                row[s_idx(i, j)] = 1
            cons.append((row, "<=", 1))
    mu_mols = [_scalar_molecule(X, [t]) for t in mu]
    for i in range(n):
        target = _scalar_molecule(X, [lam[i]])
        for z in range(X.n - 1):
            row = [0] * nv
            for j in range(m):
                row[a_idx(i, j)] = mu_mols[j][z]
            cons.append((row, "=", target[z]))
    obj = [0] * (n * m) + [1] * (n * m)
    bounds = [(None, None)] * (n * m) + [(0, None)] * (n * m)
    prob = make_problem(obj, cons, "min", bounds)
    sol = lp_solve(prob)
    if sol.status != OPTIMAL:
        return PrecInfeasible(prob, sol)
    a = tuple(tuple(sol.primal[a_idx(i, j)] for j in range(m)) for i in range(n))
    return DominationWitness(a, p_conjugate, tuple(lam), tuple(mu))


def _best_family(X, lam_terms, q: Exponent) -> tuple[Fraction, list, tuple] | None:
    """Cheapest dominating family drawn from all pairs of X for fixed
    ``(lam_i, y_i, y_i')``; returns (family cost, mu family, A)."""
    pairs = X.pairs()
    n, m = len(lam_terms), len(pairs)
    pair_mols = [_scalar_molecule(X, [(1, a, b)]) for a, b in pairs]
    # variables: b_ij (free), s_ij >= |b_ij|, then mu_j (p'=1) or t (p'=inf)
    nb = n * m
    extra = m if q == 1 else 1
    nv = 2 * nb + extra
    cons = []
    for k in range(nb):
        row = [0] * nv
        row[nb + k], row[k] = 1, -1
        cons.append((row, ">=", 0))
        row = [0] * nv
        row[nb + k], row[k] = 1, 1
        cons.append((row, ">=", 0))
    for i, t in enumerate(lam_terms):
        target = _scalar_molecule(X, [t])
        for z in range(X.n - 1):
            row = [0] * nv
            for j in range(m):
                row[i * m + j] = pair_mols[j][z]
            cons.append((row, "=", target[z]))
    if q == 1:
        for j in range(m):
            row = [0] * nv
            for i in range(n):
                row[nb + i * m + j] = 1
            row[2 * nb + j] = -1
            cons.append((row, "<=", 0))
        obj = [0] * (2 * nb) + [X.d[a][b] for a, b in pairs]
    else:
        for i in range(n):
            row = [0] * nv
            for j, (a, b) in enumerate(pairs):
                row[nb + i * m + j] = X.d[a][b]
            row[2 * nb] = -1
            cons.append((row, "<=", 0))
        obj = [0] * (2 * nb) + [1]
    bounds = [(None, None)] * nb + [(0, None)] * (nb + extra)
    sol = lp_solve(make_problem(obj, cons, "min", bounds))
    if sol.status != OPTIMAL:
        return None
    b = sol.primal[:nb]
    if q == 1:
        mus = list(sol.primal[2 * nb:])
    else:
        t = sol.primal[2 * nb]
        mus = [t / X.d[a][b_] for a, b_ in pairs]
    keep = [j for j in range(m) if mus[j] != 0]
    family = [(mus[j], pairs[j][0], pairs[j][1]) for j in keep]
    a = tuple(tuple(b[i * m + j] / mus[j] for j in keep) for i in range(n))
    return sol.objective, family, a


def w_p_upper(u: Molecule, p: Exponent, cap: int = DEFAULT_CAP) -> NormResult:
    """Certified interval for ``w_p(u)``, ``p' in {1, inf}``; lower end ``eps(u)``."""
    q = conjugate(p)
    _check_prec_exponent(q)
    X, E = u.X, u.E
    eps = eps_norm(u, cap)
    if u.is_zero():
        return NormResult(EXACT, Fraction(0), Fraction(0), "zero", p=p,
                          primal_witness=FormalRepresentation(X, E, ()), primal_cost=Fraction(0),
                          dual_witness=eps.dual_witness, dual_bound=Fraction(1))
    pi = pi_norm(u)
    best = None
    for label, formal in (("projective", pi.primal_witness), ("star", star_representation(u))):
        terms = list(formal.terms)
        # normalize so the cross-norm identity is met term by term
        lams = [1 / X.d[x][y] if q == INF else E.norm(v) for x, y, v in terms]
        es = [vscale(1 / lam, v) for lam, (_, _, v) in zip(lams, terms)]
        lam_terms = [(lam, x, y) for lam, (x, y, _) in zip(lams, terms)]
        e_part = pnorm_bounds([E.norm(e) for e in es], p)[1]
        # self-domination: mu = lam, A = I
        ident = tuple(tuple(Fraction(int(i == j)) for j in range(len(terms))) for i in range(len(terms)))
        options = [("self", list(lam_terms), ident)]
        fam = _best_family(X, lam_terms, q)
        if fam is not None:
            options.append(("all-pairs", fam[1], fam[2]))
        for fam_label, family, a in options:
            witness = DominationWitness(a, q, tuple(lam_terms), tuple(family))
            if not witness.verify(X):
                continue
            mu_part = pnorm_bounds([mu * X.d[x][y] for mu, x, y in family], q)[1]
            score = e_part * mu_part
            if best is None or score < best[0]:
                best = (score, formal, witness, f"{label}/{fam_label}", es)
    score, formal, witness, label, es = best
    if score > pi.value:
        raise errors.InternalDualityGap(f"w_p upper {score} exceeds pi {pi.value}")
    details = {"search": label, "domination": witness,
               "vectors": [list(map(str, e)) for e in es], "p_conjugate": fmt_exponent(q)}
    kind = EXACT if eps.value == score else INTERVAL
    return NormResult(kind, eps.value, score, "representation-search/domination", p=p,
                      primal_witness=formal, primal_cost=score,
                      dual_witness=eps.dual_witness, dual_bound=Fraction(1), details=details)


def cross_norm(u: Molecule, alpha: str) -> Fraction:
    """Exact value of ``alpha in {"pi", "eps"}`` at ``u``."""
    if alpha == "pi":
        return pi_norm(u).value
    if alpha == "eps":
        return eps_norm(u).value
    raise errors.InputError(f"unknown exact cross-norm {alpha!r}")


__all__ = [
    "NormResult", "DominationWitness", "PrecInfeasible", "pi_norm", "eps_norm", "eps_pair",
    "d_p_bounds", "prec_check", "w_p_upper", "pushforward", "point_map_lip",
    "star_representation", "dp_representation_cost", "cross_norm",
]
