"""Operator-side norms: Lip, Lip_alpha, the Lipschitz p-summing norm and the
associated norm on finite-rank operators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import errors
from .instances import (LipFunctional, LipOperator, Molecule, PolyhedralSpace, operator_norm,
                        dual_space, zero_operator)
from .lippolytope import DEFAULT_CAP, lip_constant, vertex_values
from .lp import OPTIMAL, LpProblem, LpSolution, lp_solve
from .rationals import INF, Exponent, conjugate, dot, is_integral, mat_vec, pow_bounds, vscale, vsub, zeros


def lip_norm_attained(f: LipOperator) -> tuple[Fraction, tuple[int, int]]:
    X, E = f.X, f.E
    best, arg = Fraction(0), (0, 1)
    for i, j in X.pairs():
        r = E.dual_norm(vsub(f.values[i], f.values[j])) / X.d[i][j]
        if r > best:
            best, arg = r, (i, j)
    return best, arg


def lip_norm(f: LipOperator) -> Fraction:
    """``max ||f(x) - f(y)||_{E*} / d(x, y)``."""
    return lip_norm_attained(f)[0]


# ---------------------------------------------------------------------------
# injective dual norm


@dataclass(frozen=True)
class InjectiveDualCertificate:
    """``f = sum_k c_k g_k ⊠ phi_k`` with ``sum c_k = value`` (upper side) and a
    molecule ``u`` with ``eps(u) <= 1`` and ``u(f) = value`` (lower side)."""

    value: Fraction
    decomposition: tuple  # of (c, g values, phi)
    molecule: Molecule
    problem: LpProblem = field(compare=False)
    solution: LpSolution = field(compare=False)


def injective_dual(f: LipOperator, cap: int = DEFAULT_CAP) -> InjectiveDualCertificate:
    """``Lip_eps(f)`` as ``min sum c`` over nonnegative rank-one decompositions
    into vertex pairs; the LP dual is the sup of ``u(f)`` over ``eps(u) <= 1``."""
    X, E = f.X, f.E
    verts = vertex_values(X, cap)
    phis = E.half_facets()
    cols = [(g, phi) for g in verts if any(g) for phi in phis]
    nrows = (X.n - 1) * E.dim
    rows = [[Fraction(0)] * len(cols) for _ in range(nrows)]
    for k, (g, phi) in enumerate(cols):
        for x in range(1, X.n):
            if g[x]:
                for t, pt in enumerate(phi):
                    if pt:
                        rows[(x - 1) * E.dim + t][k] = g[x] * pt
    rhs = [v for x in range(1, X.n) for v in f.values[x]]
    prob = LpProblem((Fraction(1),) * len(cols),
                     tuple((tuple(r), "=", b) for r, b in zip(rows, rhs)), "min")
    sol = lp_solve(prob)
    if sol.status != OPTIMAL:
        raise errors.InternalDualityGap(f"injective dual LP ended {sol.status}")
    decomposition = tuple((c, g, phi) for c, (g, phi) in zip(sol.primal, cols) if c)
    y = sol.dual
    u = Molecule(X, E, tuple(tuple(y[(x - 1) * E.dim:x * E.dim]) for x in range(1, X.n)))
    return InjectiveDualCertificate(sol.objective, decomposition, u, prob, sol)


def lip_alpha_norm(f: LipOperator, alpha: str, cap: int = DEFAULT_CAP) -> Fraction:
    """Dual norm of ``f`` against the cross-norm ``alpha in {"pi", "eps"}``."""
    if alpha == "pi":
        return lip_norm(f)
    if alpha == "eps":
        if f.is_zero():
            return Fraction(0)
        return injective_dual(f, cap).value
    raise errors.InputError(f"unknown cross-norm {alpha!r}; expected 'pi' or 'eps'")


# ---------------------------------------------------------------------------
# Lipschitz p-summing norm


@dataclass(frozen=True)
class PSummingCertificate:
    """Lipschitz p-summing norm with both LP sides.

    ``power`` is the exact LP optimum ``value**p`` for integral ``p``;
    ``lower``/``upper`` enclose the value itself (equal when exact).
    ``weights`` is the attaining weighted family over ``pairs``; ``domination``
    lists multipliers on Lipschitz-polytope vertices.
    """

    p: Exponent
    lower: Fraction
    upper: Fraction
    power: Fraction | None
    pairs: tuple
    weights: tuple
    domination: tuple = ()  # of (c_k, g_k values)
    lp: tuple = field(default=(), compare=False)

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> Fraction:
        """The norm when exact, otherwise its certified rational upper bound."""
        return self.upper


def _abs_pow(x: Fraction, p: Fraction, side: int) -> Fraction:
    if is_integral(p):
        return abs(x) ** int(p)
    return pow_bounds(abs(x), p)[side]


def _summing_lp(a: Sequence[Fraction], b: Sequence[Sequence[Fraction]]) -> tuple[LpProblem, LpSolution]:
    """min sum c_k s.t. sum_k c_k b[k][i] >= a[i], c >= 0."""
    npairs = len(a)
    cons = tuple((tuple(b[k][i] for k in range(len(b))), ">=", a[i]) for i in range(npairs))
    prob = LpProblem((Fraction(1),) * len(b), cons, "min")
    sol = lp_solve(prob)
    if sol.status != OPTIMAL:
        raise errors.InternalDualityGap(f"p-summing LP ended {sol.status}")
    return prob, sol


def p_summing_norm(f: LipOperator, p: Exponent, cap: int = DEFAULT_CAP) -> PSummingCertificate:
    """Lipschitz p-summing norm ``pi_p^L(f)``.

    For finite ``p`` the definitional sup over finite families becomes
    ``max sum_i w_i ||f(x_i) - f(y_i)||^p`` subject to
    ``sum_i w_i |g(x_i) - g(y_i)|^p <= 1`` for every vertex ``g`` of the
    Lipschitz ball (the constraint is convex in ``g``, so vertices suffice);
    rational weights stand for repetition counts. The LP is solved in its
    dual, domination form, whose rows are the pairs of X.
    """
    X, E = f.X, f.E
    pairs = tuple(X.pairs())
    if p == INF:
        value, (i, j) = lip_norm_attained(f)
        w = tuple(Fraction(int((a, b) == (i, j))) for a, b in pairs)
        return PSummingCertificate(p, value, value, value, pairs, w)
    if f.is_zero():
        return PSummingCertificate(p, Fraction(0), Fraction(0), Fraction(0), pairs,
                                   (Fraction(0),) * len(pairs))
    verts = [g for g in vertex_values(X, cap) if g > tuple(-v for v in g)]
    incr = [E.dual_norm(vsub(f.values[i], f.values[j])) for i, j in pairs]
    if is_integral(p):
        a = [v ** int(p) for v in incr]
        b = [[abs(g[i] - g[j]) ** int(p) for i, j in pairs] for g in verts]
        prob, sol = _summing_lp(a, b)
        lo, hi = pow_bounds(sol.objective, 1 / p)
        dom = tuple((c, g) for c, g in zip(sol.primal, verts) if c)
        return PSummingCertificate(p, lo, hi, sol.objective, pairs, sol.dual, dom, ((prob, sol),))
    # fractional p: outward-rounded coefficients give an enclosure
    a_hi = [_abs_pow(v, p, 1) for v in incr]
    a_lo = [_abs_pow(v, p, 0) for v in incr]
    b_lo = [[_abs_pow(g[i] - g[j], p, 0) for i, j in pairs] for g in verts]
    b_hi = [[_abs_pow(g[i] - g[j], p, 1) for i, j in pairs] for g in verts]
    prob_hi, sol_hi = _summing_lp(a_hi, b_lo)
    prob_lo, sol_lo = _summing_lp(a_lo, b_hi)
    lo = pow_bounds(sol_lo.objective, 1 / p)[0]
    hi = pow_bounds(sol_hi.objective, 1 / p)[1]
    dom = tuple((c, g) for c, g in zip(sol_hi.primal, verts) if c)
    return PSummingCertificate(p, lo, hi, None, pairs, sol_lo.dual, dom,
                               ((prob_lo, sol_lo), (prob_hi, sol_hi)))


def d_p_operator_norm(f: LipOperator, p: Exponent, cap: int = DEFAULT_CAP) -> Fraction:
    """Dual norm of ``f`` against ``d_p``, via its identification with ``pi_{p'}^L``."""
    return p_summing_norm(f, conjugate(p), cap).value


# ---------------------------------------------------------------------------
# extremal functionals and finite-rank operators


def extremal_functional(u: Molecule, alpha: str, cap: int = DEFAULT_CAP) -> LipOperator:
    """Operator of ``alpha``-dual norm one with ``u(f) = alpha(u)``."""
    from .crossnorms import eps_norm, pi_norm

    if u.is_zero():
        raise errors.ZeroMolecule("the zero molecule has no norming functional")
    if alpha == "pi":
        return pi_norm(u).dual_witness
    if alpha == "eps":
        return eps_norm(u, cap).dual_witness
    raise errors.InputError(f"unknown cross-norm {alpha!r}; expected 'pi' or 'eps'")


def rank_one(g: LipFunctional, phi: Sequence[Fraction], E: PolyhedralSpace) -> LipOperator:
    """``(g · phi)(x) = g(x) phi``."""
    if g.values[0] != 0:
        raise errors.BasePointNotFixed("g(0) must be 0")
    if len(phi) != E.dim:
        raise errors.DimensionMismatch(f"functional of length {len(phi)}, expected {E.dim}")
    return LipOperator(g.X, E, tuple(vscale(gx, tuple(phi)) for gx in g.values))


def alpha_prime_norm(terms: Sequence[tuple[LipFunctional, Sequence[Fraction]]], alpha: str,
                     E: PolyhedralSpace, cap: int = DEFAULT_CAP) -> Fraction:
    """Associated norm of ``sum_j g_j ⊠ phi_j``: the ``alpha``-dual norm of
    the assembled finite-rank operator ``sum_j g_j · phi_j``."""
    if not terms:
        raise errors.InputError("empty finite-rank tensor")
    X = terms[0][0].X
    f = zero_operator(X, E)
    for g, phi in terms:
        if g.X != X:
            raise errors.SpaceMismatch("terms over different metric spaces")
        f = f + rank_one(g, phi, E)
    return lip_alpha_norm(f, alpha, cap)


def compose(s: Sequence[Sequence[Fraction]], f: LipOperator, h: Sequence[int]) -> LipOperator:
    """``S ∘ f ∘ h`` for a base-point preserving ``h: X -> X`` and linear ``S`` on E*."""
    if h[0] != 0:
        raise errors.BasePointNotFixed(f"h(0) = {h[0]} != 0")
    return LipOperator(f.X, f.E, tuple(mat_vec(s, f.values[h[x]]) for x in range(f.X.n)))


def dual_operator_norm(E: PolyhedralSpace, s: Sequence[Sequence[Fraction]]) -> Fraction:
    """Norm of a linear map on E*, written in E* coordinates."""
    return operator_norm(dual_space(E), s)


__all__ = [
    "lip_norm", "lip_norm_attained", "lip_alpha_norm", "injective_dual", "InjectiveDualCertificate",
    "PSummingCertificate", "p_summing_norm", "d_p_operator_norm", "extremal_functional",
    "rank_one", "alpha_prime_norm", "compose", "dual_operator_norm", "lip_constant",
]
