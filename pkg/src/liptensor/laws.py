"""Randomized law suite: each law is a finite, exactly checkable consequence
of a duality or hull theorem, evaluated on generated instances.

A law has a generator, which draws JSON-ready inputs for one trial, and an
evaluator, which decodes those inputs and returns the list of checks that
failed. Counterexamples are stored as payloads (instance + inputs + the
failing checks) and re-verify from the payload alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import errors
from .crossnorms import (d_p_bounds, dp_representation_cost, eps_norm, pi_norm, point_map_lip,
                         pushforward, star_representation, w_p_upper)
from .hulls import a_max_lower_bound, ideal_label, theta_norm
from .ideals import (compose, d_p_operator_norm, extremal_functional, injective_dual,
                     lip_alpha_norm, lip_norm, p_summing_norm, rank_one)
from .instances import (FormalRepresentation, Molecule, dual_space, elementary, molecule,
                        molecule_from_representation, operator_norm, random_functional,
                        random_instance, random_matrix, random_molecule, random_operator,
                        random_point_map, random_rat, random_representation)
from .lippolytope import lip_constant, vertex_values
from .rationals import INF, conjugate, fmt_exponent, fmt_vec, parse_exponent, to_rat, to_vec, vscale
from .serialize import (functional_from_json, functional_to_json, instance_from_json, instance_to_json,
                        molecule_from_json, molecule_to_json, operator_from_json, operator_to_json,
                        representation_from_json, representation_to_json)

# operators sampled per d_p lower bound inside the suite (the library default is larger)
SUITE_RANDOM_WITNESSES = 8
MUTANTS = ("cross-norm-shift",)


@dataclass(frozen=True)
class Law:
    name: str
    statement: str
    generate: Callable[[random.Random, object, object], dict]
    evaluate: Callable[[object, object, dict, str | None], list]


def _cmp(label: str, lhs, rel: str, rhs) -> dict | None:
    ok = {"==": lhs == rhs, "<=": lhs <= rhs, ">=": lhs >= rhs}[rel]
    if ok:
        return None
    return {"check": label, "lhs": str(lhs), "relation": rel, "rhs": str(rhs)}


def _collect(*items) -> list:
    return [c for c in items if c is not None]


def _mat_json(t) -> list:
    return [fmt_vec(r) for r in t]


def _mat(data) -> tuple:
    return tuple(to_vec(r) for r in data)


# ---------------------------------------------------------------------------
# cross-norm identity


def _gen_elementary(rng, X, E) -> dict:
    x, y = rng.sample(range(X.n), 2)
    e = tuple(random_rat(rng) for _ in range(E.dim))
    if not any(e):
        e = (Fraction(1),) + e[1:]
    return {"x": x, "y": y, "e": fmt_vec(e)}


def _eval_cross(X, E, data, mutant) -> list:
    x, y, e = data["x"], data["y"], to_vec(data["e"])
    u = elementary(X, E, x, y, e)
    d = X.d[x][y] + (1 if mutant == "cross-norm-shift" else 0)
    target = d * E.norm(e)
    d1 = d_p_bounds(u, Fraction(1), n_random=SUITE_RANDOM_WITNESSES)
    d2 = d_p_bounds(u, Fraction(2), n_random=SUITE_RANDOM_WITNESSES)
    return _collect(
        _cmp("pi(delta ⊠ e) = d ||e||", pi_norm(u).value, "==", target),
        _cmp("eps(delta ⊠ e) = d ||e||", eps_norm(u).value, "==", target),
        _cmp("d_1 lower = d ||e||", d1.lower, "==", target),
        _cmp("d_1 upper = d ||e||", d1.upper, "==", target),
        _cmp("d_2 lower <= d ||e||", d2.lower, "<=", target),
        _cmp("d_2 upper >= d ||e||", d2.upper, ">=", target),
    )


# ---------------------------------------------------------------------------
# sandwich and d_1 = pi


def _gen_molecule(rng, X, E) -> dict:
    return {"molecule": molecule_to_json(random_molecule(rng, X, E))}


def _eval_sandwich(X, E, data, mutant) -> list:
    u = molecule_from_json(data["molecule"], X, E)
    pi, eps = pi_norm(u).value, eps_norm(u).value
    out = _collect(_cmp("eps <= pi", eps, "<=", pi))
    for p in (Fraction(1), Fraction(2), INF):
        r = d_p_bounds(u, p, n_random=SUITE_RANDOM_WITNESSES)
        tag = fmt_exponent(p)
        out += _collect(_cmp(f"eps <= d_{tag} lower", eps, "<=", r.lower),
                        _cmp(f"d_{tag} lower <= upper", r.lower, "<=", r.upper),
                        _cmp(f"d_{tag} upper <= pi", r.upper, "<=", pi))
    for p in (Fraction(1), INF):
        r = w_p_upper(u, p)
        tag = fmt_exponent(p)
        out += _collect(_cmp(f"eps <= w_{tag} lower", eps, "<=", r.lower),
                        _cmp(f"w_{tag} lower <= upper", r.lower, "<=", r.upper),
                        _cmp(f"w_{tag} upper <= pi", r.upper, "<=", pi))
    return out


def _gen_d1(rng, X, E) -> dict:
    u = random_molecule(rng, X, E)
    # extra representations of u: a random formal sum corrected by a star
    reps = []
    for _ in range(2):
        r = random_representation(rng, X, E, terms=rng.randint(1, 3))
        w = molecule_from_representation(r)
        diff = Molecule(X, E, tuple(tuple(a - b for a, b in zip(cu, cw))
                                    for cu, cw in zip(u.coeffs, w.coeffs)))
        terms = r.terms + star_representation(diff).terms
        lams = [random_rat(rng, 3, 3, nonzero=True) for _ in terms]
        lams = [abs(lam) for lam in lams]
        reps.append({"representation": representation_to_json(FormalRepresentation(X, E, terms)),
                     "scalars": fmt_vec(lams)})
    return {"molecule": molecule_to_json(u), "representations": reps}


def _eval_d1(X, E, data, mutant) -> list:
    u = molecule_from_json(data["molecule"], X, E)
    pi = pi_norm(u).value
    r = d_p_bounds(u, Fraction(1), n_random=SUITE_RANDOM_WITNESSES)
    out = _collect(_cmp("d_1 lower = pi", r.lower, "==", pi), _cmp("d_1 upper = pi", r.upper, "==", pi))
    for k, item in enumerate(data["representations"]):
        rep = representation_from_json(item["representation"], X, E)
        if not rep.terms:
            continue
        if molecule_from_representation(rep) != u:
            out.append({"check": f"representation {k} reproduces u", "lhs": "False",
                        "relation": "==", "rhs": "True"})
            continue
        cost = dp_representation_cost(rep, to_vec(item["scalars"]), Fraction(1))
        out += _collect(_cmp(f"d_1 cost of representation {k} >= pi", cost, ">=", pi),
                        _cmp(f"projective cost of representation {k} >= pi",
                             rep.projective_cost(), ">=", pi))
    return out


# ---------------------------------------------------------------------------
# uniformity, duality, rank one, ideal


def _gen_uniform(rng, X, E) -> dict:
    return {"molecule": molecule_to_json(random_molecule(rng, X, E)),
            "h": list(random_point_map(rng, X)), "T": _mat_json(random_matrix(rng, E.dim))}


def _eval_uniform(X, E, data, mutant) -> list:
    u = molecule_from_json(data["molecule"], X, E)
    h, t = data["h"], _mat(data["T"])
    v = pushforward(u, h, t)
    scale = point_map_lip(X, h) * operator_norm(E, t)
    return _collect(
        _cmp("pi((h⊠T)u) <= Lip(h)||T|| pi(u)", pi_norm(v).value, "<=", scale * pi_norm(u).value),
        _cmp("eps((h⊠T)u) <= Lip(h)||T|| eps(u)", eps_norm(v).value, "<=", scale * eps_norm(u).value),
    )


def _gen_pair(rng, X, E) -> dict:
    return {"molecule": molecule_to_json(random_molecule(rng, X, E)),
            "operator": operator_to_json(random_operator(rng, X, E))}


def _eval_duality(X, E, data, mutant) -> list:
    u = molecule_from_json(data["molecule"], X, E)
    f = operator_from_json(data["operator"], X, E)
    from .instances import pairing
    out = []
    for alpha, norm in (("pi", pi_norm(u).value), ("eps", eps_norm(u).value)):
        out += _collect(_cmp(f"|u(f)| <= Lip_{alpha}(f) {alpha}(u)", abs(pairing(u, f)), "<=",
                             lip_alpha_norm(f, alpha) * norm))
        if not u.is_zero():
            g = extremal_functional(u, alpha)
            out += _collect(_cmp(f"{alpha} extremal attains", pairing(u, g), "==", norm),
                            _cmp(f"Lip_{alpha}(extremal) = 1", lip_alpha_norm(g, alpha), "==", 1))
    # the functional u -> u(f) on basis molecules returns the value table of f
    for x in range(1, X.n):
        for t in range(E.dim):
            e = tuple(Fraction(int(s == t)) for s in range(E.dim))
            out += _collect(_cmp(f"Lambda round trip at ({x}, {t})",
                                 pairing(elementary(X, E, x, 0, e), f), "==", f.values[x][t]))
    return out


def _gen_rank_one(rng, X, E) -> dict:
    g = random_functional(rng, X)
    phi = tuple(random_rat(rng) for _ in range(E.dim))
    return {"g": functional_to_json(g), "phi": fmt_vec(phi)}


def _eval_rank_one(X, E, data, mutant) -> list:
    g = functional_from_json(data["g"], X)
    phi = to_vec(data["phi"])
    f = rank_one(g, phi, E)
    target = lip_constant(g) * E.dual_norm(phi)
    return _collect(_cmp("Lip_pi(g·phi) = Lip(g)||phi||", lip_alpha_norm(f, "pi"), "==", target),
                    _cmp("Lip_eps(g·phi) = Lip(g)||phi||", lip_alpha_norm(f, "eps"), "==", target))


def _gen_ideal(rng, X, E) -> dict:
    return {"operator": operator_to_json(random_operator(rng, X, E)),
            "h": list(random_point_map(rng, X)), "S": _mat_json(random_matrix(rng, E.dim))}


def _eval_ideal(X, E, data, mutant) -> list:
    f = operator_from_json(data["operator"], X, E)
    h, s = data["h"], _mat(data["S"])
    g = compose(s, f, h)
    scale = operator_norm(dual_space(E), s) * point_map_lip(X, h)
    return _collect(*(
        _cmp(f"Lip_{a}(S∘f∘h) <= ||S|| Lip_{a}(f) Lip(h)", lip_alpha_norm(g, a), "<=",
             scale * lip_alpha_norm(f, a)) for a in ("pi", "eps")))


# ---------------------------------------------------------------------------
# summing duality


def _gen_summing(rng, X, E) -> dict:
    return {"molecule": molecule_to_json(random_molecule(rng, X, E)),
            "operator": operator_to_json(random_operator(rng, X, E)),
            "p": rng.choice(["2", "inf", "3/2"])}


def _eval_summing(X, E, data, mutant) -> list:
    from .instances import pairing
    u = molecule_from_json(data["molecule"], X, E)
    f = operator_from_json(data["operator"], X, E)
    p = parse_exponent(data["p"])
    q = conjugate(p)
    dnorm = d_p_operator_norm(f, p)
    cert = p_summing_norm(f, q)
    upper = d_p_bounds(u, p, n_random=SUITE_RANDOM_WITNESSES).upper
    one = p_summing_norm(f, Fraction(1))
    two = p_summing_norm(f, Fraction(2))
    return _collect(
        _cmp("d_p operator norm = pi_p' value", dnorm, "==", cert.value),
        _cmp("|u(f)| <= pi_p'(f) d_p-upper(u)", abs(pairing(u, f)), "<=", dnorm * upper),
        _cmp("pi_inf = Lip", p_summing_norm(f, INF).value, "==", lip_norm(f)),
        _cmp("pi_1 >= Lip", one.value, ">=", lip_norm(f)),
        _cmp("pi_2 <= pi_1", two.lower, "<=", one.value),
    )


# ---------------------------------------------------------------------------
# hulls and the representation shadow


def _gen_hulls(rng, X, E) -> dict:
    return {"molecule": molecule_to_json(random_molecule(rng, X, E)),
            "operator": operator_to_json(random_operator(rng, X, E)),
            "p": rng.choice(["1", "2"]), "seed": rng.randrange(1 << 16)}


def _eval_hulls(X, E, data, mutant) -> list:
    u = molecule_from_json(data["molecule"], X, E)
    f = operator_from_json(data["operator"], X, E)
    out = []
    for alpha in ("pi", "eps"):
        th = theta_norm(u, alpha, check=False)
        out += _collect(_cmp(f"theta = {alpha}", th.value, "==", th.full))
    for ideal in ("lip", ("psumming", parse_exponent(data["p"]))):
        r = a_max_lower_bound(f, ideal, samples=2, seed=data["seed"])
        label = ideal_label(ideal)
        out += _collect(_cmp(f"A_max[{label}] attains the full norm", r.value, "==", r.full),
                        _cmp(f"A_max[{label}] terms monotone", r.monotone, "==", True))
    return out


def _gen_representation(rng, X, E) -> dict:
    return {"operator": operator_to_json(random_operator(rng, X, E))}


def _eval_representation(X, E, data, mutant) -> list:
    f = operator_from_json(data["operator"], X, E)
    # pi-ball extreme points are delta_(x,y) ⊠ v / d(x,y)
    best = Fraction(0)
    for x, y in X.pairs():
        for v in E.vertices:
            diff = tuple(a - b for a, b in zip(f.values[x], f.values[y]))
            best = max(best, sum(a * b for a, b in zip(diff, v)) / X.d[x][y])
    out = _collect(_cmp("Lip(f) = sup over pi-ball", lip_norm(f), "==", best))
    if f.is_zero():
        return out
    inj = injective_dual(f)
    verts = set(vertex_values(X))
    acc = [tuple(Fraction(0) for _ in range(E.dim)) for _ in range(X.n)]
    ok = True
    for c, g, phi in inj.decomposition:
        ok = ok and c >= 0 and g in verts and E.dual_norm(phi) <= 1
        acc = [tuple(a + c * gx * t for a, t in zip(row, phi)) for row, gx in zip(acc, g)]
    from .instances import pairing
    out += _collect(
        _cmp("eps-ball witness has eps <= 1", eps_norm(inj.molecule).value, "<=", 1),
        _cmp("Lip_eps(f) = u*(f)", pairing(inj.molecule, f), "==", inj.value),
        _cmp("decomposition reassembles f", tuple(acc) == f.values and ok, "==", True),
        _cmp("decomposition cost = Lip_eps(f)", sum((c for c, _, _ in inj.decomposition), Fraction(0)),
             "==", inj.value),
    )
    return out


LAWS: dict[str, Law] = {law.name: law for law in (
    Law("cross-norm", "alpha(delta ⊠ e) = d ||e|| for pi, eps, d_1", _gen_elementary, _eval_cross),
    Law("sandwich", "eps <= d_p, w_p <= pi", _gen_molecule, _eval_sandwich),
    Law("d1-pi", "d_1 = pi", _gen_d1, _eval_d1),
    Law("uniformity", "alpha((h⊠T)u) <= Lip(h)||T|| alpha(u)", _gen_uniform, _eval_uniform),
    Law("duality", "|u(f)| <= Lip_alpha(f) alpha(u), attained", _gen_pair, _eval_duality),
    Law("rank-one", "Lip_alpha(g·phi) = Lip(g)||phi||", _gen_rank_one, _eval_rank_one),
    Law("summing-duality", "Lip_{d_p} = pi_{p'}^L and the defining inequality", _gen_summing, _eval_summing),
    Law("ideal", "Lip_alpha(S∘f∘h) <= ||S|| Lip_alpha(f) Lip(h)", _gen_ideal, _eval_ideal),
    Law("hulls", "theta = alpha; A_max attains the full norm", _gen_hulls, _eval_hulls),
    Law("representation", "Lip_alpha(f) = sup over the alpha-ball", _gen_representation, _eval_representation),
)}


# ---------------------------------------------------------------------------
# running


@dataclass
class LawReport:
    seed: int
    trials: int
    max_points: int
    max_dim: int
    counts: dict = field(default_factory=dict)  # law -> {"pass": k, "fail": k}
    first_counterexample: dict | None = None
    mutant: str | None = None

    @property
    def ok(self) -> bool:
        return self.first_counterexample is None

    def to_json(self) -> dict:
        return {"seed": self.seed, "trials": self.trials, "max_points": self.max_points,
                "max_dim": self.max_dim, "mutant": self.mutant, "counts": self.counts,
                "all_pass": self.ok, "first_counterexample": self.first_counterexample}


def trial_instance(seed: int, trial: int, max_points: int, max_dim: int):
    rng = random.Random(f"{seed}/{trial}")
    n = rng.randint(2, max_points)
    dim = rng.randint(1, max_dim)
    return random_instance(rng.randrange(1 << 30), n, dim)


def evaluate_law(name: str, X, E, inputs: dict, mutant: str | None = None) -> list:
    """Failing checks for one law; exceptions become a failing check."""
    try:
        return LAWS[name].evaluate(X, E, inputs, mutant)
    except errors.LipTensorError as exc:
        return [{"check": "raised", "lhs": type(exc).__name__, "relation": "==", "rhs": str(exc)}]


def reverify(payload: dict) -> bool:
    """True when the counterexample in ``payload`` still fails."""
    X, E = instance_from_json(payload["instance"])
    return bool(evaluate_law(payload["law"], X, E, payload["inputs"], payload.get("mutant")))


def law_suite(seed: int, trials: int, max_points: int = 4, max_dim: int = 2,
              laws: list[str] | None = None, mutant: str | None = None) -> LawReport:
    names = list(LAWS) if laws is None else list(laws)
    for name in names:
        if name not in LAWS:
            raise errors.InputError(f"unknown law {name!r}; known: {', '.join(LAWS)}")
    if mutant is not None and mutant not in MUTANTS:
        raise errors.InputError(f"unknown mutant {mutant!r}; known: {', '.join(MUTANTS)}")
    if not 2 <= max_points or not 1 <= max_dim:
        raise errors.InputError("need max_points >= 2 and max_dim >= 1")
    report = LawReport(seed, trials, max_points, max_dim, {n: {"pass": 0, "fail": 0} for n in names},
                       mutant=mutant)
    for trial in range(trials):
        X, E = trial_instance(seed, trial, max_points, max_dim)
        for name in names:
            rng = random.Random(f"{seed}/{trial}/{name}")
            inputs = LAWS[name].generate(rng, X, E)
            failed = evaluate_law(name, X, E, inputs, mutant)
            if failed:
                report.counts[name]["fail"] += 1
                if report.first_counterexample is None:
                    report.first_counterexample = {
                        "law": name, "trial": trial, "mutant": mutant,
                        "instance": instance_to_json(X, E), "inputs": inputs, "violations": failed}
            else:
                report.counts[name]["pass"] += 1
    return report


__all__ = ["Law", "LAWS", "MUTANTS", "LawReport", "law_suite", "reverify", "evaluate_law",
           "trial_instance"]
