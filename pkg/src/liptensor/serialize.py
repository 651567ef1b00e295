"""JSON forms of instances, molecules, operators and certificates.

Rationals are written as exact strings (``"3/4"``) and read from strings or
integers. Every certificate embeds its instance and input, so
``validate_certificate`` can re-check it from the file alone.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import errors
from .crossnorms import NormResult, dp_representation_cost, eps_norm, pi_norm
from .ideals import (InjectiveDualCertificate, PSummingCertificate, lip_alpha_norm, lip_norm,
                     p_summing_norm)
from .instances import (FiniteMetricSpace, FormalRepresentation, LipFunctional, LipOperator,
                        Molecule, PolyhedralSpace, build_space, molecule_from_representation,
                        pairing, zero_molecule)
from .lippolytope import lip_constant, vertex_values
from .lp import lp_check_certificate, problem_from_json, problem_to_json, solution_from_json
from .rationals import (INF, conjugate, fmt_exponent, fmt_vec, is_integral, parse_exponent,
                        pnorm_bounds, to_rat, to_vec, vadd, vscale, vsub, zeros)

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# parsing helpers


def _at(path: str, fn, *args):
    try:
        return fn(*args)
    except errors.LipTensorError as exc:
        raise type(exc)(f"{path}: {exc}") if type(exc) is not errors.TriangleViolation else exc
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise errors.InputError(f"{path}: {exc.__class__.__name__}: {exc}") from exc


def _rat(path: str, v) -> Fraction:
    return _at(path, to_rat, v)


def _vec(path: str, v) -> tuple:
    if not isinstance(v, list):
        raise errors.InputError(f"{path}: expected a list, got {type(v).__name__}")
    return tuple(_rat(f"{path}[{i}]", x) for i, x in enumerate(v))


def _get(data: dict, key: str, path: str):
    if not isinstance(data, dict):
        raise errors.InputError(f"{path}: expected an object, got {type(data).__name__}")
    if key not in data:
        raise errors.InputError(f"{path}: missing field {key!r}")
    return data[key]


def load_json(path: str | Path) -> Any:
    """Read a JSON file, reporting syntax errors with line and column."""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise errors.InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def dump_json(data: Any, path: str | Path | None = None) -> str:
    text = json.dumps(data, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


# ---------------------------------------------------------------------------
# instances


def space_to_json(E: PolyhedralSpace) -> dict:
    if E.name in ("l1", "linf"):
        return {"dim": E.dim, "norm": E.name}
    return {"dim": E.dim, "norm": {"facets": [fmt_vec(f) for f in E.facets]}}


def space_from_json(data: dict, path: str = "space") -> PolyhedralSpace:
    dim = _get(data, "dim", path)
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise errors.InputError(f"{path}.dim: expected an integer")
    norm = _get(data, "norm", path)
    if isinstance(norm, str):
        return _at(path + ".norm", build_space, dim, norm)
    facets = _get(norm, "facets", path + ".norm")
    rows = [_vec(f"{path}.norm.facets[{i}]", r) for i, r in enumerate(facets)]
    return _at(path + ".norm", build_space, dim, rows)


def metric_to_json(X: FiniteMetricSpace) -> dict:
    return {"labels": list(X.labels), "d": [fmt_vec(r) for r in X.d]}


def metric_from_json(data: dict, path: str = "metric") -> FiniteMetricSpace:
    d = _get(data, "d", path)
    if not isinstance(d, list):
        raise errors.InputError(f"{path}.d: expected a list of rows")
    rows = tuple(_vec(f"{path}.d[{i}]", r) for i, r in enumerate(d))
    labels = tuple(data.get("labels") or ())
    return _at(path, FiniteMetricSpace, rows, labels)


def instance_to_json(X: FiniteMetricSpace, E: PolyhedralSpace) -> dict:
    return {"metric": metric_to_json(X), "space": space_to_json(E)}


def instance_from_json(data: dict) -> tuple[FiniteMetricSpace, PolyhedralSpace]:
    X = metric_from_json(_get(data, "metric", "instance"))
    E = space_from_json(_get(data, "space", "instance"))
    return X, E


# ---------------------------------------------------------------------------
# molecules, representations, operators


def _point(path: str, v, n: int) -> int:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise errors.InputError(f"{path}: expected a point index")
    try:
        i = int(v)
    except ValueError as exc:
        raise errors.InputError(f"{path}: not a point index: {v!r}") from exc
    if not 0 <= i < n:
        raise errors.IndexOutOfRange(f"{path}: point index {i} not in 0..{n - 1}")
    return i


def representation_to_json(rep: FormalRepresentation) -> dict:
    return {"terms": [{"x": x, "y": y, "e": fmt_vec(e)} for x, y, e in rep.terms]}


def representation_from_json(data: dict, X, E, path: str = "representation") -> FormalRepresentation:
    terms = []
    for k, t in enumerate(_get(data, "terms", path)):
        p = f"{path}.terms[{k}]"
        terms.append((_point(p + ".x", _get(t, "x", p), X.n), _point(p + ".y", _get(t, "y", p), X.n),
                      _vec(p + ".e", _get(t, "e", p))))
    return _at(path, FormalRepresentation, X, E, tuple(terms))


def molecule_to_json(u: Molecule) -> dict:
    return {"coeffs": {str(x): fmt_vec(u.coeffs[x - 1]) for x in range(1, u.X.n)}}


def _point_table(data, X, path: str, dim: int, allow_base: bool) -> list:
    rows = [zeros(dim) for _ in range(X.n)]
    if isinstance(data, list):
        if len(data) != X.n:
            raise errors.DimensionMismatch(f"{path}: {len(data)} rows for {X.n} points")
        items = enumerate(data)
    elif isinstance(data, dict):
        items = ((_point(f"{path}[{k!r}]", k, X.n), v) for k, v in data.items())
    else:
        raise errors.InputError(f"{path}: expected an object keyed by point index or a list")
    for x, v in items:
        vec = _vec(f"{path}[{x}]", v)
        if len(vec) != dim:
            raise errors.DimensionMismatch(f"{path}[{x}]: length {len(vec)}, expected {dim}")
        if x == 0 and not allow_base and any(vec):
            raise errors.BasePointNotFixed(f"{path}[0]: the base point entry must be zero")
        rows[x] = vec
    return rows


def molecule_from_json(data: dict, X, E, path: str = "molecule") -> Molecule:
    """``{"terms": [...]}`` or ``{"coeffs": {"1": [...], ...}}``."""
    if isinstance(data, dict) and "terms" in data:
        return molecule_from_representation(representation_from_json(data, X, E, path))
    coeffs = _get(data, "coeffs", path)
    rows = _point_table(coeffs, X, path + ".coeffs", E.dim, allow_base=True)
    if isinstance(coeffs, dict) and "0" in coeffs:
        total = rows[0]
        for r in rows[1:]:
            total = vadd(total, r)
        if any(total):
            raise errors.InputError(f"{path}.coeffs: entries must sum to zero when m(0) is given")
    return Molecule(X, E, tuple(rows[1:]))


def operator_to_json(f: LipOperator) -> dict:
    return {"values": {str(x): fmt_vec(f.values[x]) for x in range(1, f.X.n)}}


def operator_from_json(data: dict, X, E, path: str = "operator") -> LipOperator:
    rows = _point_table(_get(data, "values", path), X, path + ".values", E.dim, allow_base=False)
    return LipOperator(X, E, tuple(rows))


def functional_to_json(g: LipFunctional) -> dict:
    return {"values": fmt_vec(g.values)}


def functional_from_json(data: dict, X, path: str = "functional") -> LipFunctional:
    vals = _vec(path + ".values", _get(data, "values", path))
    return _at(path, LipFunctional, X, vals)


def lp_certificates_to_json(pairs) -> list:
    return [{"problem": problem_to_json(p), "solution": s.to_json()} for p, s in pairs]


# ---------------------------------------------------------------------------
# certificates


def _header(kind: str, X, E) -> dict:
    return {"schema": SCHEMA_VERSION, "kind": kind, "instance": instance_to_json(X, E)}


def _value_fields(lower: Fraction, upper: Fraction) -> dict:
    if lower == upper:
        return {"value": str(lower)}
    return {"interval": [str(lower), str(upper)]}


def norm_certificate(u: Molecule, alpha: str, result: NormResult) -> dict:
    X, E = u.X, u.E
    out = _header("norm", X, E)
    out.update({"alpha": alpha, "molecule": molecule_to_json(u), "method": result.method})
    if result.p is not None:
        out["p"] = fmt_exponent(result.p)
    out.update(_value_fields(result.lower, result.upper))
    primal = None
    if result.primal_witness is not None:
        primal = representation_to_json(result.primal_witness)
        primal["cost"] = str(result.primal_cost)
        if alpha == "dp":
            scal = result.details.get("scalars", "holder")
            primal["scalars"] = scal
        if alpha == "wp" and "domination" in result.details:
            w = result.details["domination"]
            primal["vectors"] = result.details["vectors"]
            primal["domination"] = {
                "matrix": [fmt_vec(r) for r in w.matrix],
                "lam": [[str(c), a, b] for c, a, b in w.lam],
                "mu": [[str(c), a, b] for c, a, b in w.mu],
            }
    out["primal_witness"] = primal
    dual = None
    if result.dual_witness is not None:
        dual = operator_to_json(result.dual_witness)
        dual["bound"] = str(result.dual_bound)
        if "g" in result.details:
            dual["g"] = fmt_vec(result.details["g"])
            dual["phi"] = fmt_vec(result.details["phi"])
    out["dual_witness"] = dual
    out["lp_certificates"] = lp_certificates_to_json(result.lp_certificates)
    return out


def lipnorm_certificate(f: LipOperator, alpha: str, pair=None,
                        inj: InjectiveDualCertificate | None = None) -> dict:
    out = _header("lipnorm", f.X, f.E)
    out.update({"alpha": alpha, "operator": operator_to_json(f)})
    if alpha == "pi":
        value = lip_norm(f)
        out["value"] = str(value)
        out["primal_witness"] = None if pair is None else {"pair": list(pair)}
        out["dual_witness"] = None
        out["lp_certificates"] = []
    else:
        out["value"] = str(inj.value)
        out["primal_witness"] = {"decomposition": [
            {"c": str(c), "g": fmt_vec(g), "phi": fmt_vec(phi)} for c, g, phi in inj.decomposition]}
        out["dual_witness"] = {"molecule": molecule_to_json(inj.molecule)}
        out["lp_certificates"] = lp_certificates_to_json([(inj.problem, inj.solution)])
    return out


def summing_certificate(f: LipOperator, cert: PSummingCertificate) -> dict:
    out = _header("summing", f.X, f.E)
    out.update({"p": fmt_exponent(cert.p), "operator": operator_to_json(f)})
    out.update(_value_fields(cert.lower, cert.upper))
    if cert.power is not None:
        out["power"] = str(cert.power)
    out["primal_witness"] = {"pairs": [list(pq) for pq in cert.pairs], "weights": fmt_vec(cert.weights)}
    out["dual_witness"] = {"domination": [{"c": str(c), "g": fmt_vec(g)} for c, g in cert.domination]}
    out["lp_certificates"] = lp_certificates_to_json(cert.lp)
    return out


def extremal_certificate(u: Molecule, alpha: str, f: LipOperator, value: Fraction) -> dict:
    out = _header("extremal", u.X, u.E)
    out.update({"alpha": alpha, "molecule": molecule_to_json(u), "value": str(value),
                "primal_witness": None, "dual_witness": operator_to_json(f), "lp_certificates": []})
    return out


# ---------------------------------------------------------------------------
# re-validation


def _bounds(data: dict) -> tuple[Fraction, Fraction]:
    if "value" in data:
        v = _rat("value", data["value"])
        return v, v
    lo, hi = _get(data, "interval", "certificate")
    return _rat("interval[0]", lo), _rat("interval[1]", hi)


def _check_lps(data: dict, fails: list, expect: Fraction | None = None) -> None:
    for k, item in enumerate(data.get("lp_certificates") or []):
        prob = problem_from_json(item["problem"])
        sol = solution_from_json(item["solution"])
        if not lp_check_certificate(prob, sol):
            fails.append(f"lp_certificates[{k}] does not re-check")
        elif expect is not None and sol.objective != expect:
            fails.append(f"lp_certificates[{k}] objective {sol.objective} != {expect}")


def _check_norm(data: dict, X, E, fails: list) -> None:
    alpha = _get(data, "alpha", "certificate")
    u = molecule_from_json(_get(data, "molecule", "certificate"), X, E)
    lower, upper = _bounds(data)
    primal, dual = data.get("primal_witness"), data.get("dual_witness")
    if u.is_zero():
        if lower != 0 or upper != 0:
            fails.append("zero molecule must have norm 0")
        return
    p = parse_exponent(data["p"]) if "p" in data else None
    rep = None
    if primal is not None:
        rep = representation_from_json(primal, X, E, "primal_witness")
        if molecule_from_representation(rep) != u:
            fails.append("primal_witness does not represent the molecule")
    f = None
    if dual is not None:
        f = operator_from_json(dual, X, E, "dual_witness")
        bound = _rat("dual_witness.bound", dual.get("bound", "1"))
    if alpha == "pi":
        if rep is None or rep.projective_cost() != upper:
            fails.append("projective cost of primal_witness != value")
        if f is None or lip_norm(f) > 1 or pairing(u, f) != lower:
            fails.append("dual_witness is not a norm-one operator attaining the value")
        _check_lps(data, fails, upper)
        if len(data.get("lp_certificates") or []) < 2:
            fails.append("projective certificate needs primal and dual LP certificates")
    elif alpha == "eps":
        g = functional_from_json({"values": dual.get("g")}, X, "dual_witness.g") if dual and "g" in dual else None
        phi = _vec("dual_witness.phi", dual["phi"]) if g is not None else None
        if g is None or lip_constant(g) > 1 or E.dual_norm(phi) > 1:
            fails.append("injective witness pair is not in the product of unit balls")
        elif f is None or f.values != tuple(vscale(gx, phi) for gx in g.values) or pairing(u, f) != lower:
            fails.append("injective dual_witness is not g·phi attaining the value")
        if eps_norm(u).value != upper:
            fails.append("vertex enumeration does not reproduce the value")
    elif alpha == "dp":
        q = conjugate(p)
        scal = primal.get("scalars", "holder") if primal else None
        if rep is None:
            fails.append("missing primal_witness")
        elif scal == "holder":
            if rep.projective_cost() != upper:
                fails.append("Hölder bound of primal_witness != upper")
        else:
            lams = [_rat("primal_witness.scalars", s) for s in scal]
            if dp_representation_cost(rep, lams, p) != upper:
                fails.append("scored cost of primal_witness != upper")
        if f is None or p_summing_norm(f, q).upper > bound or pairing(u, f) != lower * bound:
            fails.append("dual_witness does not certify the lower end")
    elif alpha == "wp":
        from .crossnorms import DominationWitness
        q = conjugate(p)
        dom = primal["domination"]
        w = DominationWitness(tuple(_vec("matrix", r) for r in dom["matrix"]), q,
                              tuple((to_rat(c), int(a), int(b)) for c, a, b in dom["lam"]),
                              tuple((to_rat(c), int(a), int(b)) for c, a, b in dom["mu"]))
        es = [to_vec(e) for e in primal["vectors"]]
        if not w.verify(X):
            fails.append("domination witness fails")
        recon = FormalRepresentation(X, E, tuple((x, y, vscale(lam, e)) for (lam, x, y), e in zip(w.lam, es)))
        if molecule_from_representation(recon) != u:
            fails.append("scaled representation does not reproduce the molecule")
        score = (pnorm_bounds([E.norm(e) for e in es], p)[1]
                 * pnorm_bounds([mu * X.d[x][y] for mu, x, y in w.mu], q)[1])
        if score != upper:
            fails.append(f"domination score {score} != upper {upper}")
        if eps_norm(u).value != lower:
            fails.append("lower end is not the injective norm")
    else:
        fails.append(f"unknown alpha {alpha!r}")
    if lower > upper:
        fails.append("lower > upper")


def _check_lipnorm(data: dict, X, E, fails: list) -> None:
    alpha = _get(data, "alpha", "certificate")
    f = operator_from_json(_get(data, "operator", "certificate"), X, E)
    value = _rat("value", data["value"])
    if alpha == "pi":
        if lip_norm(f) != value:
            fails.append("Lipschitz norm does not match")
        pair = (data.get("primal_witness") or {}).get("pair")
        if pair is not None and not f.is_zero():
            i, j = pair
            if E.dual_norm(vsub(f.values[i], f.values[j])) != value * X.d[i][j]:
                fails.append("attaining pair does not attain")
        return
    verts = set(vertex_values(X))
    total, acc = Fraction(0), [zeros(E.dim) for _ in range(X.n)]
    for t in data["primal_witness"]["decomposition"]:
        c, g, phi = to_rat(t["c"]), to_vec(t["g"]), to_vec(t["phi"])
        if c < 0 or g not in verts or E.dual_norm(phi) > 1:
            fails.append("decomposition term outside the unit balls")
        total += c
        acc = [vadd(a, vscale(c * gx, phi)) for a, gx in zip(acc, g)]
    if tuple(acc) != f.values or total != value:
        fails.append("decomposition does not sum to the operator at the stated cost")
    u = molecule_from_json(data["dual_witness"]["molecule"], X, E, "dual_witness.molecule")
    if eps_norm(u).value > 1 or pairing(u, f) != value:
        fails.append("molecule witness does not attain the value in the injective unit ball")


def _check_summing(data: dict, X, E, fails: list) -> None:
    f = operator_from_json(_get(data, "operator", "certificate"), X, E)
    p = parse_exponent(data["p"])
    lower, upper = _bounds(data)
    if p == INF or not is_integral(p):
        cert = p_summing_norm(f, p)
        if (cert.lower, cert.upper) != (lower, upper):
            fails.append("recomputed enclosure differs")
        return
    k = int(p)
    power = _rat("power", data["power"])
    pairs = [tuple(pq) for pq in data["primal_witness"]["pairs"]]
    w = to_vec(data["primal_witness"]["weights"])
    a = [E.dual_norm(vsub(f.values[i], f.values[j])) ** k for i, j in pairs]
    if any(x < 0 for x in w) or sum(wi * ai for wi, ai in zip(w, a)) != power:
        fails.append("weighted family does not reach the stated power")
    for g in vertex_values(X):
        if sum(wi * abs(g[i] - g[j]) ** k for wi, (i, j) in zip(w, pairs)) > 1:
            fails.append("weighted family violates the unit-ball constraint")
            break
    dom = [(to_rat(t["c"]), to_vec(t["g"])) for t in data["dual_witness"]["domination"]]
    verts = set(vertex_values(X))
    if any(c < 0 or g not in verts for c, g in dom) or sum(c for c, _ in dom) != power:
        fails.append("domination multipliers invalid")
    for (i, j), ai in zip(pairs, a):
        if sum(c * abs(g[i] - g[j]) ** k for c, g in dom) < ai:
            fails.append("domination inequality fails")
            break
    if not (lower ** k <= power <= upper ** k):
        fails.append("value enclosure does not contain the root of the power")


def _check_extremal(data: dict, X, E, fails: list) -> None:
    alpha = _get(data, "alpha", "certificate")
    u = molecule_from_json(_get(data, "molecule", "certificate"), X, E)
    f = operator_from_json(data["dual_witness"], X, E, "dual_witness")
    value = _rat("value", data["value"])
    norm = pi_norm(u).value if alpha == "pi" else eps_norm(u).value
    if norm != value or pairing(u, f) != value:
        fails.append("operator does not attain the norm")
    if lip_alpha_norm(f, alpha) != 1:
        fails.append("operator does not have dual norm one")


def validate_certificate(data: dict) -> list[str]:
    """Re-check a certificate exactly; returns the list of failures."""
    X, E = instance_from_json(_get(data, "instance", "certificate"))
    kind = _get(data, "kind", "certificate")
    fails: list[str] = []
    check = {"norm": _check_norm, "lipnorm": _check_lipnorm, "summing": _check_summing,
             "extremal": _check_extremal}.get(kind)
    if check is None:
        raise errors.InputError(f"certificate.kind: unknown kind {kind!r}")
    check(data, X, E, fails)
    return fails


__all__ = [
    "load_json", "dump_json", "instance_to_json", "instance_from_json", "space_to_json",
    "space_from_json", "metric_to_json", "metric_from_json", "molecule_to_json", "molecule_from_json",
    "representation_to_json", "representation_from_json", "operator_to_json", "operator_from_json",
    "functional_to_json", "functional_from_json", "norm_certificate", "lipnorm_certificate",
    "summing_certificate", "extremal_certificate", "validate_certificate", "zero_molecule",
]
