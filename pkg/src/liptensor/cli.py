"""Command-line front end.

Exit codes: 0 success, 1 law-suite counterexample or failed certificate,
2 malformed input.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import errors
from .crossnorms import d_p_bounds, eps_norm, pi_norm, w_p_upper
from .ideals import (extremal_functional, injective_dual, lip_norm_attained, p_summing_norm)
from .instances import pairing, random_instance, random_molecule, random_operator
from .laws import LAWS, MUTANTS, law_suite
from .lippolytope import enumerate_vertices
from .rationals import parse_exponent
from .serialize import (dump_json, extremal_certificate, instance_from_json, instance_to_json,
                        lipnorm_certificate, load_json, molecule_from_json, molecule_to_json,
                        norm_certificate, operator_from_json, operator_to_json, summing_certificate,
                        validate_certificate)


def _emit(args, data: dict, table: list[tuple[str, object]]) -> None:
    if getattr(args, "out", None):
        dump_json(data, args.out)
    if args.format == "json":
        sys.stdout.write(dump_json(data))
    else:
        width = max((len(k) for k, _ in table), default=0)
        for k, v in table:
            print(f"{k.ljust(width)}  {v}")


def _value_rows(data: dict) -> list[tuple[str, object]]:
    if "value" in data:
        return [("value", data["value"])]
    lo, hi = data["interval"]
    return [("interval", f"[{lo}, {hi}]")]


def _instance(path):
    return instance_from_json(load_json(path))


def cmd_validate(args) -> int:
    if args.certificate:
        fails = validate_certificate(load_json(args.certificate))
        data = {"certificate": str(args.certificate), "valid": not fails, "failures": fails}
        _emit(args, data, [("certificate", args.certificate), ("valid", not fails)]
              + [("failure", f) for f in fails])
        return 1 if fails else 0
    if not args.instance:
        raise errors.InputError("validate needs an instance file or --certificate")
    X, E = _instance(args.instance)
    rows = [("points", X.n), ("dim", E.dim), ("facets", len(E.facets)), ("vertices", len(E.vertices))]
    if args.molecule:
        molecule_from_json(load_json(args.molecule), X, E)
        rows.append(("molecule", "ok"))
    if args.operator:
        operator_from_json(load_json(args.operator), X, E)
        rows.append(("operator", "ok"))
    _emit(args, {"valid": True, **{k: v for k, v in rows}}, [("valid", True)] + rows)
    return 0


def cmd_vertices(args) -> int:
    X, _ = _instance(args.instance)
    vs = enumerate_vertices(X, args.cap)
    data = {"count": len(vs), "vertices": [[str(v) for v in g.values] for g in vs.vertices]}
    _emit(args, data, [("count", len(vs))] + [("vertex", " ".join(map(str, g.values))) for g in vs.vertices])
    return 0


def cmd_norm(args) -> int:
    X, E = _instance(args.instance)
    u = molecule_from_json(load_json(args.molecule), X, E)
    if args.alpha == "pi":
        res = pi_norm(u)
    elif args.alpha == "eps":
        res = eps_norm(u)
    else:
        if args.p is None:
            raise errors.InputError("--p is required for dp and wp")
        p = parse_exponent(args.p)
        res = (d_p_bounds(u, p, n_random=args.n_random, seed=args.seed) if args.alpha == "dp"
               else w_p_upper(u, p))
    cert = norm_certificate(u, args.alpha, res)
    _emit(args, cert, [("alpha", args.alpha)] + _value_rows(cert) + [("method", res.method)])
    return 0


def cmd_lipnorm(args) -> int:
    X, E = _instance(args.instance)
    f = operator_from_json(load_json(args.operator), X, E)
    if args.alpha == "pi":
        cert = lipnorm_certificate(f, "pi", pair=lip_norm_attained(f)[1])
    elif f.is_zero():
        cert = lipnorm_certificate(f, "pi")
        cert["alpha"] = "eps"
    else:
        cert = lipnorm_certificate(f, "eps", inj=injective_dual(f))
    _emit(args, cert, [("alpha", cert["alpha"]), ("value", cert["value"])])
    return 0


def cmd_summing(args) -> int:
    X, E = _instance(args.instance)
    f = operator_from_json(load_json(args.operator), X, E)
    cert = summing_certificate(f, p_summing_norm(f, parse_exponent(args.p)))
    _emit(args, cert, [("p", cert["p"])] + _value_rows(cert))
    return 0


def cmd_extremal(args) -> int:
    X, E = _instance(args.instance)
    u = molecule_from_json(load_json(args.molecule), X, E)
    f = extremal_functional(u, args.alpha)
    value = pairing(u, f)
    cert = extremal_certificate(u, args.alpha, f, value)
    _emit(args, cert, [("alpha", args.alpha), ("value", value)]
          + [(f"f({x})", " ".join(map(str, f.values[x]))) for x in range(1, X.n)])
    return 0


def cmd_pairing(args) -> int:
    X, E = _instance(args.instance)
    u = molecule_from_json(load_json(args.molecule), X, E)
    f = operator_from_json(load_json(args.operator), X, E)
    value = pairing(u, f)
    _emit(args, {"value": str(value)}, [("value", value)])
    return 0


def cmd_law_suite(args) -> int:
    laws = [s.strip() for s in args.laws.split(",") if s.strip()] if args.laws else None
    report = law_suite(args.seed, args.trials, args.max_points, args.max_dim, laws, args.mutant)
    data = report.to_json()
    rows = [(name, f"{c['pass']} pass, {c['fail']} fail") for name, c in report.counts.items()]
    rows.append(("result", "all pass" if report.ok else
                 f"counterexample in law {report.first_counterexample['law']} "
                 f"(trial {report.first_counterexample['trial']})"))
    _emit(args, data, rows)
    return 0 if report.ok else 1


def cmd_gen(args) -> int:
    if args.what == "instance":
        if args.points is None or args.dim is None:
            raise errors.InputError("gen instance needs --points and --dim")
        X, E = random_instance(args.seed, args.points, args.dim, args.norm)
        data = instance_to_json(X, E)
    else:
        if not args.instance:
            raise errors.InputError(f"gen {args.what} needs --instance")
        X, E = _instance(args.instance)
        rng = random.Random(args.seed)
        data = (molecule_to_json(random_molecule(rng, X, E)) if args.what == "molecule"
                else operator_to_json(random_operator(rng, X, E)))
    if args.out:
        dump_json(data, args.out)
    sys.stdout.write(dump_json(data))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="liptensor",
                                 description="Exact Lipschitz tensor norms and operator-ideal norms.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--out", type=Path, help="also write the result to this file")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check instance, molecule, operator or certificate files")
    p.add_argument("instance", nargs="?")
    p.add_argument("--molecule")
    p.add_argument("--operator")
    p.add_argument("--certificate")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("vertices", parents=[common], help="vertices of the Lipschitz unit ball")
    p.add_argument("instance")
    p.add_argument("--cap", type=int, default=7)
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("norm", parents=[common], help="cross-norm of a molecule with certificate")
    p.add_argument("instance")
    p.add_argument("molecule")
    p.add_argument("--alpha", choices=("pi", "eps", "dp", "wp"), required=True)
    p.add_argument("--p")
    p.add_argument("--n-random", type=int, default=100, help="random witnesses for the d_p lower bound")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("lipnorm", parents=[common], help="Lip_alpha norm of an operator")
    p.add_argument("instance")
    p.add_argument("operator")
    p.add_argument("--alpha", choices=("pi", "eps"), default="pi")
    p.set_defaults(func=cmd_lipnorm)

    p = sub.add_parser("summing", parents=[common], help="Lipschitz p-summing norm of an operator")
    p.add_argument("instance")
    p.add_argument("operator")
    p.add_argument("--p", required=True)
    p.set_defaults(func=cmd_summing)

    p = sub.add_parser("extremal", parents=[common], help="norming operator for a molecule")
    p.add_argument("instance")
    p.add_argument("molecule")
    p.add_argument("--alpha", choices=("pi", "eps"), default="pi")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("pairing", parents=[common], help="evaluate u(f)")
    p.add_argument("instance")
    p.add_argument("molecule")
    p.add_argument("operator")
    p.set_defaults(func=cmd_pairing)

    p = sub.add_parser("law-suite", parents=[common], help="randomized law checks")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--max-points", type=int, default=4)
    p.add_argument("--max-dim", type=int, default=2)
    p.add_argument("--laws", help=f"comma-separated subset of: {', '.join(LAWS)}")
    p.add_argument("--mutant", choices=MUTANTS, help="inject a known bug to test the harness")
    p.set_defaults(func=cmd_law_suite)

    p = sub.add_parser("gen", help="generate random instances, molecules or operators")
    p.add_argument("what", choices=("instance", "molecule", "operator"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--norm", choices=("l1", "linf", "random", "mixed"), default="mixed")
    p.add_argument("--instance")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except errors.TriangleViolation as exc:
        i, j, k = exc.witness
        print(f"error: {exc} (witness triple {i},{j},{k})", file=sys.stderr)
        return 2
    except (errors.InputError, errors.CapExceeded) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
