"""Command line front end: ``kaplansky {semigroup,embed,tower,fan,verify}``.

Reports are JSON with sorted keys and exact coefficients as strings.
Exit codes: 0 success, 1 verification failure, 2 input error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from types import SimpleNamespace

from .embed import (
    PresentationDefect,
    TorificPresentation,
    kaplansky_embed_fg,
    torific_constraints,
    verify_embedding,
)
from .examples import EXAMPLES, fan_report, jacobi_perron_report, pi_context, semigroup_report
from .fields import CoeffField, ExtensionRequired
from .hahn import CutoffError, HahnRing
from .literals import InputError, parse_element, parse_int_list, parse_series
from .ordered_group import DEFAULT_CEILING, GroupContext, PrecisionCeilingError
from .semigroup import Semigroup, branch_semigroup_from_char_exponents, branch_values_oracle, minimal_generators
from .toric import (
    Cone,
    Fan,
    FanDefect,
    ResourceCapExceeded,
    WeightVector,
    audit_fan,
    regular_subdivision,
)
from .tower import approximation_tower

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class AuditFailure(InputError):
    def __init__(self, message: str, audit: dict):
        super().__init__(message)
        self.audit = audit


def dumps(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _load_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    if not text.strip():
        raise InputError(f"{path} is empty")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from exc


def _opts(args) -> dict:
    p = args.p
    if args.field and args.field not in ("Q", "QQ"):
        fp = CoeffField.parse(args.field).p
        if p is not None and p != fp:
            raise InputError(f"--field {args.field} contradicts --p {p}")
        p = fp
    return {
        "cutoff": args.cutoff,
        "p": p,
        "precision_ceiling": args.precision_ceiling,
        "max_stellar_steps": args.max_stellar_steps,
        "target": getattr(args, "target", None),
        "levels": getattr(args, "levels", None),
    }


def _run_example(cmd: str, args) -> dict:
    table = EXAMPLES[cmd]
    if args.example not in table:
        raise InputError(f"unknown {cmd} example {args.example!r}; choose from {', '.join(table)}")
    return table[args.example](_opts(args))


# -- subcommands ---------------------------------------------------------------


def cmd_semigroup(args) -> dict:
    if args.example:
        return _run_example("semigroup", args)
    if args.generators:
        gens = parse_int_list(args.generators)
        if not gens or any(g <= 0 for g in gens):
            raise InputError("generators must be positive integers")
        return semigroup_report(minimal_generators(Semigroup.numerical(gens).generators))
    if args.char_exponents:
        return semigroup_report(branch_semigroup_from_char_exponents(parse_int_list(args.char_exponents)))
    if args.input:
        data = _load_json(args.input)
        ctx = GroupContext.from_json(data.get("group", {"weights": ["1"]}), args.precision_ceiling)
        if "generators" in data:
            gens = [parse_element(g, ctx) for g in data["generators"]]
            return semigroup_report(minimal_generators(gens))
        field_ = CoeffField.parse(args.field or data.get("field"))
        ring = HahnRing(ctx, field_)
        x, y = parse_series(data["x"], ring), parse_series(data["y"], ring)
        values = branch_values_oracle(x, y, int(data.get("degree", 8)), data.get("value_bound", 30))
        rep = semigroup_report(minimal_generators(values))
        rep["oracle"] = {"degree_bound": int(data.get("degree", 8)), "value_bound": str(data.get("value_bound", 30))}
        return rep
    raise InputError("semigroup needs --generators, --char-exponents, --example or an input file")


def _check_fan(fan: Fan, constraints) -> None:
    audit = audit_fan(fan, constraints)
    if not audit.ok:
        raise AuditFailure("fan file fails the audit", audit.to_json())


def _load_fan(path: str) -> Fan:
    data = _load_json(path)
    cones = data.get("cones") if isinstance(data, dict) else data
    if not isinstance(cones, list) or not cones:
        raise InputError(f"{path}: expected a non-empty list of cones")
    try:
        return Fan.from_json(cones)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def cmd_embed(args) -> dict:
    if args.example:
        return _run_example("embed", args)
    if not args.input:
        raise InputError("embed needs --example or a presentation file")
    data = _load_json(args.input)
    if args.field:
        data["field"] = args.field
    try:
        P = TorificPresentation.from_json(data, args.precision_ceiling)
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad presentation: missing or malformed {exc}") from exc
    if args.cutoff is None:
        raise InputError("embed needs --cutoff for file inputs")
    cutoff = parse_element(args.cutoff, P.group)
    if args.fan:
        fan = _load_fan(args.fan)
        if fan.b != P.b:
            raise InputError(f"fan has dimension {fan.b}, presentation has {P.b} generators")
        audit = audit_fan(fan, torific_constraints(P))
        if not audit.checks.get("regular") or not audit.checks.get("in_quadrant"):
            raise AuditFailure("fan file fails the audit", audit.to_json())
    elif args.auto_subdivide:
        fan = regular_subdivision(P.b, torific_constraints(P), args.max_stellar_steps)
    else:
        raise InputError("embed needs --fan FILE or --auto-subdivide")
    E = kaplansky_embed_fg(P, fan, cutoff, args.max_stellar_steps)
    ver = verify_embedding(P, E)
    return {"presentation": P.to_json(), "embedding": E.to_json(), "verification": ver, "ok": ver["ok"]}


def cmd_tower(args) -> dict:
    if args.example:
        return _run_example("tower", args)
    if args.terms:
        terms = [(1, Fraction(e)) for e in args.terms.replace(",", " ").split()]
        levels = args.levels
    elif args.input:
        data = _load_json(args.input)
        terms = data.get("terms")
        levels = args.levels or data.get("levels")
        args.cutoff = args.cutoff or data.get("cutoff")
        args.target = args.target or data.get("target")
    else:
        raise InputError("tower needs --terms, --example or an input file")
    try:
        rep = approximation_tower(terms, levels=levels, cutoff=Fraction(args.cutoff or 10),
                                  target=args.target)
    except (TypeError, ZeroDivisionError) as exc:
        raise InputError(f"bad Puiseux data: {exc}") from exc
    return rep.to_json()


def _weight_vector(text: str, ceiling: int) -> WeightVector:
    vals = json.loads(text) if text.strip().startswith("[") else text.split(",")
    if any("pi" in str(v) for v in vals):
        ctx = pi_context(ceiling)
    else:
        ctx = GroupContext.rational(1)
    return WeightVector([parse_element(str(v), ctx) for v in vals])


def cmd_fan(args) -> dict:
    if args.example:
        return _run_example("fan", args)
    if args.jacobi_perron:
        if not args.w:
            raise InputError("--jacobi-perron needs --w")
        w = _weight_vector(args.w, args.precision_ceiling)
        sigma0 = None
        if args.sigma0:
            sigma0 = Cone(tuple(tuple(r) for r in json.loads(args.sigma0)))
        return jacobi_perron_report(_opts(args), w.entries, sigma0, args.steps)
    if args.input:
        data = _load_json(args.input)
        fan = Fan.from_json(data["cones"] if isinstance(data, dict) else data)
        cons = [Cone(tuple(map(tuple, c))) for c in data.get("rays", [])] if isinstance(data, dict) else []
        cons += [tuple(h) for h in data.get("hyperplanes", [])] if isinstance(data, dict) else []
        _check_fan(fan, cons)
        return fan_report(fan, cons)
    if args.b is None:
        raise InputError("fan needs --b, --example, --jacobi-perron or an input file")
    cons = [Cone((tuple(parse_int_list(r)),)) for r in args.ray or []]
    cons += [tuple(parse_int_list(h)) for h in args.hyperplane or []]
    for c in cons:
        v = c.rays[0] if isinstance(c, Cone) else c
        if len(v) != args.b:
            raise InputError(f"constraint {list(v)} does not have {args.b} entries")
    fan = regular_subdivision(args.b, cons, args.max_stellar_steps)
    return fan_report(fan, cons)


def cmd_verify(args) -> dict:
    if args.example:
        return _run_example("verify", args)
    if not args.input:
        raise InputError("verify needs --example or an input file")
    data = _load_json(args.input)
    try:
        P = TorificPresentation.from_json(data["presentation"], args.precision_ceiling)
        ring = HahnRing(P.group, P.field)
        xi = [parse_series(s, ring) for s in data["xi"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad verification input: {exc}") from exc
    if len(xi) != P.b:
        raise InputError(f"expected {P.b} series, got {len(xi)}")
    cutoff = parse_element(args.cutoff, P.group) if args.cutoff else min(s.cutoff for s in xi)
    xi = [s.truncate(cutoff) for s in xi]
    if any(not cutoff <= s.cutoff for s in xi):
        raise InputError("cutoff exceeds the precision of the given series")
    rhos = [s.initial_form()[0] if not s.is_zero() else P.field.zero for s in xi]
    E = SimpleNamespace(cutoff=cutoff, rho=rhos, ring=ring, xi=xi)
    ver = verify_embedding(P, E)
    ver["cutoff"] = str(cutoff)
    ver["rho"] = [P.field.to_str(c) for c in rhos]
    return ver


COMMANDS = {
    "semigroup": cmd_semigroup,
    "embed": cmd_embed,
    "tower": cmd_tower,
    "fan": cmd_fan,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", nargs="?", help="JSON input file")
    common.add_argument("--example", help="run a builtin example")
    common.add_argument("--cutoff", help="truncation point, e.g. 64, 6pi, 10+3pi or [10,3]")
    common.add_argument("--field", help="coefficient field: Q or F_p")
    common.add_argument("--p", type=int, help="characteristic for finite-field examples")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--max-stellar-steps", type=int, default=10_000)
    common.add_argument("--precision-ceiling", type=int, default=DEFAULT_CEILING,
                        help="bits of pi precision before giving up on a sign")

    parser = argparse.ArgumentParser(prog="kaplansky", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("semigroup", parents=[common], help="value semigroups and relation lattices")
    p.add_argument("--generators", help="comma separated positive integers")
    p.add_argument("--char-exponents", help="characteristic exponents of a plane branch")

    p = sub.add_parser("embed", parents=[common], help="embedded Kaplansky embeddings")
    p.add_argument("--fan", help="JSON fan file (list of cones)")
    p.add_argument("--auto-subdivide", action="store_true", help="build a compatible regular fan")

    p = sub.add_parser("tower", parents=[common], help="approximation towers of plane branches")
    p.add_argument("--terms", help="exponents of a Puiseux series with unit coefficients")
    p.add_argument("--levels", type=int)
    p.add_argument("--target", help="value the last gauge must pass")

    p = sub.add_parser("fan", parents=[common], help="regular subdivisions and Jacobi-Perron cones")
    p.add_argument("--b", type=int, help="ambient dimension")
    p.add_argument("--ray", action="append", help="ray that must appear (repeatable)")
    p.add_argument("--hyperplane", action="append", help="normal no cone may straddle (repeatable)")
    p.add_argument("--jacobi-perron", action="store_true", help="nested cones around --w")
    p.add_argument("--w", help="weight vector, e.g. 1,pi")
    p.add_argument("--sigma0", help="starting cone as a JSON list of rays")
    p.add_argument("--steps", type=int)

    sub.add_parser("verify", parents=[common], help="check series against a presentation")
    return parser


def _error(kind: str, exc: Exception, extra: dict | None = None) -> dict:
    out = {"error": kind, "message": str(exc)}
    out.update(extra or {})
    return out


def run(argv: list[str] | None = None) -> tuple[int, str, str]:
    """Return ``(exit_code, stdout_text, stderr_text)``; only argparse usage errors print directly."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    try:
        report = COMMANDS[args.command](args)
    except AuditFailure as exc:
        return EXIT_INPUT, "", dumps(_error("input", exc, {"audit": exc.audit}))
    except (ResourceCapExceeded, PrecisionCeilingError) as exc:
        return EXIT_CAP, "", dumps(_error("resource-cap", exc))
    except (InputError, FanDefect, PresentationDefect, ExtensionRequired, CutoffError) as exc:
        return EXIT_INPUT, "", dumps(_error("input", exc))
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        return EXIT_INPUT, "", dumps(_error("input", exc))
    text = dumps(report)
    code = EXIT_OK if report.get("ok", True) else EXIT_VERIFY
    if args.output:
        Path(args.output).write_text(text)
        return code, "", ""
    return code, text, ""


def main(argv: list[str] | None = None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
