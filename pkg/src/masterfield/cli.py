"""Command-line front end: ``masterfield {phi,finite-n,moments,ingest,verify}``.

Failures print one line ``error: <reason>`` on stderr and exit with status 2;
a failed check (bound violation, failing verify case) exits with status 1.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .brauer import BrauerError
from .exppoly import format_exact_value
from .master_field import PhiError, default_labels, finite_N_bound, phi_finite_N, phi_symbolic
from .moment_systems import finite_moments, mu_closed
from .planar_loops import Loop, MapError, dump_map, ingest_polyline, load_map
from .suites import SUITES

KINDS = ("C", "R", "H", "SU")
MOMENT_KINDS = ("limit", "U", "SU", "SO", "Sp")


class CliError(Exception):
    pass


@dataclass
class LoopInput:
    loop: Loop
    labels: dict[int, str]
    areas: dict[int, Fraction]


def parse_assignments(text: str | None) -> dict[str, Fraction]:
    """``k=v,...`` with exact rationals or decimals."""
    out: dict[str, Fraction] = {}
    if not text:
        return out
    for item in text.split(","):
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not name:
            raise CliError(f"bad assignment {item!r}, expected name=value")
        if name in out:
            raise CliError(f"label {name} assigned twice")
        try:
            out[name] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise CliError(f"bad value {value!r} for {name}") from None
    return out


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed JSON in {path}: {exc.msg} at line {exc.lineno}") from None


def _polyline_points(data) -> list | None:
    if isinstance(data, list):
        return data
    if isinstance(data, dict) and "points" in data:
        return data["points"]
    return None


def read_loop(path: str, index: int = 0) -> LoopInput:
    """A map file (first loop by default) or a polyline file."""
    data = _read_json(path)
    points = _polyline_points(data)
    if points is not None:
        ing = ingest_polyline(points)
        return LoopInput(ing.loop, default_labels(ing.loop.map), ing.areas)
    if not isinstance(data, dict):
        raise CliError(f"{path}: expected a map object or a list of points")
    mf = load_map(data)
    if not mf.loops:
        raise CliError(f"{path}: the map file has no loops")
    if not 0 <= index < len(mf.loops):
        raise CliError(f"{path}: no loop with index {index}")
    labels = default_labels(mf.map)
    labels.update(mf.labels)
    return LoopInput(mf.loops[index], labels, mf.areas)


def label_values(inp: LoopInput, overrides: dict[str, Fraction]) -> dict[str, Fraction]:
    """Area of each label: file areas first, then overrides by label name."""
    known = set(inp.labels.values())
    for name in overrides:
        if name not in known:
            raise CliError(f"unknown face label {name}")
    values = {inp.labels[f]: a for f, a in inp.areas.items() if f in inp.labels}
    values.update(overrides)
    return values


def face_areas(inp: LoopInput, values: dict[str, Fraction]) -> dict[int, Fraction]:
    m = inp.loop.map
    missing = sorted({inp.labels[f] for f in m.bounded_faces if inp.labels[f] not in values})
    if missing:
        raise CliError(f"no area for {', '.join(missing)}")
    return {f: values[inp.labels[f]] for f in m.bounded_faces}


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True, indent=1))


def cmd_phi(args: argparse.Namespace) -> int:
    inp = read_loop(args.input, args.loop)
    result = phi_symbolic(inp.loop, inp.labels)
    out: dict = {"formula": str(result), "terms": result.expr.term_list()}
    if args.eval is not None:
        values = label_values(inp, parse_assignments(args.eval))
        used = {v: values[v] for v in result.expr.variables if v in values}
        missing = sorted(set(result.expr.variables) - set(used))
        if missing:
            raise CliError(f"no value for {', '.join(missing)}")
        exact = result.expr.exact_value(used)
        out["value"] = {"exact": format_exact_value(exact), "float": result.expr.evaluate(used),
                        "at": {k: str(v) for k, v in sorted(used.items())}}
    if args.json:
        _emit(out)
    else:
        print(out["formula"])
        if "value" in out:
            print(f"{out['value']['exact']} = {out['value']['float']!r}")
    return 0


def cmd_finite_n(args: argparse.Namespace) -> int:
    if args.N < 1:
        raise CliError(f"N must be positive, got {args.N}")
    inp = read_loop(args.input, args.loop)
    values = label_values(inp, parse_assignments(args.areas))
    areas = face_areas(inp, values)
    float_areas = {f: float(a) for f, a in areas.items()}
    exact = phi_symbolic(inp.loop, inp.labels)
    used = {v: values[v] for v in exact.expr.variables}
    phi = exact.expr.evaluate(used)
    phi_n = phi_finite_N(inp.loop, args.kind, args.N, float_areas)
    bound = finite_N_bound(inp.loop, args.kind, args.N, float_areas)
    gap = abs(phi_n - phi)
    ok = gap <= bound
    report = {"kind": args.kind, "N": args.N, "phi_N": phi_n, "phi": phi, "gap": gap,
              "bound": bound, "ok": ok}
    if args.json:
        _emit(report)
    else:
        print(f"kind   {args.kind}")
        print(f"N      {args.N}")
        for key in ("phi_N", "phi", "gap", "bound"):
            print(f"{key:<6} {report[key]!r}")
        print("status ok" if ok else "status VIOLATION")
    return 0 if ok else 1


def cmd_moments(args: argparse.Namespace) -> int:
    if args.n < 0:
        raise CliError(f"n must be nonnegative, got {args.n}")
    if args.kind == "limit" and args.N is not None:
        raise CliError("--N conflicts with --kind limit")
    if args.kind != "limit" and args.N is None:
        raise CliError(f"--kind {args.kind} needs --N")
    t = float(Fraction(args.t))
    closed = mu_closed(args.n, t)
    value = finite_moments(args.kind, args.n, args.N, t)
    report = {"n": args.n, "t": args.t, "kind": args.kind, "N": args.N,
              "mu": closed, "value": value, "gap": abs(value - closed)}
    if args.json:
        _emit(report)
    else:
        print(f"mu_{args.n}({args.t}) = {closed!r}")
        label = "limit" if args.kind == "limit" else f"{args.kind}({args.N})"
        print(f"{label} = {value!r}")
        print(f"gap = {report['gap']!r}")
    return 0


def cmd_ingest(args: argparse.Namespace) -> int:
    points = _polyline_points(_read_json(args.input))
    if points is None:
        raise CliError(f"{args.input}: expected a list of points")
    ing = ingest_polyline(points)
    m = ing.loop.map
    text = json.dumps(dump_map(m, [ing.loop], ing.areas, default_labels(m)), indent=1)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    cases = SUITES[args.suite]()
    passed = sum(c.ok for c in cases)
    if args.json:
        _emit({"suite": args.suite, "passed": passed, "total": len(cases),
               "cases": [asdict(c) for c in cases]})
    else:
        for c in cases:
            detail = f"  {c.detail}" if c.detail else ""
            print(f"{'PASS' if c.ok else 'FAIL'} {c.name}{detail}")
        print(f"{args.suite}: {passed}/{len(cases)} passed")
    return 0 if passed == len(cases) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="masterfield", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phi", help="exact master field of a loop")
    p.add_argument("input", help="map JSON or polyline JSON")
    p.add_argument("--loop", type=int, default=0, help="loop index in a map file")
    p.add_argument("--eval", nargs="?", const="", metavar="k=v,...",
                   help="evaluate; values default to the areas stored in the file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("finite-n", help="finite-N expectation against the exact value")
    p.add_argument("input")
    p.add_argument("--loop", type=int, default=0)
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--areas", metavar="k=v,...")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_finite_n)

    p = sub.add_parser("moments", help="mu_n(t) and finite-N single-loop moments")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", required=True, help="time, rational or decimal")
    p.add_argument("--kind", choices=MOMENT_KINDS, default="limit")
    p.add_argument("--N", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("ingest", help="polyline JSON to map JSON")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, MapError, BrauerError, PhiError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
