"""Command-line front end.

    nilpeq decide  --group G --eq "[a1,x]=c"
    nilpeq reduce  --group G --eq-file eq.txt
    nilpeq encode  --target two-step --rank 2 --system sys.dioph
    nilpeq verify  --system enc.txt --assignment "y1=a1^2; yp1=a2^2" --step 2 --rank 2
    nilpeq oracle-search --group G --eq "x^2=a1" --bound 5

``--group`` takes a presentation file or the built-in name ``heisenberg``.
Exit codes: 0 sat / holds / found, 1 unsat / fails / none, 2 unknown or
budget exhausted, 64 usage error, 65 malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Sequence

from .config import ENV_NAMES, SolverConfig
from .diophantine import Sat, Unsat, decide_equation
from .encoders import DiophSyntaxError, EncodingError, encode, parse_dioph
from .malcev import CoordinateError, MalcevCoord, evaluate_word, satisfies, to_word
from .oracles.magnus import FreeNilpotentSpec, MagnusError, magnus_check_equation
from .oracles.search import SearchBudgetError, bounded_search
from .presentation import PresentationSchemaError, heisenberg, parse_presentation, validate_presentation
from .reducer import BranchBudgetError, CollectionError, reduce_equation
from .words import EquationSystem, WordSyntaxError, format_equation, format_system, format_word, parse_equation, parse_system, parse_word

EX_USAGE = 64
EX_DATAERR = 65

BUILTIN_GROUPS = {"heisenberg": heisenberg}


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nilpeq", description="Equations in 2-step nilpotent groups.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(p, group=True):
        p.add_argument("--format", choices=("text", "json"), default="text")
        if group:
            p.add_argument("--group", required=True, help="presentation file or 'heisenberg'")

    def equation_source(p, system=False):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--eq", help="equation in the word DSL")
        src.add_argument("--eq-file", help="file holding one equation")
        if system:
            src.add_argument("--system", help="file with one equation per line")

    p = sub.add_parser("decide", help="decide solvability of one equation")
    common(p)
    equation_source(p)
    for field, env in ENV_NAMES.items():
        p.add_argument("--" + field.replace("_", "-"), type=int, dest=field, help=f"overrides {env}")
    p.add_argument("--timing", action="store_true", help="report wall time (breaks byte-identical output)")

    p = sub.add_parser("reduce", help="show the integer constraint branches of an equation")
    common(p)
    equation_source(p)
    p.add_argument("--branch-budget", type=int, dest="branch_budget")

    p = sub.add_parser("encode", help="encode a quadratic Diophantine system as group equations")
    common(p, group=False)
    p.add_argument("--target", choices=("two-step", "higher-step"), required=True)
    p.add_argument("--step", type=int, help="nilpotency step (default 2 for two-step, 3 for higher-step)")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--system", required=True, help="Diophantine system file")

    p = sub.add_parser("verify", help="check an assignment against equations")
    common(p, group=False)
    p.add_argument("--group", help="check in a Mal'cev presentation instead of N(p,q)")
    equation_source(p, system=True)
    p.add_argument("--assignment", required=True, help="'x=word; y=word' or a file of such lines")
    p.add_argument("--step", type=int, default=2)
    p.add_argument("--rank", type=int, default=2)

    p = sub.add_parser("oracle-search", help="brute-force search in a coordinate box")
    common(p)
    equation_source(p, system=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--budget", type=int, default=10**9)
    return parser


# ---------------------------------------------------------------------------
# input helpers


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def load_group(spec: str):
    if spec in BUILTIN_GROUPS and not os.path.exists(spec):
        return BUILTIN_GROUPS[spec]()
    p = parse_presentation(_read(spec))
    report = validate_presentation(p)
    if not report.ok:
        raise InputError("invalid presentation: " + "; ".join(report.problems))
    return p


def load_equation(args, group):
    text = args.eq if args.eq is not None else _read(args.eq_file).strip()
    return parse_equation(text, group)


def load_system(args, group) -> EquationSystem:
    if getattr(args, "system", None):
        return parse_system(_read(args.system), group)
    return EquationSystem.of([load_equation(args, group)])


def parse_assignment(text: str, group=None) -> dict:
    if os.path.exists(text):
        text = _read(text)
    out = {}
    for item in text.replace("\n", ";").split(";"):
        item = item.split("#", 1)[0].strip()
        if not item:
            continue
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise InputError(f"expected 'name=word', got {item!r}")
        out[name.strip()] = parse_word(value.strip(), group, variables=())
    return out


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _coord_json(g: MalcevCoord) -> dict:
    return {"A": list(g.A), "B": list(g.B), "C": g.C, "D": list(g.D), "word": format_word(to_word(g))}


_BULKY = ("matrix", "lattice", "quadratic")


def certificate_lines(cert, depth: int = 1) -> list[str]:
    """Indented one-line-per-node rendering; bulky data stays in the JSON form."""
    items = [f"{k}={json.dumps(v, sort_keys=True, separators=(',', ':'))}"
             for k, v in sorted(cert.data.items()) if k not in _BULKY]
    lines = ["  " * depth + " ".join([cert.kind] + items)]
    for part in cert.parts:
        lines += certificate_lines(part, depth + 1)
    return lines


# ---------------------------------------------------------------------------
# subcommands


def cmd_decide(args, out) -> int:
    group = load_group(args.group)
    eq = load_equation(args, group)
    try:
        cfg = SolverConfig.from_env(**{f: getattr(args, f) for f in ENV_NAMES})
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    start = time.perf_counter()
    result = decide_equation(eq, group, cfg)
    elapsed = time.perf_counter() - start
    report = {"command": "decide", "equation": format_equation(eq), "verdict": result.verdict}
    try:
        report["branches"] = len(reduce_equation(eq, group, cfg.branch_budget))
    except BranchBudgetError:
        report["branches"] = None
    if isinstance(result, Sat):
        report["witness"] = {v: _coord_json(g) for v, g in result.witness.coords.items()}
    elif isinstance(result, Unsat):
        report["certificate"] = result.certificate.to_json()
    else:
        report["bound"] = result.bound
        report["reason"] = result.reason
    if args.timing:
        report["seconds"] = round(elapsed, 6)

    if args.format == "json":
        print(_dumps(report), file=out)
    else:
        print(f"equation: {report['equation']}", file=out)
        print(f"verdict:  {result.verdict}", file=out)
        print(f"branches: {report['branches']}", file=out)
        if isinstance(result, Sat):
            for v, g in result.witness.coords.items():
                print(f"  {v} = {format_word(to_word(g))}    {g}", file=out)
        elif isinstance(result, Unsat):
            print("certificate:", file=out)
            for line in certificate_lines(result.certificate):
                print(line, file=out)
        else:
            print(f"searched up to bound {result.bound}: {result.reason}", file=out)
        if args.timing:
            print(f"time: {elapsed:.3f}s", file=out)
    return result.exit_code


def cmd_reduce(args, out) -> int:
    group = load_group(args.group)
    eq = load_equation(args, group)
    budget = args.branch_budget or SolverConfig.from_env().branch_budget
    try:
        branches = reduce_equation(eq, group, budget)
    except BranchBudgetError as exc:
        print(str(exc), file=out)
        return 2
    if args.format == "json":
        print(_dumps({"command": "reduce", "equation": format_equation(eq),
                      "branches": [b.to_json() for b in branches]}), file=out)
    else:
        print(f"equation: {format_equation(eq)}", file=out)
        print(f"branches: {len(branches)}", file=out)
        for i, b in enumerate(branches):
            print(f"[{i}] {b.describe()}", file=out)
    return 0


def cmd_encode(args, out) -> int:
    system = parse_dioph(_read(args.system))
    step = args.step if args.step is not None else (2 if args.target == "two-step" else 3)
    try:
        spec = FreeNilpotentSpec(step, args.rank)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        encoded = encode(system, spec, args.target)
    except EncodingError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json":
        print(_dumps({"command": "encode", "group": str(spec), "target": args.target,
                      "variables": list(encoded.variables),
                      "equations": [format_equation(e) for e in encoded.equations]}), file=out)
    else:
        print(f"# {args.target} encoding over {spec}", file=out)
        print(format_system(encoded), end="", file=out)
    return 0


def cmd_verify(args, out) -> int:
    if args.group:
        group = load_group(args.group)
        system = load_system(args, group)
        words = parse_assignment(args.assignment, group)
        assignment = {v: evaluate_word(w, {}, group) for v, w in words.items()}
        missing = [v for v in system.variables if v not in assignment]
        if missing:
            raise InputError(f"no value for {', '.join(missing)}")
        truth = [satisfies(eq, assignment, group) for eq in system.equations]
        where = "presentation"
    else:
        try:
            spec = FreeNilpotentSpec(args.step, args.rank)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        system = load_system(args, spec)
        assignment = parse_assignment(args.assignment, spec)
        missing = [v for v in system.variables if v not in assignment]
        if missing:
            raise InputError(f"no value for {', '.join(missing)}")
        truth = [magnus_check_equation(eq, assignment, spec) for eq in system.equations]
        where = str(spec)
    ok = all(truth)
    if args.format == "json":
        print(_dumps({"command": "verify", "group": where, "holds": ok,
                      "equations": [{"equation": format_equation(e), "holds": t}
                                    for e, t in zip(system.equations, truth)]}), file=out)
    else:
        for e, t in zip(system.equations, truth):
            print(f"{'holds' if t else 'FAILS'}  {format_equation(e)}", file=out)
        print(f"all hold in {where}" if ok else f"some equations fail in {where}", file=out)
    return 0 if ok else 1


def cmd_oracle_search(args, out) -> int:
    group = load_group(args.group)
    system = load_system(args, group)
    if args.bound < 0:
        raise UsageError("--bound must be non-negative")
    try:
        found = bounded_search(system, group, args.bound, args.budget)
    except SearchBudgetError as exc:
        print(str(exc), file=out)
        return 2
    if args.format == "json":
        report = {"command": "oracle-search", "bound": args.bound, "found": found is not None}
        if found is not None:
            report["assignment"] = {v: _coord_json(g) for v, g in found.items()}
        print(_dumps(report), file=out)
    elif found is None:
        print(f"no solution with coordinates in [-{args.bound}, {args.bound}]", file=out)
    else:
        for v, g in found.items():
            print(f"{v} = {format_word(to_word(g))}    {g}", file=out)
    return 0 if found is not None else 1


COMMANDS = {
    "decide": cmd_decide,
    "reduce": cmd_reduce,
    "encode": cmd_encode,
    "verify": cmd_verify,
    "oracle-search": cmd_oracle_search,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"nilpeq: usage error: {exc}", file=err)
        return EX_USAGE
    except (InputError, WordSyntaxError, PresentationSchemaError, DiophSyntaxError,
            CoordinateError, MagnusError, CollectionError, json.JSONDecodeError, ValueError) as exc:
        print(f"nilpeq: input error: {exc}", file=err)
        return EX_DATAERR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
