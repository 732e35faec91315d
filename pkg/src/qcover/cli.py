"""Batch command-line interface.

Subcommands: ``construct`` (recursive covering-code builder, emits code and
trace JSON), ``verify`` (exhaustive or sampled covering check), ``solve``
(exact minimum covering code), and ``bounds`` with ``eval``, ``table`` (CSV
sweep of optimized and closed-form bounds), and ``check-corollary`` (chain
audit of the closed form).

Exit status: 0 success (verify: covered or no counterexample found);
1 verify found an uncovered word, or a chain check failed;
2 file, parse, or usage error; 3 infeasible parameters or guard violation
(the message names the violated constraint); 4 construction failure after
exhausting domination trials.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import bounds
from .codes import (
    Code,
    code_from_dict,
    dumps_code,
    verify_covering,
    verify_covering_sampled,
    word_to_text,
)
from .construct import BASE_POLICIES, dumps_trace, recursive_construct
from .errors import (
    DominationFailure,
    InfeasibleParamsError,
    SpaceTooLargeError,
)
from .hamming import DEFAULT_ENUMERATION_GUARD, HammingSpace
from .solver import EXACT_SOLVER_GUARD, minimal_covering_code

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_FILE = 2
EXIT_INFEASIBLE = 3
EXIT_CONSTRUCTION = 4


def _fmt(v: float) -> str:
    """Reals print with 17 significant digits, '.' decimal separator."""
    return f"{v:.17g}"


def _read_code_file(path: str) -> Code:
    try:
        obj = json.loads(Path(path).read_text())
        if "words" not in obj and isinstance(obj.get("code"), dict):
            obj = obj["code"]  # accept solver-result files wrapping a code
        return code_from_dict(obj)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise _FileProblem(f"cannot read code file {path}: {exc}") from exc


class _FileProblem(Exception):
    pass


def _warn_guard_override(kind: str, value: int, default: int) -> None:
    if value > default:
        print(
            f"warning: {kind} guard raised to {value} (default {default}); "
            "this can take a very long time",
            file=sys.stderr,
        )


def cmd_construct(args: argparse.Namespace) -> int:
    space = HammingSpace(args.q, args.n)
    code, trace = recursive_construct(
        space,
        args.R,
        args.x,
        args.y,
        base_policy=args.base_policy,
        seed=args.seed,
    )
    out = Path(args.out)
    trace_path = Path(args.trace) if args.trace else out.with_suffix(".trace.json")
    out.write_text(dumps_code(code))
    trace_path.write_text(dumps_trace(trace))
    dens = trace.density
    print(
        f"constructed {len(code)} codewords over [{args.q}]^{args.n} at radius {args.R}; "
        f"density {dens.exact} ~ {_fmt(dens.approx)}"
    )
    print(f"code:  {out}")
    print(f"trace: {trace_path}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    code = _read_code_file(args.code)
    if args.sampled is not None:
        verdict = verify_covering_sampled(code, args.R, args.sampled, seed=args.seed)
        if verdict.found_uncovered:
            print(f"uncovered: witness {word_to_text(verdict.witness, code.space.q)}")
            return EXIT_COUNTEREXAMPLE
        print(f"no-counterexample after {verdict.samples} samples (not a covering proof)")
        return EXIT_OK
    _warn_guard_override("verification", args.max_space, DEFAULT_ENUMERATION_GUARD)
    verdict = verify_covering(code, args.R, guard=args.max_space)
    if verdict.covered:
        print("covered")
        return EXIT_OK
    print(f"uncovered: witness {word_to_text(verdict.witness, code.space.q)}")
    return EXIT_COUNTEREXAMPLE


def cmd_solve(args: argparse.Namespace) -> int:
    space = HammingSpace(args.q, args.n)
    _warn_guard_override("solver", args.max_space, EXACT_SOLVER_GUARD)
    result = minimal_covering_code(
        space,
        args.R,
        time_budget=args.time_budget,
        node_budget=args.node_budget,
        guard=args.max_space,
    )
    text = json.dumps(result.to_json_dict(), sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _bounds_eval_values(args: argparse.Namespace) -> dict:
    p = bounds.BoundParams(R=args.R, x=args.x, y=args.y, R1=args.R1, mu_star=args.mu)
    values = {
        "R": args.R,
        "x": args.x,
        "y": args.y,
        "t_feasibility": bounds.feasibility(p),
        "parametric_bound": bounds.parametric_bound(p),
    }
    if args.R1 is not None:
        values["R1"] = args.R1
        values["mu_star"] = args.mu if args.mu is not None else (
            1.0 if args.R1 == 0 else bounds.optimize_parametric_bound(args.R1).bound
        )
        values["nested_parametric_bound"] = bounds.nested_parametric_bound(p)
    if args.R >= 6:
        values["closed_form_bound"] = bounds.closed_form_bound(args.R)
    if args.R >= 3:
        values["classic_bound_q2"] = bounds.classic_bound(2, args.R)
        values["classic_bound_q3"] = bounds.classic_bound(3, args.R)
    return values


def cmd_bounds_eval(args: argparse.Namespace) -> int:
    values = _bounds_eval_values(args)
    if args.format == "json":
        print(json.dumps(values, sort_keys=True, indent=2))
    else:
        for key in sorted(values):
            v = values[key]
            print(f"{key} = {_fmt(v) if isinstance(v, float) else v}")
    return EXIT_OK


def cmd_bounds_table(args: argparse.Namespace) -> int:
    lines = [",".join(bounds.BOUND_TABLE_HEADER)]
    for row in bounds.bound_table_rows(args.R_min, args.R_max):
        cells = [str(row[0])] + [_fmt(v) for v in row[1:]]
        lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bounds_check(args: argparse.Namespace) -> int:
    if args.R_min < 2:
        raise InfeasibleParamsError("requires --R-min >= 2")
    all_hold = True
    for R in range(args.R_min, args.R_max + 1):
        report = bounds.closed_form_chain_check(R)
        if report.holds:
            print(f"R={R}: holds")
        else:
            all_hold = False
            print(f"R={R}: FAILS at step ({report.failed_step})")
    note = "" if args.R_min >= 6 else " (the closed form is only claimed for R >= 6)"
    print(f"checked R in [{args.R_min}, {args.R_max}]{note}")
    return EXIT_OK if all_hold else EXIT_COUNTEREXAMPLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcover",
        description="Covering-code constructions, exact small optima, and density bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a covering code recursively")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--base-policy", choices=BASE_POLICIES, default="auto")
    p.add_argument("--out", required=True, help="code JSON output path")
    p.add_argument("--trace", help="trace JSON output path (default: <out>.trace.json)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check that a code file covers its space")
    p.add_argument("--code", required=True, help="code JSON file")
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--sampled", type=int, help="spot-check this many random words instead")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-space", type=int, default=DEFAULT_ENUMERATION_GUARD)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="exact minimum covering code (tiny spaces)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--time-budget", type=float)
    p.add_argument("--node-budget", type=int)
    p.add_argument("--max-space", type=int, default=EXACT_SOLVER_GUARD)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    b = sub.add_parser("bounds", help="evaluate, tabulate, or audit the density bounds")
    bsub = b.add_subparsers(dest="bounds_command", required=True)

    p = bsub.add_parser("eval", help="all applicable bound formulas at (R, x, y)")
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--R1", type=int)
    p.add_argument("--mu", type=float)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_bounds_eval)

    p = bsub.add_parser("table", help="CSV sweep of optimized and closed-form bounds")
    p.add_argument("--R-min", type=int, required=True)
    p.add_argument("--R-max", type=int, required=True)
    p.add_argument("--format", choices=("csv",), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds_table)

    p = bsub.add_parser("check-corollary", help="audit the closed-form inequality chain")
    p.add_argument("--R-min", type=int, default=6)
    p.add_argument("--R-max", type=int, required=True)
    p.set_defaults(func=cmd_bounds_check)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _FileProblem as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except DominationFailure as exc:
        print(f"error: construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    except (InfeasibleParamsError, SpaceTooLargeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
