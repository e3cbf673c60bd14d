"""Command-line front-end.

Subcommands:
    compile    lower a scheme to the basis gate set, emit circuit text and/or
               a JSON cost report
    sweep      evaluate word lengths 0..L, emit CSV or JSON lines
    search-k   find a multiplier set minimizing the worst-case false accept

Exit codes: 0 success, 2 usage or validation error, 1 runtime failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from .circuit import serialize
from .compiler import LoweringRequest, compile_request, cost_report
from .ksearch import search_k
from .noise import NoiseConfigError, load_noise_config
from .qfa import ConstructionError
from .sim import rows_to_csv, rows_to_jsonl, sweep

SCHEME_FLAGS = {"ry": "ry-single", "rz": "rz-single", "opt-ry": "opt-ry", "opt-rz": "opt-rz"}


class UsageError(Exception):
    pass


def _parse_k(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise UsageError(f"--k takes comma-separated integers, got {text!r}") from None


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _cmd_compile(args) -> int:
    req = LoweringRequest(
        p=args.p,
        multipliers=_parse_k(args.k),
        n=args.length,
        scheme=SCHEME_FLAGS[args.scheme],
    )
    circ = compile_request(req, run_optimize=not args.no_optimize)
    emit_circuit = args.emit in ("circuit", "both")
    emit_report = args.emit in ("report", "both")
    report_json = json.dumps(cost_report(circ).to_dict()) + "\n" if emit_report else ""
    circuit_text = serialize(circ) if emit_circuit else ""
    if args.output is None:
        sys.stdout.write(circuit_text + report_json)
    elif args.emit == "both":
        _write(circuit_text, args.output + ".circuit.txt")
        _write(report_json, args.output + ".report.json")
    else:
        _write(circuit_text or report_json, args.output)
    return 0


def _cmd_sweep(args) -> int:
    noise = None
    if args.noise is not None:
        noise = load_noise_config(args.noise)
        if args.shots is None or args.seed is None:
            raise UsageError("--noise requires both --shots and --seed")
    rows = sweep(
        args.p,
        _parse_k(args.k),
        SCHEME_FLAGS[args.scheme],
        args.max_length,
        noise=noise,
        shots=args.shots,
        seed=args.seed,
        run_optimize=not args.no_optimize,
    )
    text = rows_to_csv(rows) if args.format == "csv" else rows_to_jsonl(rows)
    _write(text, args.output)
    return 0


def _cmd_search_k(args) -> int:
    if args.mode == "random" and (args.trials is None or args.seed is None):
        raise UsageError("--mode random requires --trials and --seed")
    kset, worst = search_k(args.p, args.d, args.mode, trials=args.trials, seed=args.seed)
    _write(json.dumps({"k_set": list(kset), "worst_case": worst}) + "\n", args.output)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modfa",
        description="Build, compile, and simulate mod-p word acceptors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compile", help="lower one word length to the basis gate set")
    pc.add_argument("--p", type=int, required=True, help="odd prime modulus")
    pc.add_argument("--k", required=True, help="multiplier(s), e.g. 1 or 3,5,7")
    pc.add_argument("--scheme", choices=sorted(SCHEME_FLAGS), required=True)
    pc.add_argument("--length", type=int, required=True, help="word length n")
    pc.add_argument("--no-optimize", action="store_true",
                    help="skip the peephole pass after transpilation")
    pc.add_argument("--emit", choices=("circuit", "report", "both"), default="report")
    pc.add_argument("--output", help="write here instead of stdout "
                                     "(with both: <output>.circuit.txt / <output>.report.json)")
    pc.set_defaults(fn=_cmd_compile)

    ps = sub.add_parser("sweep", help="evaluate word lengths 0..L")
    ps.add_argument("--p", type=int, required=True)
    ps.add_argument("--k", required=True)
    ps.add_argument("--scheme", choices=sorted(SCHEME_FLAGS), required=True)
    ps.add_argument("--max-length", type=int, required=True)
    ps.add_argument("--noise", help="noise config file (requires --shots and --seed)")
    ps.add_argument("--shots", type=int)
    ps.add_argument("--seed", type=int)
    ps.add_argument("--no-optimize", action="store_true")
    ps.add_argument("--format", choices=("csv", "json"), default="csv")
    ps.add_argument("--output")
    ps.set_defaults(fn=_cmd_sweep)

    pk = sub.add_parser("search-k", help="search multiplier sets")
    pk.add_argument("--p", type=int, required=True)
    pk.add_argument("--d", type=int, required=True, help="set size (power of two)")
    pk.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    pk.add_argument("--trials", type=int)
    pk.add_argument("--seed", type=int)
    pk.add_argument("--output")
    pk.set_defaults(fn=_cmd_search_k)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.fn(args)
    except (UsageError, ConstructionError, NoiseConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
