"""Command-line interface: solve, gen, bench, superstring, verify.

Exit status is 0 on success, 2 when a run needed the non-certified fallback
(or, for ``verify``, when a cross-check disagreed) and 1 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from pathlib import Path
from typing import Sequence

from .coloring import verify_coloring
from .cycle_cover import max_cycle_cover
from .instance import InstanceFormatError, load_instance, random_instance, render_instance
from .oracle import OracleSizeError, brute_cycle_cover
from .superstring import shortest_superstring
from .tour import EXACT_THRESHOLD, solve

BENCH_SCHEMA = "maxatsp-bench/1"
VERIFY_SCHEMA = "maxatsp-verify/1"
ORACLE_LIMIT = 16

EXIT_OK, EXIT_USAGE, EXIT_FALLBACK = 0, 1, 2


class UsageError(Exception):
    pass


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _read(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    return Path(path).read_text()


def cmd_solve(args: argparse.Namespace) -> int:
    inst = load_instance(_read(args.input))
    if args.verify and inst.n > ORACLE_LIMIT:
        raise UsageError(f"--verify needs n <= {ORACLE_LIMIT}")
    res = solve(inst, oracle=True if args.verify else None, dot=bool(args.dot))
    if args.dot:
        out = Path(args.dot)
        out.mkdir(parents=True, exist_ok=True)
        for i, (name, text) in enumerate(res.snapshots):
            (out / f"{i:02d}-{name}.dot").write_text(text)
    _write(args.output, json.dumps(res.report(inst), indent=2) + "\n")
    return EXIT_OK if res.certified else EXIT_FALLBACK


def cmd_gen(args: argparse.Namespace) -> int:
    _write(args.output, render_instance(random_instance(args.n, args.max_w, args.seed)))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    verify = args.verify or args.n <= EXACT_THRESHOLD
    if verify and args.n > ORACLE_LIMIT:
        raise UsageError(f"--verify needs n <= {ORACLE_LIMIT}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["schema", "seed", "n", "branch", "ratio", "certified", "millis"])
    status = EXIT_OK
    for seed in range(args.seed, args.seed + args.seeds):
        inst = random_instance(args.n, args.max_w, seed)
        t0 = time.perf_counter()
        res = solve(inst, oracle=verify)
        millis = round(1000 * (time.perf_counter() - t0))
        ratio = res.ratio()
        w.writerow([BENCH_SCHEMA, seed, args.n, res.branch, "" if ratio is None else str(ratio),
                    int(res.certified), millis])
        if not res.certified:
            status = EXIT_FALLBACK
    _write(args.output, buf.getvalue())
    return status


def cmd_superstring(args: argparse.Namespace) -> int:
    strings = [line for line in _read(args.input).splitlines() if line]
    if not strings:
        raise UsageError("no strings in input")
    res = shortest_superstring(strings)
    _write(args.output, res.superstring + "\n" + json.dumps(res.stats()) + "\n")
    return EXIT_OK if res.certified else EXIT_FALLBACK


def _check_instance(inst) -> list[str]:
    problems = []
    res = solve(inst, oracle=True)
    opt = res.opt
    if 4 * res.tour_weight < 3 * opt:
        problems.append(f"ratio {res.ratio()} below 3/4")
    if max_cycle_cover(inst).weight < opt:
        problems.append("cycle cover lighter than the optimal tour")
    if inst.n <= 8 and brute_cycle_cover(inst).value != max_cycle_cover(inst).weight:
        problems.append("cycle cover differs from the derangement scan")
    if res.coloring is not None and res.certified:
        if not verify_coloring(res.coloring.g, res.coloring.coloring).ok:
            problems.append("coloring failed verification")
    return problems


def cmd_verify(args: argparse.Namespace) -> int:
    if args.input:
        cases = [("input", load_instance(_read(args.input)))]
    else:
        cases = [(seed, random_instance(args.n, args.max_w, seed))
                 for seed in range(args.seed, args.seed + args.seeds)]
    rows = []
    for label, inst in cases:
        if inst.n > ORACLE_LIMIT:
            raise UsageError(f"verify needs n <= {ORACLE_LIMIT}")
        rows.append({"case": label, "problems": _check_instance(inst)})
    failed = [r for r in rows if r["problems"]]
    summary = {"schema": VERIFY_SCHEMA, "cases": len(rows), "failed": len(failed), "failures": failed}
    _write(args.output, json.dumps(summary, indent=2) + "\n")
    return EXIT_FALLBACK if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="maxatsp", description="3/4-approximation for maximum asymmetric TSP")
    p.add_argument("--log-level", default="WARNING")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one instance and print a JSON report")
    s.add_argument("--input", required=True)
    s.add_argument("--output")
    s.add_argument("--verify", action="store_true", help="compute the exact optimum")
    s.add_argument("--dot", metavar="DIR", help="write per-phase coloring snapshots as DOT files")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--max-w", type=int, default=100)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="run many seeds and write CSV")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--seeds", type=int, default=100)
    b.add_argument("--seed", type=int, default=0, help="first seed")
    b.add_argument("--max-w", type=int, default=100)
    b.add_argument("--verify", action="store_true")
    b.add_argument("--output")
    b.set_defaults(func=cmd_bench)

    ss = sub.add_parser("superstring", help="approximate shortest superstring of newline-separated strings")
    ss.add_argument("--input", required=True)
    ss.add_argument("--output")
    ss.set_defaults(func=cmd_superstring)

    v = sub.add_parser("verify", help="cross-check the solver against exact oracles")
    v.add_argument("--input")
    v.add_argument("--n", type=int, default=8)
    v.add_argument("--seeds", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-w", type=int, default=100)
    v.add_argument("--output")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    for name in ("n", "seeds", "max_w"):
        val = getattr(args, name, None)
        if val is not None and val < (2 if name == "n" else 0):
            print(f"maxatsp: invalid --{name.replace('_', '-')}: {val}", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except (OSError, InstanceFormatError, UsageError, OracleSizeError, ValueError) as exc:
        print(f"maxatsp: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
