"""Command-line harness.

Subcommands: generate, solve, analyze-order, verify, report.
Exit codes: 0 success, 2 validation failure, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .ecm import EcmConfig, run_ecm
from .errors import MoscalError
from .experiment import emit
from .instances import FAMILIES, GenSpec, filename, generate
from .model import load_instance, save_instance
from .ordergrid import mask_from_report, tradeoff_frontier, export_tradeoff_csv
from .pareto import export_archive_csv
from .report import report_from_dict, write_records_csv, write_summary_csv
from .verify import verify_report
from .wsm import WsmConfig, run_wsm

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_VERIFICATION = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moscal",
        description="Multi-objective scalarization with warm-starting",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a benchmark instance")
    gen.add_argument("--family", choices=FAMILIES, required=True)
    gen.add_argument("--size", type=int, required=True)
    gen.add_argument("--objectives", type=int, default=3)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=".", help="output directory")

    solve = sub.add_parser("solve", help="run WSM or epsilon-constraint method")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--method", choices=("wsm", "ecm"), required=True)
    solve.add_argument("--samples", type=int, default=100, help="WSM weight samples")
    solve.add_argument("--ordering", choices=("random", "lex", "angle"), default="random")
    solve.add_argument("--grid", type=int, default=10, help="epsilon levels per objective")
    solve.add_argument("--signature", default=None, help="traversal signature, e.g. o+-")
    solve.add_argument("--warm", choices=("none", "weak", "strong", "previous"), default="none")
    solve.add_argument("--propagate", choices=("on", "off"), default="off")
    solve.add_argument("--rho", type=float, default=None)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--out", default=".", help="output directory")
    solve.add_argument("--verify", action="store_true", help="oracle verification")

    order = sub.add_parser("analyze-order", help="traversal order trade-off study")
    order.add_argument("--instance", required=True)
    order.add_argument("--grid", type=int, default=10)
    order.add_argument("--rho", type=float, default=None)
    order.add_argument("--seed", type=int, default=0)
    order.add_argument("--out", default=".")

    ver = sub.add_parser("verify", help="verify a saved run report against the oracle")
    ver.add_argument("--instance", required=True)
    ver.add_argument("--report", required=True)

    rep = sub.add_parser("report", help="summarize saved run reports")
    rep.add_argument("--runs", required=True, help="directory of run_*.json files")
    rep.add_argument("--out", default=".")

    return parser


def _cmd_generate(args) -> int:
    spec = GenSpec(family=args.family, size=args.size, p=args.objectives, seed=args.seed)
    problem = generate(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / filename(spec)
    save_instance(problem, path)
    print(path)
    return EXIT_OK


def _cmd_solve(args) -> int:
    problem = load_instance(args.instance)
    if args.method == "wsm":
        warm = "none" if args.warm == "none" else "previous"
        report = run_wsm(
            problem,
            WsmConfig(
                num_samples=args.samples,
                ordering=args.ordering,
                warm_start=warm,
                seed=args.seed,
            ),
        )
    else:
        warm = "weak" if args.warm == "previous" else args.warm
        report = run_ecm(
            problem,
            EcmConfig(
                m=args.grid,
                signature=args.signature,
                warm=warm,
                propagate=args.propagate == "on",
                rho=args.rho,
                seed=args.seed,
            ),
        )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"run_{report.instance.replace(' ', '_')}_{report.method}"
    report.save_json(out / f"{stem}.json")
    write_records_csv([report], out / f"{stem}_records.csv")
    write_summary_csv([report], out / f"{stem}_summary.csv")
    if report.archive.entries:
        export_archive_csv(
            report.archive,
            out / f"{stem}_archive.csv",
            problem.num_vars,
            problem.objective_count,
        )
    print(
        f"{report.instance} {report.method} {report.variant}: "
        f"{report.totals.solves} solves, {report.totals.skips} skips, "
        f"archive {len(report.archive)}"
    )
    if args.verify:
        verdict = verify_report(problem, report)
        for v in verdict.violations:
            print(f"VIOLATION: {v}", file=sys.stderr)
        print(f"verify: {'PASS' if verdict.passed else 'FAIL'} ({verdict.checks} checks)")
        if not verdict.passed:
            return EXIT_VERIFICATION
    return EXIT_OK


def _cmd_analyze_order(args) -> int:
    problem = load_instance(args.instance)
    report = run_ecm(
        problem,
        EcmConfig(m=args.grid, warm="none", propagate=False, rho=args.rho, seed=args.seed),
    )
    mask = mask_from_report(report)
    rows = {mode: tradeoff_frontier(mask, mode) for mode in ("weak", "strong")}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"tradeoff_{report.instance.replace(' ', '_')}.csv"
    export_tradeoff_csv(rows, path)
    print(path)
    return EXIT_OK


def _cmd_verify(args) -> int:
    problem = load_instance(args.instance)
    doc = json.loads(Path(args.report).read_text(encoding="utf-8"))
    report = report_from_dict(doc)
    verdict = verify_report(problem, report)
    for v in verdict.violations:
        print(f"VIOLATION: {v}", file=sys.stderr)
    print(f"verify: {'PASS' if verdict.passed else 'FAIL'} ({verdict.checks} checks)")
    return EXIT_OK if verdict.passed else EXIT_VERIFICATION


def _cmd_report(args) -> int:
    runs = sorted(Path(args.runs).glob("run_*.json"))
    if not runs:
        print("no run_*.json files found", file=sys.stderr)
        return EXIT_VALIDATION
    reports = [report_from_dict(json.loads(p.read_text(encoding="utf-8"))) for p in runs]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_records_csv(reports, out / "records.csv")
    write_summary_csv(reports, out / "summary.csv")
    print(out / "summary.csv")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "solve": _cmd_solve,
        "analyze-order": _cmd_analyze_order,
        "verify": _cmd_verify,
        "report": _cmd_report,
    }
    try:
        return handlers[args.command](args)
    except MoscalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
