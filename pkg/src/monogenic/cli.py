"""``monogenic-verify``: run verification suites and write JSON or CSV reports.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .algebra import AlgebraError
from .checks import MAX_DEGREE_CAP, REGISTRY, SuiteConfig, resolve_spec, run_check

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "MONOGENIC_OUTPUT_DIR"
CSV_COLUMNS = ("name", "status", "measured_error", "tolerance", "runtime_ms")
KINDS = ("complex", "quaternion", "octonion", "clifford", "dual_quaternion")

# algebra and m used when the flags are omitted
SUBCOMMAND_DEFAULTS = {
    "check-algebra": ("octonion", None),
    "verify-monogenic": ("octonion", None),
    "reconstruct": ("octonion", 2),
    "taylor-demo": ("octonion", 2),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="monogenic-verify", description="Verification suites for monogenic function theory.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in REGISTRY:
        p = sub.add_parser(name)
        p.add_argument("--kind", choices=KINDS, default=None)
        p.add_argument("--m", type=int, default=None, help="dimension of M minus one")
        p.add_argument("--spec-file", default=None, help="JSON algebra spec, overrides --kind/--m")
        p.add_argument("--checks", default=None, help="comma separated subset of check names")
        p.add_argument("--resolution", type=int, default=32)
        p.add_argument("--epsilon", type=float, default=0.05)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--degree-cap", type=int, default=4)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="report path; '-' for stdout")
        p.add_argument("--no-timings", action="store_true", help="omit runtime_ms so reports are byte-identical")
        p.add_argument("--workers", type=int, default=4)
    return parser


def config_from_args(args: argparse.Namespace) -> SuiteConfig:
    kind, default_m = SUBCOMMAND_DEFAULTS[args.command]
    available = REGISTRY[args.command]
    checks = None
    if args.checks:
        checks = sorted({c.strip() for c in args.checks.split(",") if c.strip()})
        unknown = [c for c in checks if c not in available]
        if unknown:
            raise UsageError(f"unknown check(s) for {args.command}: {', '.join(unknown)}; choose from {', '.join(sorted(available))}")
    if not 0 <= args.degree_cap <= MAX_DEGREE_CAP:
        raise UsageError(f"--degree-cap must be between 0 and {MAX_DEGREE_CAP}, got {args.degree_cap}")
    if args.resolution < 4:
        raise UsageError("--resolution must be >= 4")
    if not args.epsilon > 0:
        raise UsageError("--epsilon must be positive")
    return SuiteConfig(
        kind=args.kind or kind,
        m=args.m if args.m is not None else default_m,
        checks=checks,
        resolution=args.resolution,
        epsilon=args.epsilon,
        seed=args.seed,
        degree_cap=args.degree_cap,
        spec_file=args.spec_file,
        timings=not args.no_timings,
    )


def run_suite(command: str, cfg: SuiteConfig, workers: int = 4) -> dict:
    """Run the selected checks and assemble a report ordered by check name."""
    spec = resolve_spec(cfg)
    registry = REGISTRY[command]
    names = sorted(cfg.checks or registry)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = {n: pool.submit(run_check, n, registry[n], spec, cfg) for n in names}
        records = [futures[n].result() for n in names]
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "algebra": {"name": spec.name, "m": spec.m, "dim_total": spec.dim_total},
        "config": cfg.echo(),
        "all_pass": all(r.status != "fail" for r in records),
        "checks": [r.to_json() for r in records],
    }


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in report["checks"]:
        writer.writerow(["" if rec[c] is None else rec[c] for c in CSV_COLUMNS])
    return buf.getvalue()


def _destination(out: str | None, command: str, fmt: str) -> Path | None:
    if out == "-":
        return None
    if out:
        return Path(out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    return Path(base) / f"{command}.{fmt}" if base else None


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = config_from_args(args)
        report = run_suite(args.command, cfg, args.workers)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"config error: malformed JSON spec file: {exc}", file=sys.stderr)
        return 2
    except (OSError, AlgebraError, KeyError, TypeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    text = render(report, args.format)
    dest = _destination(args.out, args.command, args.format)
    if dest is None:
        sys.stdout.write(text)
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text)
    return 0 if report["all_pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
