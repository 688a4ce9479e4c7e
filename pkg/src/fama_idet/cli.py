"""Command-line batch runner: sweeps, cross-validation, single-cell eval.

Exit codes: 0 success, 1 validation failure, 2 numerical failure.
Default worker count comes from FAMA_IDET_WORKERS (fallback 1).
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from .specfun import SeriesConvergenceError, mu_from_w
from .sweep import (
    ConfigError,
    compare,
    render,
    run_sweep,
    spec_from_config,
    write_result,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fama-idet",
        description="Outage sweeps and MC/analytic cross-validation for "
        "fluid-antenna multiple access with integrated data and energy transfer.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("config", help="flat key=value config file")
        p.add_argument("--trials", type=int, help="MC trials per cell (override)")
        p.add_argument("--seed", type=int, help="MC seed (override)")
        p.add_argument("--workers", type=int, default=None,
                       help="parallel cells (default: FAMA_IDET_WORKERS or 1)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--timing", action="store_true",
                       help="fill the seconds column (breaks byte-identical "
                            "reproducibility across runs)")

    add_common(sub.add_parser("sweep", help="run the configured parameter sweep"))
    add_common(sub.add_parser("compare", help="validate MC against EXACT per cell"))
    add_common(sub.add_parser("eval", help="evaluate the single configured cell"))

    p_mu = sub.add_parser("mu", help="print the port-correlation parameter")
    p_mu.add_argument("--w", type=float, required=True, help="aperture in wavelengths")
    return parser


def _workers(args) -> int:
    if args.workers is not None:
        return max(1, args.workers)
    try:
        return max(1, int(os.environ.get("FAMA_IDET_WORKERS", "1")))
    except ValueError:
        return 1


def _load_spec(args, require_axis: bool):
    with open(args.config, "r") as fh:
        text = fh.read()
    return spec_from_config(
        text,
        trials=args.trials,
        seed=args.seed,
        fmt=args.format,
        out=args.out,
        require_axis=require_axis,
        timing=args.timing,
    )


def _cmd_sweep(args, require_axis: bool) -> int:
    spec = _load_spec(args, require_axis)
    result = run_sweep(spec, workers=_workers(args))
    if not spec.output_path:
        sys.stdout.write(render(result, spec.format))
    return EXIT_NUMERICAL if result.failed else EXIT_OK


def _cmd_compare(args) -> int:
    spec = _load_spec(args, require_axis=False)
    report = compare(spec, workers=_workers(args))
    lines = []
    all_pass = True
    for line in report:
        status = "PASS" if line.passed else "FAIL"
        all_pass &= line.passed
        cell = f"axis={line.axis} " if line.axis else ""
        if math.isnan(line.mc):
            lines.append(f"{status} {cell}{line.metric}: evaluation error")
        else:
            lines.append(
                f"{status} {cell}{line.metric}: |MC-EXACT|="
                f"{abs(line.mc - line.exact):.6g} vs 3*ci={3 * line.ci_half_width:.6g}"
                f" (MC={line.mc:.6g}, EXACT={line.exact:.6g})"
            )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all_pass else EXIT_NUMERICAL


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "mu":
            if args.w <= 0:
                print("error: --w must be positive", file=sys.stderr)
                return EXIT_VALIDATION
            print(f"{mu_from_w(args.w):.12g}")
            return EXIT_OK
        if args.command == "sweep":
            return _cmd_sweep(args, require_axis=True)
        if args.command == "eval":
            return _cmd_sweep(args, require_axis=False)
        if args.command == "compare":
            return _cmd_compare(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SeriesConvergenceError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
