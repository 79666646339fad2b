"""Command-line front end: test on CSV curve files, simulate, power study, lrcov.

Exit codes: 0 success, 2 input error, 3 incompatible inputs, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .curves import make_grid, read_curves_csv, resample_sample, write_curves_csv
from .eigen import select_p  # noqa: F401  (re-exported for scripting convenience)
from .errors import (
    CurveCsvError,
    DegenerateEigenvalueError,
    DegenerateSpectrumError,
    GridMismatchError,
    NonstationaryKernelError,
)
from .longrun import Bandwidth, kernel_by_name, longrun_cov, write_surface_csv
from .power import ERROR_MODELS, ExperimentSpec, format_table, power_table_csv, run_experiment
from .simulate import (
    Far1Config,
    RngSeed,
    add_alternative_mean,
    brownian_sample,
    far1_sample,
    gaussian_far1_kernel,
)
from .twosample import TestConfig, report_csv, report_kv_lines, run_two_sample_test

__all__ = ["main", "entry"]


def _parse_bandwidth(text: str) -> Bandwidth:
    if text in ("cube-root", "cube_root"):
        return Bandwidth("cube_root")
    try:
        return Bandwidth("fixed", float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"bandwidth must be 'cube-root' or a positive number, got {text!r}"
        )


def _parse_p(text: str) -> int | None:
    if text == "auto":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--p must be 'auto' or a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("--p must be >= 1")
    return value


def _parse_p_range(text: str) -> range:
    try:
        lo_s, hi_s = text.split("..")
        lo, hi = int(lo_s), int(hi_s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--p-range must look like 1..9, got {text!r}")
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError("--p-range bounds must satisfy 1 <= lo <= hi")
    return range(lo, hi + 1)


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(f) for f in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _parse_bool(text: str) -> bool:
    if text.lower() in ("true", "1", "yes"):
        return True
    if text.lower() in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_common_grid(path1, path2):
    s1, has_grid1 = read_curves_csv(path1)
    s2, has_grid2 = read_curves_csv(path2)
    if s1.grid == s2.grid:
        return s1, s2
    if has_grid1 and has_grid2:
        coarse = s1.grid if s1.grid.size <= s2.grid.size else s2.grid
        print(
            f"warning: input grids differ ({s1.grid.size} vs {s2.grid.size} points); "
            f"resampling both to the coarser grid ({coarse.size} points)",
            file=sys.stderr,
        )
        return resample_sample(s1, coarse), resample_sample(s2, coarse)
    raise GridMismatchError(
        f"samples have {s1.grid.size} and {s2.grid.size} columns and no grid headers "
        "to resample by"
    )


def cmd_test(args) -> int:
    s1, s2 = _load_common_grid(args.sample1, args.sample2)
    base_cfg = dict(
        threshold=args.threshold,
        kernel=kernel_by_name(args.kernel),
        bandwidth=args.bandwidth,
        dependent=args.dependent,
        mc_reps=args.mc_reps,
        seed=RngSeed(args.seed, args.stream),
        k_basis=args.k_basis,
    )
    if args.p_range is not None:
        reports = [
            run_two_sample_test(s1, s2, TestConfig(p=p, **base_cfg)) for p in args.p_range
        ]
        if args.format == "csv":
            _emit(report_csv(reports), args.out)
        else:
            ps = [str(r.p_used) for r in reports]
            u1 = [f"{100.0 * r.pvalue_U1:.2f}" for r in reports]
            u2 = [f"{100.0 * r.pvalue_U2:.2f}" for r in reports]
            width = max(len(c) for c in ps + u1 + u2)
            lines = [
                "p-values in percent by dimension p",
                "p   " + "  ".join(c.rjust(width) for c in ps),
                "U1  " + "  ".join(c.rjust(width) for c in u1),
                "U2  " + "  ".join(c.rjust(width) for c in u2),
            ]
            _emit("\n".join(lines) + "\n", args.out)
        return 0

    report = run_two_sample_test(s1, s2, TestConfig(p=args.p, **base_cfg))
    if args.format == "csv":
        _emit(report_csv([report]), args.out)
    else:
        lines = report_kv_lines(report)
        lines.append(f"pvalue_U1_percent={100.0 * report.pvalue_U1:.4f}")
        lines.append(f"pvalue_U2_percent={100.0 * report.pvalue_U2:.4f}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_simulate(args) -> int:
    grid = make_grid(args.t)
    rng = RngSeed(args.seed, args.stream)
    if args.model == "bridge":
        sample = brownian_sample(grid, args.n, rng)
    else:
        cfg = Far1Config(gaussian_far1_kernel(grid), burn_in=args.burn_in)
        sample = far1_sample(args.n, cfg, rng)
    if args.shift:
        sample = add_alternative_mean(sample, args.shift)
    write_curves_csv(args.out, sample, include_grid=args.with_grid)
    return 0


def cmd_power(args) -> int:
    spec = ExperimentSpec(
        n=args.n,
        m=args.m,
        error_model=args.error_model,
        a_grid=args.a_grid,
        alphas=args.alphas,
        reps=args.reps,
        grid_t=args.t,
        p=args.p,
        threshold=args.threshold,
        k_basis=args.k_basis,
        mc_reps=args.mc_reps,
        burn_in=args.burn_in,
        seed=RngSeed(args.seed, args.stream),
    )
    table = run_experiment(spec, workers=args.workers, log_path=args.log)
    text = power_table_csv(table) if args.format == "csv" else format_table(table)
    _emit(text, args.out)
    return 0


def cmd_lrcov(args) -> int:
    sample, _ = read_curves_csv(args.sample)
    surface = longrun_cov(sample, kernel_by_name(args.kernel), args.bandwidth)
    if args.out:
        write_surface_csv(args.out, surface)
    else:
        sys.stdout.write(
            "\n".join(",".join(repr(float(v)) for v in row) for row in surface.values) + "\n"
        )
    return 0


def _add_tuning_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kernel", choices=["flat-top", "bartlett", "truncated"], default="flat-top")
    p.add_argument("--bandwidth", type=_parse_bandwidth, default=Bandwidth("cube_root"),
                   help="'cube-root' or a fixed positive value")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ftsmean", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="two-sample mean test on two curve CSV files")
    p_test.add_argument("sample1")
    p_test.add_argument("sample2")
    _add_tuning_flags(p_test)
    p_test.add_argument("--p", type=_parse_p, default=None, help="'auto' or a positive integer")
    p_test.add_argument("--p-range", type=_parse_p_range, default=None, help="e.g. 1..9")
    p_test.add_argument("--threshold", type=float, default=0.85)
    p_test.add_argument("--k-basis", type=int, default=49)
    p_test.add_argument("--mc-reps", type=int, default=10_000)
    p_test.add_argument("--seed", type=int, default=0)
    p_test.add_argument("--stream", type=int, default=0)
    p_test.add_argument("--dependent", type=_parse_bool, default=True)
    p_test.add_argument("--format", choices=["text", "csv"], default="text")
    p_test.add_argument("--out", default=None)
    p_test.set_defaults(func=cmd_test)

    p_sim = sub.add_parser("simulate", help="write a simulated curve sample to CSV")
    p_sim.add_argument("--model", choices=["bridge", "far1"], required=True)
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument("--t", type=int, default=100)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--stream", type=int, default=0)
    p_sim.add_argument("--shift", type=float, default=0.0)
    p_sim.add_argument("--burn-in", type=int, default=50)
    p_sim.add_argument("--with-grid", action="store_true")
    p_sim.add_argument("--out", required=True)
    p_sim.set_defaults(func=cmd_simulate)

    p_pow = sub.add_parser("power", help="size/power experiment table")
    p_pow.add_argument("--n", type=int, default=100)
    p_pow.add_argument("--m", type=int, default=200)
    p_pow.add_argument("--error-model", choices=list(ERROR_MODELS), default="iid_bridge")
    p_pow.add_argument("--a-grid", type=_parse_float_list, default=(0.0,))
    p_pow.add_argument("--alphas", type=_parse_float_list, default=(0.01, 0.05, 0.10))
    p_pow.add_argument("--reps", type=int, default=1000)
    p_pow.add_argument("--t", type=int, default=100)
    p_pow.add_argument("--p", type=_parse_p, default=None)
    p_pow.add_argument("--threshold", type=float, default=0.85)
    p_pow.add_argument("--k-basis", type=int, default=49)
    p_pow.add_argument("--mc-reps", type=int, default=2000)
    p_pow.add_argument("--burn-in", type=int, default=50)
    p_pow.add_argument("--seed", type=int, default=0)
    p_pow.add_argument("--stream", type=int, default=0)
    p_pow.add_argument("--workers", type=int, default=1)
    p_pow.add_argument("--log", default=None, help="per-replication CSV log path")
    p_pow.add_argument("--format", choices=["text", "csv"], default="text")
    p_pow.add_argument("--out", default=None)
    p_pow.set_defaults(func=cmd_power)

    p_lr = sub.add_parser("lrcov", help="long-run covariance surface of one sample")
    p_lr.add_argument("sample")
    _add_tuning_flags(p_lr)
    p_lr.add_argument("--out", default=None)
    p_lr.set_defaults(func=cmd_lrcov)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CurveCsvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GridMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (
        DegenerateSpectrumError,
        DegenerateEigenvalueError,
        NonstationaryKernelError,
        FloatingPointError,
        np.linalg.LinAlgError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
