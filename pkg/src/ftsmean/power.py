"""Size/power experiment harness for the two-sample tests.

For each shift amplitude a and each replication, two independent error
samples are generated (iid Brownian bridges or FAR(1)), the second is
shifted by a*t*(1-t), and the full test pipeline runs with the flat top
kernel and cube-root bandwidths.  U1 rejections use the empirical
(1-alpha) quantile of the per-replication Monte Carlo null sample; U2
rejections use chi-square(p) critical values.

Replication r draws from streams keyed by r alone, so results are
identical under any execution schedule and error draws are shared across
the a grid (common random numbers).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special

from .curves import make_grid
from .longrun import Bandwidth, flat_top_kernel
from .simulate import (
    Far1Config,
    RngSeed,
    add_alternative_mean,
    brownian_sample,
    far1_sample,
    gaussian_far1_kernel,
)
from .twosample import TestConfig, mc_null_sample, run_two_sample_test

__all__ = [
    "ExperimentSpec",
    "PowerTable",
    "run_experiment",
    "format_table",
    "power_table_csv",
    "power_table_from_csv",
]

ERROR_MODELS = ("iid_bridge", "far1")


@dataclass(frozen=True)
class ExperimentSpec:
    """One size/power experiment: sample sizes, error model, shift grid, levels."""

    n: int = 100
    m: int = 200
    error_model: str = "iid_bridge"
    a_grid: tuple[float, ...] = (0.0,)
    alphas: tuple[float, ...] = (0.01, 0.05, 0.10)
    reps: int = 1000
    grid_t: int = 100
    p: int | None = None
    threshold: float = 0.85
    k_basis: int = 49
    mc_reps: int = 2000
    burn_in: int = 50
    seed: RngSeed = field(default_factory=RngSeed)

    def __post_init__(self):
        object.__setattr__(self, "a_grid", tuple(float(a) for a in self.a_grid))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if self.error_model not in ERROR_MODELS:
            raise ValueError(f"error_model must be one of {ERROR_MODELS}")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if any(not 0.0 < a < 1.0 for a in self.alphas):
            raise ValueError("alphas must lie in (0, 1)")
        if self.n < 2 or self.m < 2:
            raise ValueError("sample sizes must be >= 2")


@dataclass(frozen=True)
class PowerTable:
    """Rejection percentages per shift amplitude, statistic and level."""

    a_grid: tuple[float, ...]
    alphas: tuple[float, ...]
    reps: int
    u1_pct: tuple[tuple[float, ...], ...]  # rows by a, columns by alpha
    u2_pct: tuple[tuple[float, ...], ...]
    u1_se: tuple[tuple[float, ...], ...]
    u2_se: tuple[tuple[float, ...], ...]


def _mc_standard_error(rate: float, reps: int) -> float:
    return 100.0 * math.sqrt(rate * (1.0 - rate) / reps)


@lru_cache(maxsize=32)
def _chi2_critical(p: int, alpha: float) -> float:
    return float(special.chdtri(p, alpha))


@lru_cache(maxsize=8)
def _far1_config(grid_t: int, burn_in: int) -> Far1Config:
    return Far1Config(gaussian_far1_kernel(make_grid(grid_t)), burn_in)


def _replication_counts(spec: ExperimentSpec, rep: int):
    """Rejection indicators for one replication across the a grid; plus log rows."""
    # three roles per replication, all keyed by rep alone; XOR with the base
    # stream is a bijection so distinct (rep, role) pairs never collide
    mask = (1 << 64) - 1
    base = int(spec.seed.stream)
    rng1 = spec.seed.with_stream((base ^ (4 * rep)) & mask)
    rng2 = spec.seed.with_stream((base ^ (4 * rep + 1)) & mask)
    rng_mc = spec.seed.with_stream((base ^ (4 * rep + 2)) & mask)

    grid = make_grid(spec.grid_t)
    if spec.error_model == "iid_bridge":
        errors1 = brownian_sample(grid, spec.n, rng1)
        errors2 = brownian_sample(grid, spec.m, rng2)
    else:
        far_cfg = _far1_config(spec.grid_t, spec.burn_in)
        errors1 = far1_sample(spec.n, far_cfg, rng1)
        errors2 = far1_sample(spec.m, far_cfg, rng2)

    cfg = TestConfig(
        p=spec.p,
        threshold=spec.threshold,
        kernel=flat_top_kernel(),
        bandwidth=Bandwidth("cube_root"),
        dependent=True,
        mc_reps=spec.mc_reps,
        seed=rng_mc,
        k_basis=spec.k_basis,
    )

    n_a, n_alpha = len(spec.a_grid), len(spec.alphas)
    u1_rej = np.zeros((n_a, n_alpha), dtype=np.int64)
    u2_rej = np.zeros((n_a, n_alpha), dtype=np.int64)
    log_rows = []
    for ia, a in enumerate(spec.a_grid):
        shifted = add_alternative_mean(errors2, a)
        report = run_two_sample_test(errors1, shifted, cfg)
        null_draws = mc_null_sample(report.eigenvalues_used, spec.mc_reps, rng_mc)
        for ja, alpha in enumerate(spec.alphas):
            u1_rej[ia, ja] = report.U1 > np.quantile(null_draws, 1.0 - alpha)
            u2_rej[ia, ja] = report.U2 > _chi2_critical(report.p_used, alpha)
        log_rows.append(
            (
                a,
                rep,
                report.p_used,
                report.U_full,
                report.U1,
                report.U2,
                report.pvalue_U1,
                report.pvalue_U2,
            )
        )
    return u1_rej, u2_rej, log_rows


def _run_chunk(spec: ExperimentSpec, rep_indices: tuple[int, ...]):
    shape = (len(spec.a_grid), len(spec.alphas))
    u1 = np.zeros(shape, dtype=np.int64)
    u2 = np.zeros(shape, dtype=np.int64)
    logs = []
    for rep in rep_indices:
        r1, r2, rows = _replication_counts(spec, rep)
        u1 += r1
        u2 += r2
        logs.extend(rows)
    return u1, u2, logs


def run_experiment(
    spec: ExperimentSpec, workers: int = 1, log_path=None
) -> PowerTable:
    """Run the experiment and tabulate rejection percentages.

    workers > 1 distributes replication chunks over processes; the result
    is identical for any worker count because every replication draws
    from its own streams and the aggregation is a commutative count.
    """
    shape = (len(spec.a_grid), len(spec.alphas))
    u1 = np.zeros(shape, dtype=np.int64)
    u2 = np.zeros(shape, dtype=np.int64)
    logs = []

    reps = list(range(spec.reps)) if spec.a_grid else []
    if workers <= 1 or len(reps) < 2:
        for rep in reps:
            r1, r2, rows = _replication_counts(spec, rep)
            u1 += r1
            u2 += r2
            logs.extend(rows)
    else:
        n_chunks = min(workers * 4, len(reps))
        chunks = [tuple(reps[i::n_chunks]) for i in range(n_chunks)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for r1, r2, rows in pool.map(_run_chunk, [spec] * len(chunks), chunks):
                u1 += r1
                u2 += r2
                logs.extend(rows)

    if log_path is not None:
        logs.sort(key=lambda row: (row[0], row[1]))
        with open(log_path, "w") as fh:
            fh.write("a,rep,p_used,U_full,U1,U2,pvalue_U1,pvalue_U2\n")
            for a, rep, p_used, uf, v1, v2, p1, p2 in logs:
                fh.write(f"{a!r},{rep},{p_used},{uf!r},{v1!r},{v2!r},{p1!r},{p2!r}\n")

    u1_rate = u1 / spec.reps
    u2_rate = u2 / spec.reps
    return PowerTable(
        a_grid=spec.a_grid,
        alphas=spec.alphas,
        reps=spec.reps,
        u1_pct=tuple(tuple(float(100.0 * r) for r in row) for row in u1_rate),
        u2_pct=tuple(tuple(float(100.0 * r) for r in row) for row in u2_rate),
        u1_se=tuple(tuple(_mc_standard_error(float(r), spec.reps) for r in row) for row in u1_rate),
        u2_se=tuple(tuple(_mc_standard_error(float(r), spec.reps) for r in row) for row in u2_rate),
    )


def format_table(t: PowerTable) -> str:
    """Aligned text table: one row per a, U1/U2 percentage columns per level."""
    headers = ["a"]
    for alpha in t.alphas:
        headers += [f"U1({alpha:g})", f"U2({alpha:g})"]
    rows = []
    for i, a in enumerate(t.a_grid):
        cells = [f"{a:g}"]
        for j in range(len(t.alphas)):
            cells += [f"{t.u1_pct[i][j]:.1f}", f"{t.u2_pct[i][j]:.1f}"]
        rows.append(cells)
    widths = [max(len(h), *(len(r[c]) for r in rows)) if rows else len(h) for c, h in enumerate(headers)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(headers, widths))]
    for cells in rows:
        lines.append("  ".join(c.rjust(w) for c, w in zip(cells, widths)))
    lines.append(f"(reps={t.reps}, rejection rates in %)")
    return "\n".join(lines) + "\n"


def power_table_csv(t: PowerTable) -> str:
    """Long-format CSV: one row per (a, alpha) with rates and MC standard errors."""
    lines = ["a,alpha,reps,u1_pct,u1_se,u2_pct,u2_se"]
    for i, a in enumerate(t.a_grid):
        for j, alpha in enumerate(t.alphas):
            lines.append(
                f"{a!r},{alpha!r},{t.reps},"
                f"{t.u1_pct[i][j]!r},{t.u1_se[i][j]!r},"
                f"{t.u2_pct[i][j]!r},{t.u2_se[i][j]!r}"
            )
    return "\n".join(lines) + "\n"


def power_table_from_csv(text: str) -> PowerTable:
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines or lines[0] != "a,alpha,reps,u1_pct,u1_se,u2_pct,u2_se":
        raise ValueError("unrecognized power table CSV header")
    a_grid: list[float] = []
    alphas: list[float] = []
    reps = 0
    cells: dict[tuple[float, float], tuple[float, float, float, float]] = {}
    for ln in lines[1:]:
        a_s, alpha_s, reps_s, u1, se1, u2, se2 = ln.split(",")
        a, alpha = float(a_s), float(alpha_s)
        reps = int(reps_s)
        if a not in a_grid:
            a_grid.append(a)
        if alpha not in alphas:
            alphas.append(alpha)
        cells[(a, alpha)] = (float(u1), float(se1), float(u2), float(se2))
    u1_pct = tuple(tuple(cells[(a, al)][0] for al in alphas) for a in a_grid)
    u1_se = tuple(tuple(cells[(a, al)][1] for al in alphas) for a in a_grid)
    u2_pct = tuple(tuple(cells[(a, al)][2] for al in alphas) for a in a_grid)
    u2_se = tuple(tuple(cells[(a, al)][3] for al in alphas) for a in a_grid)
    return PowerTable(
        a_grid=tuple(a_grid),
        alphas=tuple(alphas),
        reps=reps,
        u1_pct=u1_pct,
        u2_pct=u2_pct,
        u1_se=u1_se,
        u2_se=u2_se,
    )
