"""Two-sample mean-equality tests for dependent functional samples.

The full-integral statistic U compares the two sample mean curves in L2.
Its projection versions use the eigenpairs of the pooled long-run
covariance kernel: U1 sums squared projections of the mean difference on
the leading eigenfunctions (null: a weighted sum of chi-square(1) terms,
calibrated by Monte Carlo with plugged-in eigenvalues), and U2 normalizes
each squared projection by its eigenvalue (null: chi-square(p)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .curves import FunctionalSample, fourier_basis, max_alias_free_count, sample_mean
from .eigen import EigenSystem, project_surface, select_p, symmetric_eig
from .errors import DegenerateEigenvalueError, GridMismatchError
from .longrun import Bandwidth, Surface, WeightKernel, flat_top_kernel, iid_cov, pooled_longrun
from .simulate import RngSeed

__all__ = [
    "TestConfig",
    "TestReport",
    "statistic_U",
    "projections",
    "statistic_U1",
    "statistic_U2",
    "pvalue_chisq",
    "pvalue_mc",
    "mc_null_sample",
    "run_two_sample_test",
    "report_kv_lines",
    "report_csv",
]

EIGENVALUE_FLOOR = 1e-12  # relative to the top eigenvalue


@dataclass(frozen=True)
class TestConfig:
    """Tuning knobs for the two-sample test pipeline.

    p=None selects the dimension automatically from the cumulative
    variance rule; p_rule picks whether that rule sees each sample's own
    covariance spectrum (taking the max of the two answers) or the pooled
    kernel's spectrum.
    """

    __test__ = False  # keep pytest from collecting this as a test class

    p: int | None = None
    threshold: float = 0.85
    kernel: WeightKernel = field(default_factory=flat_top_kernel)
    bandwidth: Bandwidth = field(default_factory=Bandwidth)
    dependent: bool = True
    mc_reps: int = 10_000
    seed: RngSeed = field(default_factory=RngSeed)
    k_basis: int = 49
    p_rule: str = "per_sample"

    def __post_init__(self):
        if self.p is not None and self.p < 1:
            raise ValueError("p must be a positive integer or None for auto")
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError("threshold must be in (0, 1]")
        if self.mc_reps < 100:
            raise ValueError("mc_reps must be >= 100")
        if self.k_basis < 1:
            raise ValueError("k_basis must be >= 1")
        if self.p_rule not in ("per_sample", "pooled"):
            raise ValueError("p_rule must be 'per_sample' or 'pooled'")


@dataclass(frozen=True)
class TestReport:
    """Outcome of one two-sample test, with the full tuning audit."""

    __test__ = False

    U_full: float
    U1: float
    U2: float
    p_used: int
    eigenvalues_used: tuple[float, ...]
    pvalue_U1: float
    pvalue_U2: float
    ahat: tuple[float, ...]
    audit: dict

    def __post_init__(self):
        if not (0.0 <= self.pvalue_U1 <= 1.0 and 0.0 <= self.pvalue_U2 <= 1.0):
            raise ValueError("p-values must be in [0, 1]")
        if min(self.U_full, self.U1, self.U2) < 0.0:
            raise ValueError("statistics must be nonnegative")
        if self.U1 > self.U_full + 1e-8:
            raise ValueError("U1 cannot exceed the full integral statistic")


def statistic_U(s1: FunctionalSample, s2: FunctionalSample) -> float:
    """Full statistic: NM/(N+M) times the squared L2 distance of the mean curves."""
    if s1.grid != s2.grid:
        raise GridMismatchError("samples must share a grid")
    n, m = s1.size, s2.size
    diff = sample_mean(s1).values - sample_mean(s2).values
    integral = float(np.dot(s1.grid.trapezoid_weights, diff * diff))
    return n * m / (n + m) * integral


def projections(
    s1: FunctionalSample, s2: FunctionalSample, eig: EigenSystem, p: int
) -> np.ndarray:
    """Projections of the mean-curve difference onto the leading p eigenfunctions.

    Computed through basis coefficients: per-curve coefficients are
    averaged within each sample, differenced, and contracted with the
    eigenvector coefficient rows.
    """
    if not 1 <= p <= eig.count:
        raise ValueError(f"p must be in 1..{eig.count}, got {p}")
    if s1.grid != s2.grid or s1.grid != eig.basis.grid:
        raise GridMismatchError("samples and eigensystem must share a grid")
    ew = eig.basis.values * eig.basis.grid.trapezoid_weights  # (K, T)
    coeff1 = s1.values @ ew.T  # (N, K) basis coefficients per curve
    coeff2 = s2.values @ ew.T
    b = coeff1.mean(axis=0) - coeff2.mean(axis=0)
    return eig.eigenvectors[:p] @ b


def statistic_U1(ahat, n: int, m: int) -> float:
    """Sum of squared projections, scaled by NM/(N+M)."""
    a = np.asarray(ahat, dtype=float)
    if a.size == 0:
        raise ValueError("need at least one projection")
    return n * m / (n + m) * float(np.sum(a * a))


def statistic_U2(ahat, eigenvalues, n: int, m: int) -> float:
    """Eigenvalue-normalized sum of squared projections, scaled by NM/(N+M)."""
    a = np.asarray(ahat, dtype=float)
    lam = np.asarray(eigenvalues, dtype=float)
    if a.size == 0 or lam.size != a.size:
        raise ValueError("projections and eigenvalues must have equal positive length")
    floor = EIGENVALUE_FLOOR * lam[0] if lam[0] > 0 else 0.0
    bad = np.nonzero(lam <= floor)[0]
    if lam[0] <= 0.0 or bad.size:
        index = int(bad[0]) + 1 if bad.size else 1
        raise DegenerateEigenvalueError(
            f"eigenvalue {index} is at or below the floor {floor:.3e}; "
            "reduce p or inspect the pooled kernel"
        )
    return n * m / (n + m) * float(np.sum(a * a / lam))


def pvalue_chisq(u2: float, p: int) -> float:
    """Upper tail of chi-square(p) via the regularized incomplete gamma function."""
    if u2 < 0:
        raise ValueError("statistic must be nonnegative")
    if p < 1:
        raise ValueError("degrees of freedom must be >= 1")
    return float(special.gammaincc(p / 2.0, u2 / 2.0))


def mc_null_sample(eigenvalues, reps: int, rng: RngSeed) -> np.ndarray:
    """reps draws of sum_i lambda_i * N_i^2 with independent standard normals."""
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.size == 0:
        raise ValueError("need at least one eigenvalue")
    if np.any(lam < 0):
        raise ValueError("eigenvalues must be nonnegative")
    z = rng.generator().standard_normal((reps, lam.size))
    return (z * z) @ lam


def pvalue_mc(u1: float, eigenvalues, reps: int, rng: RngSeed) -> float:
    """Monte Carlo tail probability of the weighted chi-square null at u1.

    Uses the (1 + exceedances) / (reps + 1) estimator, so the result is
    never exactly zero.
    """
    if reps < 100:
        raise ValueError("reps must be >= 100")
    draws = mc_null_sample(eigenvalues, reps, rng)
    return (1.0 + int(np.count_nonzero(draws >= u1))) / (reps + 1.0)


def _per_sample_p(s: FunctionalSample, basis, threshold: float) -> int:
    spectrum = symmetric_eig(project_surface(iid_cov(s), basis)).eigenvalues
    return select_p(spectrum, threshold)


def run_two_sample_test(
    s1: FunctionalSample, s2: FunctionalSample, cfg: TestConfig = TestConfig()
) -> TestReport:
    """Full pipeline: pooled kernel, projected eigenproblem, statistics, p-values."""
    if s1.grid != s2.grid:
        raise GridMismatchError("samples must share a grid")
    if s1.size < 2 or s2.size < 2:
        from .errors import InsufficientSampleError

        raise InsufficientSampleError("both samples need at least 2 curves")
    n, m = s1.size, s2.size
    grid = s1.grid

    # basis counts beyond the alias-free limit of the grid would break the
    # quadrature orthonormality that the projection relies on
    k_basis = min(cfg.k_basis, max_alias_free_count(grid))
    basis = fourier_basis(grid, k_basis)

    pooled = pooled_longrun(s1, s2, cfg.kernel, cfg.bandwidth, cfg.dependent)
    eig = symmetric_eig(project_surface(pooled, basis))

    if cfg.p is not None:
        p = cfg.p
        if p > eig.count:
            raise ValueError(f"p={p} exceeds the {eig.count} available eigenpairs")
    elif cfg.p_rule == "pooled":
        p = select_p(eig.eigenvalues, cfg.threshold)
    else:
        p = max(
            _per_sample_p(s1, basis, cfg.threshold),
            _per_sample_p(s2, basis, cfg.threshold),
        )

    ahat = projections(s1, s2, eig, p)
    lam = eig.eigenvalues[:p]
    u_full = statistic_U(s1, s2)
    u1 = statistic_U1(ahat, n, m)
    u2 = statistic_U2(ahat, lam, n, m)

    audit = {
        "n": n,
        "m": m,
        "grid_size": grid.size,
        "k_basis": k_basis,
        "kernel": cfg.kernel.shape,
        "bandwidth_rule": cfg.bandwidth.rule,
        "h1": cfg.bandwidth.resolve(n) if cfg.dependent else None,
        "h2": cfg.bandwidth.resolve(m) if cfg.dependent else None,
        "theta": n / (n + m),
        "dependent": cfg.dependent,
        "p_rule": "explicit" if cfg.p is not None else cfg.p_rule,
        "threshold": cfg.threshold,
        "mc_reps": cfg.mc_reps,
        "seed": cfg.seed.seed,
        "stream": cfg.seed.stream,
        "projection_asymmetry": eig.asymmetry,
    }
    return TestReport(
        U_full=u_full,
        U1=u1,
        U2=u2,
        p_used=p,
        eigenvalues_used=tuple(float(v) for v in lam),
        pvalue_U1=pvalue_mc(u1, lam, cfg.mc_reps, cfg.seed),
        pvalue_U2=pvalue_chisq(u2, p),
        ahat=tuple(float(a) for a in ahat),
        audit=audit,
    )


def report_kv_lines(report: TestReport) -> list[str]:
    """Line-oriented key=value serialization (raw fractions, full precision)."""
    lines = [
        f"U_full={report.U_full!r}",
        f"U1={report.U1!r}",
        f"U2={report.U2!r}",
        f"p_used={report.p_used}",
        f"pvalue_U1={report.pvalue_U1!r}",
        f"pvalue_U2={report.pvalue_U2!r}",
        "eigenvalues_used=" + ",".join(repr(v) for v in report.eigenvalues_used),
        "ahat=" + ",".join(repr(v) for v in report.ahat),
    ]
    for key, value in report.audit.items():
        lines.append(f"audit.{key}={value}")
    return lines


def report_csv(reports: list[TestReport]) -> str:
    """CSV rendering, one row per report (e.g. per tested p); raw fractions."""
    header = "p,U_full,U1,U2,pvalue_U1,pvalue_U2"
    rows = [header]
    for r in reports:
        rows.append(
            f"{r.p_used},{r.U_full!r},{r.U1!r},{r.U2!r},{r.pvalue_U1!r},{r.pvalue_U2!r}"
        )
    return "\n".join(rows) + "\n"
