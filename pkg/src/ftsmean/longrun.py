"""Autocovariance surfaces and long-run covariance kernel estimators.

The long-run estimator sums lag-weighted autocovariance surfaces,

    chat_N(t,s) = gamma_0(t,s) + sum_{i>=1} K(i/h) * (gamma_i(t,s) + gamma_i(s,t)),

with a compactly supported weight function K and bandwidth h growing like
the cube root of the sample size.  The pooled two-sample kernel mixes the
per-sample estimates with weights (1-theta) and theta, theta = N/(N+M).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curves import FunctionalSample, Grid, _frozen
from .errors import InsufficientSampleError, InvalidLagError

__all__ = [
    "Surface",
    "WeightKernel",
    "Bandwidth",
    "autocov_surface",
    "flat_top_kernel",
    "bartlett_kernel",
    "truncated_kernel",
    "kernel_by_name",
    "longrun_cov",
    "iid_cov",
    "pooled_longrun",
    "write_surface_csv",
    "read_surface_csv",
]


@dataclass(frozen=True, eq=False)
class Surface:
    """Discretized bivariate kernel k(t, s) on the grid x grid lattice."""

    grid: Grid
    values: np.ndarray  # shape (T, T), entry (u, v) = k(t_u, t_v)

    def __post_init__(self):
        v = _frozen(self.values)
        object.__setattr__(self, "values", v)
        T = self.grid.size
        if v.shape != (T, T):
            raise ValueError(f"surface must be {T}x{T} on its grid, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("surface values must be finite")

    def is_symmetric(self, rtol: float = 1e-10) -> bool:
        scale = np.abs(self.values).max()
        if scale == 0.0:
            return True
        return float(np.abs(self.values - self.values.T).max()) <= rtol * scale

    def hs_norm(self) -> float:
        """Quadrature Hilbert-Schmidt norm (integral of the squared surface)^(1/2)."""
        w = self.grid.trapezoid_weights
        return float(np.sqrt(np.einsum("u,v,uv->", w, w, self.values**2)))

    def l2_distance(self, other: "Surface") -> float:
        """Quadrature L2 distance between two surfaces on the same grid."""
        if self.grid != other.grid:
            raise ValueError("surfaces on different grids")
        w = self.grid.trapezoid_weights
        d = self.values - other.values
        return float(np.sqrt(np.einsum("u,v,uv->", w, w, d**2)))


@dataclass(frozen=True)
class WeightKernel:
    """Lag-weight function for long-run covariance estimation.

    K(0)=1, bounded, continuous on its support, and K(u)=0 for
    |u| >= support_radius.
    """

    shape: str
    support_radius: float
    _evaluate: Callable[[float], float]

    def __call__(self, u: float) -> float:
        return self._evaluate(abs(u))


def flat_top_kernel() -> WeightKernel:
    """Flat top kernel: 1 on [0, 0.1), then 1.1 - |u| down to 0 at |u| = 1.1."""

    def k(u: float) -> float:
        if u < 0.1:
            return 1.0
        if u < 1.1:
            return 1.1 - u
        return 0.0

    return WeightKernel("flat_top", 1.1, k)


def bartlett_kernel() -> WeightKernel:
    def k(u: float) -> float:
        return max(0.0, 1.0 - u)

    return WeightKernel("bartlett", 1.0, k)


def truncated_kernel() -> WeightKernel:
    def k(u: float) -> float:
        return 1.0 if u <= 1.0 else 0.0

    return WeightKernel("truncated", 1.0 + 1e-12, k)


_KERNELS = {
    "flat_top": flat_top_kernel,
    "flat-top": flat_top_kernel,
    "bartlett": bartlett_kernel,
    "truncated": truncated_kernel,
}


def kernel_by_name(name: str) -> WeightKernel:
    try:
        return _KERNELS[name]()
    except KeyError:
        raise ValueError(f"unknown kernel {name!r}; choose from flat-top, bartlett, truncated")


@dataclass(frozen=True)
class Bandwidth:
    """Smoothing bandwidth rule; cube_root resolves to n^(1/3)."""

    rule: str = "cube_root"
    value: float | None = None

    def __post_init__(self):
        if self.rule not in ("cube_root", "fixed"):
            raise ValueError(f"unknown bandwidth rule {self.rule!r}")
        if self.rule == "fixed":
            if self.value is None or self.value <= 0:
                raise ValueError("fixed bandwidth needs a positive value")

    def resolve(self, n: int) -> float:
        if self.rule == "cube_root":
            return float(n) ** (1.0 / 3.0)
        return float(self.value)


def cube_root_bandwidth() -> Bandwidth:
    return Bandwidth("cube_root")


def fixed_bandwidth(h: float) -> Bandwidth:
    return Bandwidth("fixed", h)


def _centered(s: FunctionalSample) -> np.ndarray:
    return s.values - s.values.mean(axis=0)


def _autocov_matrix(centered: np.ndarray, lag: int) -> np.ndarray:
    # gamma_lag(t,s) = (1/N) sum_{j>lag} (X_j(t)-Xbar(t)) (X_{j-lag}(s)-Xbar(s));
    # divisor is N, not N-lag.
    n = centered.shape[0]
    return centered[lag:].T @ centered[: n - lag] / n


def autocov_surface(s: FunctionalSample, lag: int) -> Surface:
    """Empirical autocovariance surface at the given lag, centered at the sample mean."""
    if lag < 0 or lag >= s.size:
        raise InvalidLagError(f"lag must satisfy 0 <= lag <= N-1, got lag={lag}, N={s.size}")
    return Surface(s.grid, _autocov_matrix(_centered(s), lag))


def iid_cov(s: FunctionalSample) -> Surface:
    """Lag-0 sample covariance surface (the iid-case estimator)."""
    return autocov_surface(s, 0)


def longrun_cov(s: FunctionalSample, k: WeightKernel, bw: Bandwidth) -> Surface:
    """Kernel-weighted long-run covariance surface estimate.

    Lags with zero weight are skipped without computing their
    autocovariance surface; nonzero lags are summed in lag order.
    """
    if s.size < 2:
        raise InsufficientSampleError(f"long-run estimation needs N >= 2, got N={s.size}")
    h = bw.resolve(s.size)
    if h <= 0:
        raise ValueError("resolved bandwidth must be positive")
    centered = _centered(s)
    total = _autocov_matrix(centered, 0)
    max_lag = min(s.size - 1, math.ceil(k.support_radius * h))
    for lag in range(1, max_lag + 1):
        weight = k(lag / h)
        if weight == 0.0:
            continue
        g = _autocov_matrix(centered, lag)
        total = total + weight * (g + g.T)
    return Surface(s.grid, total)


def pooled_longrun(
    s1: FunctionalSample,
    s2: FunctionalSample,
    k: WeightKernel,
    bw_rule: Bandwidth,
    dependent: bool = True,
) -> Surface:
    """Pooled two-sample covariance kernel (1-theta)*chat_1 + theta*chat_2, theta = N/(N+M).

    Each component is the long-run estimate (dependent=True, bandwidth
    resolved per sample size) or the lag-0 iid estimate (dependent=False).
    """
    if s1.grid != s2.grid:
        from .errors import GridMismatchError

        raise GridMismatchError("the two samples must share a grid")
    n, m = s1.size, s2.size
    if dependent:
        c1 = longrun_cov(s1, k, bw_rule)
        c2 = longrun_cov(s2, k, bw_rule)
    else:
        c1 = iid_cov(s1)
        c2 = iid_cov(s2)
    theta = n / (n + m)
    return Surface(s1.grid, (1.0 - theta) * c1.values + theta * c2.values)


def write_surface_csv(path, surf: Surface) -> None:
    """T rows x T columns of full-precision decimal values."""
    with open(path, "w") as fh:
        for row in surf.values:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_surface_csv(path, grid: Grid | None = None) -> Surface:
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    if grid is None:
        from .curves import make_grid

        grid = make_grid(data.shape[0])
    return Surface(grid, data)
