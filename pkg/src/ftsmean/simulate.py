"""Seeded generators for the simulation study processes.

Brownian bridges are built from cumulative Gaussian increments with the
terminal correction B(t) = W(t) - t*W(1), which gives the exact bridge
covariance min(t,s) - t*s at the grid points.  Functional AR(1) samples
follow eps_i = Psi(eps_{i-1}) + B_i with the operator applied by
quadrature and a burn-in to wash out the start at zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import Curve, FunctionalSample, Grid
from .errors import NonstationaryKernelError
from .longrun import Surface

__all__ = [
    "RngSeed",
    "Far1Config",
    "brownian_bridge",
    "brownian_sample",
    "gaussian_far1_kernel",
    "far1_sample",
    "add_alternative_mean",
]


@dataclass(frozen=True)
class RngSeed:
    """Counter-based RNG identity; identical (seed, stream) pairs replay identically.

    Backed by Philox, so distinct stream indices give statistically
    independent streams under any parallel schedule.
    """

    seed: int = 0
    stream: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def with_stream(self, stream: int) -> "RngSeed":
        return RngSeed(self.seed, stream)


def _bridge_matrix(grid: Grid, n: int, rng: np.random.Generator) -> np.ndarray:
    # increments have variance = spacing, so Var(W(t_j)) = t_j exactly
    T = grid.size
    incr = rng.standard_normal((n, T - 1)) * np.sqrt(grid.spacing)
    w = np.concatenate([np.zeros((n, 1)), np.cumsum(incr, axis=1)], axis=1)
    return w - grid.points * w[:, -1:]


def brownian_bridge(grid: Grid, rng: RngSeed) -> Curve:
    """One Brownian bridge path on the grid: B(0) = B(1) = 0 exactly."""
    return Curve(grid, _bridge_matrix(grid, 1, rng.generator())[0])


def brownian_sample(grid: Grid, n: int, rng: RngSeed) -> FunctionalSample:
    """n independent Brownian bridge curves drawn from one stream."""
    if n < 1:
        raise ValueError("need n >= 1 curves")
    return FunctionalSample(grid, _bridge_matrix(grid, n, rng.generator()))


def gaussian_far1_kernel(grid: Grid) -> Surface:
    """Gaussian autoregression kernel exp(-(t^2+s^2)/2) / (4 * int_0^1 exp(-x^2) dx).

    The normalizing integral is evaluated by trapezoid quadrature on 10^5
    subintervals.  The kernel's Hilbert-Schmidt norm is 1/4.
    """
    x = np.linspace(0.0, 1.0, 100_001)
    z = np.trapezoid(np.exp(-(x**2)), x)
    t = grid.points
    vals = np.exp(-0.5 * (t[:, None] ** 2 + t[None, :] ** 2)) / (4.0 * z)
    return Surface(grid, vals)


@dataclass(frozen=True)
class Far1Config:
    """Functional AR(1) setup: integral kernel plus burn-in length."""

    kernel_surface: Surface
    burn_in: int = 50

    def __post_init__(self):
        if self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")
        hs = self.kernel_surface.hs_norm()
        if hs >= 1.0:
            raise NonstationaryKernelError(
                f"kernel Hilbert-Schmidt norm {hs:.4f} >= 1 has no stationary solution"
            )


def far1_sample(n: int, cfg: Far1Config, rng: RngSeed) -> FunctionalSample:
    """n curves from the FAR(1) recursion with Brownian bridge innovations.

    The recursion starts at the zero curve; the first burn_in iterates are
    discarded.  With burn_in=0 and a zero kernel the output equals the raw
    innovation sequence exactly.
    """
    if n < 1:
        raise ValueError("need n >= 1 curves")
    hs = cfg.kernel_surface.hs_norm()
    if hs >= 1.0:
        raise NonstationaryKernelError(
            f"kernel Hilbert-Schmidt norm {hs:.4f} >= 1 has no stationary solution"
        )
    grid = cfg.kernel_surface.grid
    # quadrature form of the integral operator: (A @ f) approximates
    # int psi(t, s) f(s) ds
    A = cfg.kernel_surface.values * grid.trapezoid_weights
    innovations = _bridge_matrix(grid, cfg.burn_in + n, rng.generator())
    out = np.empty((n, grid.size))
    state = np.zeros(grid.size)
    for i in range(cfg.burn_in + n):
        state = A @ state + innovations[i]
        if i >= cfg.burn_in:
            out[i - cfg.burn_in] = state
    return FunctionalSample(grid, out)


def add_alternative_mean(s: FunctionalSample, a: float) -> FunctionalSample:
    """Shift every curve by the bump a*t*(1-t); vanishes at both endpoints."""
    t = s.grid.points
    return FunctionalSample(s.grid, s.values + a * t * (1.0 - t))
