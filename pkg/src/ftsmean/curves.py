"""Functional data model: grids on [0, 1], curves, samples, quadrature and the Fourier basis.

Curves are stored as values on a shared equispaced grid (default T=100
elsewhere in the package); all integrals are trapezoid-rule quadratures
on that grid.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CurveCsvError, GridMismatchError

__all__ = [
    "Grid",
    "Curve",
    "FunctionalSample",
    "BasisSet",
    "make_grid",
    "inner_product",
    "sample_mean",
    "fourier_basis",
    "resample",
    "read_curves_csv",
    "write_curves_csv",
]

_SPACING_RTOL = 1e-12


def _frozen(a) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class Grid:
    """Equispaced abscissae on [0, 1], endpoints included, size >= 2."""

    points: np.ndarray

    def __post_init__(self):
        pts = _frozen(self.points)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("grid needs at least 2 points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("grid points must be finite")
        if pts[0] != 0.0 or pts[-1] != 1.0:
            raise ValueError("grid must start at 0 and end at 1")
        steps = np.diff(pts)
        if np.any(steps <= 0):
            raise ValueError("grid points must be strictly increasing")
        h = 1.0 / (pts.size - 1)
        if np.max(np.abs(steps - h)) > _SPACING_RTOL * h:
            raise ValueError("grid spacing must be constant")

    @property
    def size(self) -> int:
        return self.points.size

    @property
    def spacing(self) -> float:
        return 1.0 / (self.points.size - 1)

    @cached_property
    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.size, self.spacing)
        w[0] *= 0.5
        w[-1] *= 0.5
        return _frozen(w)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return self.points.size == other.points.size and np.array_equal(
            self.points, other.points
        )

    def __hash__(self) -> int:
        return hash(self.points.tobytes())


def make_grid(T: int) -> Grid:
    """Equispaced grid 0, 1/(T-1), ..., 1."""
    if T < 2:
        raise ValueError(f"grid size must be >= 2, got {T}")
    return Grid(np.linspace(0.0, 1.0, T))


def _require_same_grid(a, b):
    if a.grid != b.grid:
        raise GridMismatchError(
            f"operands on different grids ({a.grid.size} vs {b.grid.size} points)"
        )


@dataclass(frozen=True, eq=False)
class Curve:
    """One functional observation: values at the grid points."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        object.__setattr__(self, "values", v)
        if v.ndim != 1 or v.size != self.grid.size:
            raise ValueError("curve values must match the grid size")
        if not np.all(np.isfinite(v)):
            raise ValueError("curve values must be finite")


@dataclass(frozen=True, eq=False)
class FunctionalSample:
    """Ordered collection of curves on one shared grid; order is time order.

    Stored internally as an (N, T) matrix; `curves` exposes the row view.
    """

    grid: Grid
    values: np.ndarray  # shape (N, T)

    def __post_init__(self):
        v = _frozen(self.values)
        object.__setattr__(self, "values", v)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] != self.grid.size:
            raise ValueError("sample values must be a nonempty (N, T) matrix on the grid")
        if not np.all(np.isfinite(v)):
            raise ValueError("sample values must be finite")

    @classmethod
    def from_curves(cls, curves) -> "FunctionalSample":
        curves = list(curves)
        if not curves:
            raise ValueError("sample must contain at least one curve")
        grid = curves[0].grid
        for c in curves[1:]:
            _require_same_grid(curves[0], c)
        return cls(grid, np.stack([c.values for c in curves]))

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @property
    def curves(self) -> tuple[Curve, ...]:
        return tuple(Curve(self.grid, row) for row in self.values)


@dataclass(frozen=True, eq=False)
class BasisSet:
    """Orthonormal basis functions evaluated on a grid, stored as a (count, T) matrix."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        object.__setattr__(self, "values", v)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] != self.grid.size:
            raise ValueError("basis values must be a (count, T) matrix on the grid")

    @property
    def count(self) -> int:
        return self.values.shape[0]

    @property
    def functions(self) -> tuple[Curve, ...]:
        return tuple(Curve(self.grid, row) for row in self.values)

    def gram_matrix(self) -> np.ndarray:
        """Pairwise quadrature inner products; identity up to quadrature error."""
        w = self.grid.trapezoid_weights
        return (self.values * w) @ self.values.T


def inner_product(f: Curve, g: Curve) -> float:
    """Trapezoid-rule approximation of the L2 inner product on [0, 1]."""
    _require_same_grid(f, g)
    return float(np.dot(f.grid.trapezoid_weights, f.values * g.values))


def sample_mean(s: FunctionalSample) -> Curve:
    """Pointwise average curve of the sample."""
    return Curve(s.grid, s.values.mean(axis=0))


def fourier_basis(grid: Grid, count: int) -> BasisSet:
    """First `count` functions of the Fourier system on [0, 1].

    Ordering: constant 1 first, then sqrt(2)*sin(2*pi*k*t) and
    sqrt(2)*cos(2*pi*k*t) pairs for k = 1, 2, ...  On an equispaced grid
    the trapezoid Gram matrix of this system is exact (identity to
    roundoff) as long as twice the top frequency stays below T-1.
    """
    if count < 1:
        raise ValueError(f"basis count must be >= 1, got {count}")
    t = grid.points
    vals = np.empty((count, grid.size))
    vals[0] = 1.0
    root2 = np.sqrt(2.0)
    for row in range(1, count):
        k = (row + 1) // 2
        if row % 2 == 1:
            vals[row] = root2 * np.sin(2.0 * np.pi * k * t)
        else:
            vals[row] = root2 * np.cos(2.0 * np.pi * k * t)
    return BasisSet(grid, vals)


def max_alias_free_count(grid: Grid) -> int:
    """Largest Fourier basis count whose trapezoid Gram on this grid is exact.

    Products of basis functions contain frequencies up to twice the top
    frequency; trapezoid sums alias once that reaches T-1.
    """
    top_freq = max((grid.size - 2) // 2, 0)
    return 2 * top_freq + 1


def resample(c: Curve, target: Grid) -> Curve:
    """Linear interpolation of a curve onto another grid; endpoints are preserved."""
    if c.grid == target:
        return Curve(target, c.values)
    return Curve(target, np.interp(target.points, c.grid.points, c.values))


def resample_sample(s: FunctionalSample, target: Grid) -> FunctionalSample:
    if s.grid == target:
        return s
    vals = np.stack([np.interp(target.points, s.grid.points, row) for row in s.values])
    return FunctionalSample(target, vals)


# CSV format: one curve per row of comma-separated decimal values; an optional
# first row whose first field is the literal token "t:" carries the grid
# abscissae in the remaining fields.

_GRID_TOKEN = "t:"


def _format_row(values) -> str:
    return ",".join(repr(float(v)) for v in values)


def write_curves_csv(path, s: FunctionalSample, include_grid: bool = False) -> None:
    with open(path, "w") as fh:
        if include_grid:
            fh.write(_GRID_TOKEN + "," + _format_row(s.grid.points) + "\n")
        for row in s.values:
            fh.write(_format_row(row) + "\n")


def parse_curves_csv(text: str) -> tuple[FunctionalSample, bool]:
    """Parse CSV text into a sample; returns (sample, had_explicit_grid)."""
    rows: list[list[str]] = []
    line_numbers: list[int] = []
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line:
            continue
        rows.append([f.strip() for f in line.split(",")])
        line_numbers.append(lineno)
    if not rows:
        raise CurveCsvError(1, "no curve rows found")

    grid = None
    had_grid = False
    if rows[0][0] == _GRID_TOKEN:
        had_grid = True
        try:
            pts = np.array([float(f) for f in rows[0][1:]])
        except ValueError as exc:
            raise CurveCsvError(line_numbers[0], f"bad grid value: {exc}") from exc
        try:
            grid = Grid(pts)
        except ValueError as exc:
            raise CurveCsvError(line_numbers[0], f"bad grid header: {exc}") from exc
        rows = rows[1:]
        line_numbers = line_numbers[1:]
        if not rows:
            raise CurveCsvError(line_numbers[0] if line_numbers else 2, "no curve rows after grid header")

    width = len(rows[0])
    data = np.empty((len(rows), width))
    for i, (fields, lineno) in enumerate(zip(rows, line_numbers)):
        if len(fields) != width:
            raise CurveCsvError(lineno, f"expected {width} fields, got {len(fields)}")
        try:
            data[i] = [float(f) for f in fields]
        except ValueError as exc:
            raise CurveCsvError(lineno, f"bad numeric value: {exc}") from exc

    if grid is None:
        if width < 2:
            raise CurveCsvError(line_numbers[0], "curves need at least 2 values per row")
        grid = make_grid(width)
    elif grid.size != width:
        raise CurveCsvError(line_numbers[0], f"grid header has {grid.size} points but rows have {width} fields")
    return FunctionalSample(grid, data), had_grid


def read_curves_csv(path) -> tuple[FunctionalSample, bool]:
    with open(path) as fh:
        return parse_curves_csv(fh.read())
