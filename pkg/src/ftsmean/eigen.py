"""Basis projection of integral covariance operators and the dimension rule.

An integral eigenproblem for a surface k(t,s) is reduced to a dense
symmetric matrix eigenproblem by projecting onto an orthonormal basis:
the matrix entry (k, l) is the double quadrature of
surface(t,s)*e_k(t)*e_l(s), and eigenfunctions are rebuilt as coefficient
combinations of the basis functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import BasisSet, Curve, _frozen
from .errors import DegenerateSpectrumError, GridMismatchError
from .longrun import Surface

__all__ = [
    "ProjectedOperator",
    "EigenSystem",
    "project_surface",
    "symmetric_eig",
    "select_p",
    "eigensystem_csv",
]


@dataclass(frozen=True, eq=False)
class ProjectedOperator:
    """Dense matrix of basis-pair quadratures of a covariance surface."""

    basis: BasisSet
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        object.__setattr__(self, "matrix", m)
        k = self.basis.count
        if m.shape != (k, k):
            raise ValueError(f"projected matrix must be {k}x{k}, got {m.shape}")


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Descending eigenvalues with orthonormal basis-coefficient eigenvectors.

    `eigenvectors` has one coefficient row per eigenpair; `asymmetry` is
    the max absolute asymmetry of the matrix that was symmetrized before
    the solve.
    """

    basis: BasisSet
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # row m = coefficients of eigenfunction m
    asymmetry: float = 0.0

    def __post_init__(self):
        vals = _frozen(self.eigenvalues)
        vecs = _frozen(self.eigenvectors)
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "eigenvectors", vecs)
        if vals.ndim != 1 or vecs.shape != (vals.size, self.basis.count):
            raise ValueError("eigenvector rows must match eigenvalues and basis count")
        if np.any(np.diff(vals) > 0):
            raise ValueError("eigenvalues must be sorted in descending order")

    @property
    def count(self) -> int:
        return self.eigenvalues.size

    def eigenfunction_matrix(self) -> np.ndarray:
        """Eigenfunctions on the grid: row m = sum_l coeff[m, l] * e_l."""
        return self.eigenvectors @ self.basis.values

    @property
    def eigenfunctions(self) -> tuple[Curve, ...]:
        return tuple(Curve(self.basis.grid, row) for row in self.eigenfunction_matrix())


def project_surface(surf: Surface, basis: BasisSet) -> ProjectedOperator:
    """Project a surface onto basis pairs by iterated trapezoid quadrature."""
    if surf.grid != basis.grid:
        raise GridMismatchError("surface and basis must share a grid")
    ew = basis.values * basis.grid.trapezoid_weights
    return ProjectedOperator(basis, ew @ surf.values @ ew.T)


def symmetric_eig(op: ProjectedOperator) -> EigenSystem:
    """Full spectral decomposition of the (symmetrized) projected matrix.

    The matrix is symmetrized as (A + A^T)/2 first and the dropped
    asymmetry magnitude is recorded on the result.
    """
    a = op.matrix
    if not np.all(np.isfinite(a)):
        raise FloatingPointError("projected matrix contains non-finite entries")
    asym = float(np.abs(a - a.T).max())
    sym = 0.5 * (a + a.T)
    vals, vecs = np.linalg.eigh(sym)
    order = np.argsort(vals)[::-1]
    return EigenSystem(
        basis=op.basis,
        eigenvalues=vals[order],
        eigenvectors=vecs[:, order].T,
        asymmetry=asym,
    )


def select_p(eigenvalues, threshold: float) -> int:
    """Smallest p whose leading eigenvalues explain >= threshold of total variance.

    Negative eigenvalues are clipped to zero for the ratio only.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    vals = np.asarray(eigenvalues, dtype=float)
    if vals.size == 0:
        raise DegenerateSpectrumError("empty spectrum")
    clipped = np.clip(vals, 0.0, None)
    cumulative = np.cumsum(clipped)
    total = cumulative[-1]
    if total <= 0.0:
        raise DegenerateSpectrumError("no positive eigenvalue in the spectrum")
    # final ratio is exactly 1.0 by construction, so p never exceeds the count
    ratios = cumulative / total
    return int(np.searchsorted(ratios, threshold - 1e-15) + 1)


def eigensystem_csv(eig: EigenSystem, count: int | None = None) -> str:
    """One row per eigenpair: eigenvalue followed by its coefficient vector."""
    k = eig.count if count is None else min(count, eig.count)
    lines = []
    for m in range(k):
        fields = [repr(float(eig.eigenvalues[m]))]
        fields += [repr(float(c)) for c in eig.eigenvectors[m]]
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"
