"""Correlation-matrix separability criteria.

With a GEAM on each subsystem, the correlation matrix of a bipartite state
has entries Tr[rho (P^A_{alpha,k} (x) P^B_{beta,l})].  For separable states:

* trace criterion (square layouts only): Tr P <= (C~^A + C~^B) / 2;
* trace-norm criterion: ||P||_tr <= sqrt(C~^A C~^B);
* enhanced criterion, on R = P - p^A (p^B)^T built from the marginals:
  ||R||_tr <= sqrt(C~^A - C^A(rho_A)) sqrt(C~^B - C^B(rho_B)).

C~ denotes the pure-state cap of the full index of coincidence; a strict
excess over the bound certifies entanglement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coincidence import partial_ioc, probabilities, pure_ioc_bound
from .errors import DimensionMismatchError, NumericalError, ValidationError
from .geam import Geam
from .linalg import partial_trace, trace_norm
from .states import require_density

CRITERION_TOL = 1e-9

TRACE = "TRACE"
TRACE_NORM = "TRACE_NORM"
ENHANCED = "ENHANCED"


@dataclass(frozen=True)
class CorrelationMatrix:
    """Joint outcome matrix, rows indexed by GEAM-A outcomes, columns by GEAM-B's."""

    matrix: np.ndarray
    sizes_a: tuple[int, ...]
    sizes_b: tuple[int, ...]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        expected = (sum(self.sizes_a), sum(self.sizes_b))
        if m.shape != expected:
            raise ValidationError(f"correlation matrix must be {expected}, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def is_square_layout(self) -> bool:
        return self.sizes_a == self.sizes_b


@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    lhs: float
    bound: float
    violated: bool
    tolerance: float


def correlation_matrix(geam_a: Geam, geam_b: Geam, rho, tol: float = 1e-10) -> CorrelationMatrix:
    """Assemble Tr[rho (P^A (x) P^B)] over all outcome pairs."""
    arr = require_density(rho, tol)
    da, db = geam_a.dim, geam_b.dim
    if arr.shape != (da * db, da * db):
        raise DimensionMismatchError(
            f"state has shape {arr.shape}, expected {(da * db, da * db)} for dims ({da},{db})"
        )
    four = arr.reshape(da, db, da, db)
    ops_a = [p for frame in geam_a.operators for p in frame]
    ops_b = [p for frame in geam_b.operators for p in frame]
    rows = []
    for pa in ops_a:
        # Tr[rho (X (x) Y)] = sum_{kl} C[k,l] Y[l,k] with C = contraction over A.
        contracted = np.einsum("ikjl,ji->kl", four, pa)
        rows.append([float(np.trace(contracted @ pb).real) for pb in ops_b])
    return CorrelationMatrix(
        matrix=np.asarray(rows, dtype=float),
        sizes_a=geam_a.sizes,
        sizes_b=geam_b.sizes,
    )


def trace_criterion(
    corr: CorrelationMatrix, geam_a: Geam, geam_b: Geam, tol: float = CRITERION_TOL
) -> CriterionReport:
    """Separability test Tr P <= (C~^A + C~^B) / 2; needs matching frame layouts."""
    if geam_a.sizes != geam_b.sizes:
        raise ValidationError(
            "trace criterion needs a square layout: frame sizes"
            f" {geam_a.sizes} vs {geam_b.sizes} do not match"
        )
    lhs = float(np.trace(corr.matrix))
    bound = 0.5 * (
        pure_ioc_bound(geam_a, geam_a.n_frames) + pure_ioc_bound(geam_b, geam_b.n_frames)
    )
    return CriterionReport(TRACE, lhs, bound, lhs > bound + tol, tol)


def trace_norm_criterion(
    corr: CorrelationMatrix, geam_a: Geam, geam_b: Geam, tol: float = CRITERION_TOL
) -> CriterionReport:
    """Separability test ||P||_tr <= sqrt(C~^A C~^B); rectangular layouts allowed."""
    lhs = trace_norm(corr.matrix)
    bound = float(
        np.sqrt(
            pure_ioc_bound(geam_a, geam_a.n_frames) * pure_ioc_bound(geam_b, geam_b.n_frames)
        )
    )
    return CriterionReport(TRACE_NORM, lhs, bound, lhs > bound + tol, tol)


def enhanced_criterion(geam_a: Geam, geam_b: Geam, rho, tol: float = CRITERION_TOL) -> CriterionReport:
    """Marginal-corrected test on R = P - p^A (p^B)^T.

    The bound radicands C~ - C(marginal) are clipped at zero; a radicand
    below -1e-10 signals inconsistent inputs and raises.
    """
    arr = require_density(rho)
    da, db = geam_a.dim, geam_b.dim
    if arr.shape != (da * db, da * db):
        raise DimensionMismatchError(
            f"state has shape {arr.shape}, expected {(da * db, da * db)} for dims ({da},{db})"
        )
    rho_a = partial_trace(arr, (da, db), "A")
    rho_b = partial_trace(arr, (da, db), "B")
    table_a = probabilities(geam_a, rho_a)
    table_b = probabilities(geam_b, rho_b)
    corr = correlation_matrix(geam_a, geam_b, arr)
    r = corr.matrix - np.outer(table_a.flat, table_b.flat)
    lhs = trace_norm(r)
    rad_a = pure_ioc_bound(geam_a, geam_a.n_frames) - partial_ioc(table_a, geam_a.n_frames)
    rad_b = pure_ioc_bound(geam_b, geam_b.n_frames) - partial_ioc(table_b, geam_b.n_frames)
    for name, rad in (("A", rad_a), ("B", rad_b)):
        if rad < -1e-10:
            raise NumericalError(
                f"negative bound radicand on side {name}: {rad:.3e};"
                " marginal coincidence exceeds its pure-state cap"
            )
    bound = float(np.sqrt(max(rad_a, 0.0)) * np.sqrt(max(rad_b, 0.0)))
    return CriterionReport(ENHANCED, lhs, bound, lhs > bound + tol, tol)
