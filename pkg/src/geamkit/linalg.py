"""Dense complex matrix kernels for desk-scale operators.

Everything here is a pure function on numpy arrays; dimensions stay small
(operators up to 64x64), so plain LAPACK eigensolvers and SVD are used
throughout.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, NumericalError, ValidationError

HERMITICITY_TOL = 1e-12


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D complex array, rejecting NaN/Inf entries."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def dagger(m) -> np.ndarray:
    return np.asarray(m, dtype=complex).conj().T


def require_hermitian(m, tol: float = HERMITICITY_TOL, name: str = "matrix") -> np.ndarray:
    """Check conjugate symmetry within `tol`, then return the symmetrized matrix."""
    arr = as_matrix(m, name)
    if arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {arr.shape}")
    dev = float(np.max(np.abs(arr - arr.conj().T)))
    if dev > tol:
        raise ValidationError(
            f"{name} is not Hermitian: max |M - M^dag| = {dev:.3e} exceeds {tol:.1e}"
        )
    return (arr + arr.conj().T) / 2.0


def herm_eig(h, tol: float = HERMITICITY_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition H = V diag(w) V^dag, eigenvalues ascending."""
    hs = require_hermitian(h, tol)
    try:
        w, v = np.linalg.eigh(hs)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Hermitian eigensolver did not converge: {exc}") from exc
    return w, v


def min_eigenvalue(h, tol: float = HERMITICITY_TOL) -> float:
    return float(herm_eig(h, tol)[0][0])


def trace_norm(m) -> float:
    """Sum of singular values; works for rectangular matrices."""
    arr = as_matrix(m)
    return float(np.linalg.svd(arr, compute_uv=False).sum())


def partial_trace(rho, dims: tuple[int, int], keep) -> np.ndarray:
    """Trace out one tensor factor of a bipartite operator.

    `dims` is (dA, dB); `keep` selects the surviving subsystem, "A" or "B"
    (0 or 1 are accepted too).
    """
    arr = as_matrix(rho, "rho")
    da, db = int(dims[0]), int(dims[1])
    if arr.shape != (da * db, da * db):
        raise DimensionMismatchError(
            f"expected a {da * db}x{da * db} matrix for dims {(da, db)}, got shape {arr.shape}"
        )
    which = {"A": 0, "a": 0, 0: 0, "B": 1, "b": 1, 1: 1}.get(keep)
    if which is None:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    four = arr.reshape(da, db, da, db)
    return np.einsum("ikjk->ij", four) if which == 0 else np.einsum("kikj->ij", four)


def kron(a, b) -> np.ndarray:
    """Tensor (Kronecker) product; output dims are the products of the inputs'."""
    return np.kron(as_matrix(a, "a"), as_matrix(b, "b"))


def flip_operator(d: int) -> np.ndarray:
    """Swap of the two tensor factors on C^d (x) C^d."""
    if d < 2:
        raise ValidationError(f"flip operator needs dimension >= 2, got {d}")
    f = np.zeros((d * d, d * d), dtype=complex)
    for m in range(d):
        for n in range(d):
            f[m * d + n, n * d + m] = 1.0
    return f
