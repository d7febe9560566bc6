"""Traceless Hermitian orthonormal operator bases and frame-sized partitions.

The canonical realization is the generalized Gell-Mann family: for each pair
j < k a symmetric and an antisymmetric off-diagonal element, plus d - 1
diagonal elements, all normalized to Tr(G_i G_j) = delta_ij.  Any
user-supplied family passing the same invariants is accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import require_hermitian

TRACELESS_TOL = 1e-12
ORTHONORMAL_TOL = 1e-11


@dataclass(frozen=True)
class OperatorBasis:
    """d^2 - 1 traceless Hermitian matrices, orthonormal in the trace inner product."""

    dim: int
    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        d = int(self.dim)
        if d < 2:
            raise ValidationError(f"basis dimension must be >= 2, got {d}")
        elems = tuple(
            require_hermitian(e, name=f"basis element {i}") for i, e in enumerate(self.elements)
        )
        if len(elems) != d * d - 1:
            raise ValidationError(
                f"a dimension-{d} basis needs {d * d - 1} traceless elements, got {len(elems)}"
            )
        violations = []
        for i, g in enumerate(elems):
            if g.shape != (d, d):
                raise ValidationError(f"basis element {i} has shape {g.shape}, expected {(d, d)}")
            tr = abs(complex(np.trace(g)))
            if tr > TRACELESS_TOL:
                violations.append(f"element {i}: |Tr G| = {tr:.3e} > {TRACELESS_TOL:.1e}")
        stack = np.stack(elems)
        gram = np.einsum("aij,bji->ab", stack, stack).real
        gram_dev = float(np.max(np.abs(gram - np.eye(len(elems)))))
        if gram_dev > ORTHONORMAL_TOL:
            i, j = np.unravel_index(np.argmax(np.abs(gram - np.eye(len(elems)))), gram.shape)
            violations.append(
                f"elements ({i},{j}): |Tr(G_i G_j) - delta| = {gram_dev:.3e} > {ORTHONORMAL_TOL:.1e}"
            )
        if violations:
            raise ValidationError("invalid operator basis", violations)
        for e in elems:
            e.setflags(write=False)
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "elements", elems)

    def __len__(self) -> int:
        return len(self.elements)


def gell_mann_basis(d: int) -> OperatorBasis:
    """Generalized Gell-Mann matrices in the standard enumeration.

    For d = 2 this is (sigma_x, sigma_y, sigma_z) / sqrt(2).
    """
    if d < 2:
        raise ValidationError(f"dimension must be >= 2, got {d}")
    elems: list[np.ndarray] = []
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for k in range(1, d):
        for j in range(k):
            sym = np.zeros((d, d), dtype=complex)
            sym[j, k] = sym[k, j] = inv_sqrt2
            elems.append(sym)
            anti = np.zeros((d, d), dtype=complex)
            anti[j, k] = -1j * inv_sqrt2
            anti[k, j] = 1j * inv_sqrt2
            elems.append(anti)
        diag = np.zeros((d, d), dtype=complex)
        norm = 1.0 / math.sqrt(k * (k + 1))
        for j in range(k):
            diag[j, j] = norm
        diag[k, k] = -k * norm
        elems.append(diag)
    return OperatorBasis(d, tuple(elems))


@dataclass(frozen=True)
class BasisPartition:
    """Assignment of basis elements to N frames; frame alpha gets M_alpha - 1."""

    basis: OperatorBasis
    group_sizes: tuple[int, ...]
    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        sizes = tuple(int(m) for m in self.group_sizes)
        groups = tuple(tuple(int(i) for i in g) for g in self.groups)
        if len(sizes) != len(groups) or not sizes:
            raise ValidationError("group_sizes and groups must be nonempty and equal-length")
        if any(m < 2 for m in sizes):
            raise ValidationError(f"every frame size must be >= 2, got {sizes}")
        for m, g in zip(sizes, groups):
            if len(g) != m - 1:
                raise ValidationError(f"a frame of size {m} must hold {m - 1} basis indices, got {len(g)}")
        flat = [i for g in groups for i in g]
        n_elems = len(self.basis.elements)
        if sorted(flat) != list(range(n_elems)):
            raise ValidationError(
                f"groups must partition the {n_elems} basis indices exactly"
            )
        object.__setattr__(self, "group_sizes", sizes)
        object.__setattr__(self, "groups", groups)

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def n_frames(self) -> int:
        return len(self.group_sizes)


def partition_basis(basis: OperatorBasis, group_sizes) -> BasisPartition:
    """Split the basis into contiguous groups of sizes M_alpha - 1.

    Requires sum(M_alpha - 1) = d^2 - 1, i.e. sum(M_alpha) = d^2 + N - 1.
    """
    sizes = tuple(int(m) for m in group_sizes)
    if not sizes:
        raise ValidationError("at least one frame size is required")
    if any(m < 2 for m in sizes):
        raise ValidationError(f"every frame size must be >= 2, got {sizes}")
    d = basis.dim
    needed = d * d - 1
    total = sum(m - 1 for m in sizes)
    if total != needed:
        raise ValidationError(
            f"frame sizes {sizes} cover {total} basis elements, expected d^2 - 1 = {needed}"
            f" (sum M_alpha must be {d * d + len(sizes) - 1})"
        )
    groups = []
    start = 0
    for m in sizes:
        groups.append(tuple(range(start, start + m - 1)))
        start += m - 1
    return BasisPartition(basis, sizes, tuple(groups))
