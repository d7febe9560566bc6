"""Density matrices: validation, canonical bipartite states, seeded generators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import kron, require_hermitian
from .rng import PortableRng

DENSITY_TOL = 1e-10


def require_density(rho, tol: float = DENSITY_TOL, name: str = "rho") -> np.ndarray:
    """Check Hermiticity, unit trace, and positivity; return the symmetrized matrix."""
    arr = require_hermitian(rho, name=name)
    tr = float(np.trace(arr).real)
    lo = float(np.linalg.eigvalsh(arr)[0])
    problems = []
    if abs(tr - 1.0) > tol:
        problems.append(f"trace deviation |Tr - 1| = {abs(tr - 1.0):.3e}")
    if lo < -tol:
        problems.append(f"min eigenvalue {lo:.3e}")
    if problems:
        raise ValidationError(f"{name} is not a density matrix", problems)
    return arr


def max_entangled(d: int) -> np.ndarray:
    """Projector onto (1/sqrt(d)) sum_m |mm>."""
    if d < 2:
        raise ValidationError(f"dimension must be >= 2, got {d}")
    psi = np.zeros(d * d, dtype=complex)
    psi[:: d + 1] = 1.0 / np.sqrt(d)
    return np.outer(psi, psi.conj())


def isotropic(d: int, p: float) -> np.ndarray:
    """p * P_+ + (1 - p) * I / d^2 on C^d (x) C^d, restricted to 0 <= p <= 1."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"mixing parameter must satisfy 0 <= p <= 1, got {p}")
    return p * max_entangled(d) + (1.0 - p) * np.eye(d * d, dtype=complex) / (d * d)


def max_mixed(d: int, bipartite: bool = False) -> np.ndarray:
    """I/d, or I/d^2 on the doubled space when `bipartite`."""
    if d < 2:
        raise ValidationError(f"dimension must be >= 2, got {d}")
    n = d * d if bipartite else d
    return np.eye(n, dtype=complex) / n


def canonical_state(kind: str, d: int, p: float | None = None, bipartite: bool = True) -> np.ndarray:
    """Dispatch on kind: 'max_entangled' | 'isotropic' | 'max_mixed'."""
    if kind == "max_entangled":
        return max_entangled(d)
    if kind == "isotropic":
        if p is None:
            raise ValidationError("isotropic state needs a mixing parameter p")
        return isotropic(d, p)
    if kind == "max_mixed":
        return max_mixed(d, bipartite=bipartite)
    raise ValidationError(f"unknown canonical state kind {kind!r}")


def random_state(d: int, rank: int, seed: int) -> np.ndarray:
    """Random density matrix G G^dag / Tr(G G^dag), G a d x rank complex
    Gaussian matrix from the portable stream; deterministic per seed."""
    if not 1 <= rank <= d:
        raise ValidationError(f"rank must be in 1..{d}, got {rank}")
    g = PortableRng(seed).complex_matrix(d, rank)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


@dataclass(frozen=True)
class SeparableMixture:
    """Convex mixture sum_j q_j rho_j^A (x) rho_j^B."""

    weights: tuple[float, ...]
    factors: tuple[tuple[np.ndarray, np.ndarray], ...]

    def __post_init__(self):
        q = np.asarray(self.weights, dtype=float)
        if q.ndim != 1 or q.size == 0 or len(self.factors) != q.size:
            raise ValidationError("weights and factors must be nonempty and equal-length")
        if np.any(q < 0.0) or abs(float(q.sum()) - 1.0) > 1e-12:
            raise ValidationError(f"weights must be a probability distribution, got {q.tolist()}")
        pairs = tuple(
            (require_density(ra, name=f"factor {j} (A)"), require_density(rb, name=f"factor {j} (B)"))
            for j, (ra, rb) in enumerate(self.factors)
        )
        object.__setattr__(self, "weights", tuple(q.tolist()))
        object.__setattr__(self, "factors", pairs)


def mix_separable(mixture: SeparableMixture) -> np.ndarray:
    """Assemble the bipartite state of a separable mixture."""
    out = None
    for q, (ra, rb) in zip(mixture.weights, mixture.factors):
        term = q * kron(ra, rb)
        out = term if out is None else out + term
    return out


def random_separable_mixture(
    d_a: int, d_b: int, n_terms: int, seed: int, max_rank: int | None = None
) -> SeparableMixture:
    """Seeded mixture of at most `n_terms` random product states."""
    rng = PortableRng(seed)
    raw = [rng.uniform() + 1e-3 for _ in range(n_terms)]
    total = sum(raw)
    weights = tuple(w / total for w in raw)
    factors = []
    for _ in range(n_terms):
        ra_rank = 1 + int(rng.uniform() * (max_rank or d_a))
        rb_rank = 1 + int(rng.uniform() * (max_rank or d_b))
        ga = rng.complex_matrix(d_a, min(ra_rank, d_a))
        gb = rng.complex_matrix(d_b, min(rb_rank, d_b))
        ra = ga @ ga.conj().T
        rb = gb @ gb.conj().T
        factors.append((ra / np.trace(ra).real, rb / np.trace(rb).real))
    return SeparableMixture(weights, tuple(factors))
