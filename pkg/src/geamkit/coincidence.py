"""Measurement probabilities and indices of coincidence.

For a state rho the outcome probabilities are p_{alpha,k} = Tr(P_{alpha,k} rho).
The partial index of coincidence over the first L frames,
C_L = sum_{alpha<=L} sum_k p_{alpha,k}^2, obeys a purity-linear bound for
conical 2-designs:

    C_L <= S (Tr rho^2 - 1/d) + mu_L,    mu_L = (1/d) sum_{alpha<=L} a gamma,

with equality at L = N, and is capped by its pure-state value
C~_L = (d-1) S / d + mu_L.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PremiseError, ValidationError
from .geam import DESIGN_TOL, Geam, check_conical_design
from .states import require_density

PROB_SUM_TOL = 1e-10


@dataclass(frozen=True)
class ProbabilityTable:
    """Per-frame outcome probabilities of one state under one GEAM."""

    frames: tuple[np.ndarray, ...]
    gammas: tuple[float, ...]

    def __post_init__(self):
        frames = tuple(np.asarray(f, dtype=float) for f in self.frames)
        problems = []
        for alpha, (p, gamma) in enumerate(zip(frames, self.gammas)):
            if np.any(p < -1e-12):
                problems.append(f"frame {alpha}: negative probability {float(p.min()):.3e}")
            if abs(float(p.sum()) - gamma) > PROB_SUM_TOL:
                problems.append(
                    f"frame {alpha}: probabilities sum to {float(p.sum())!r}, expected {gamma!r}"
                )
        total = sum(float(p.sum()) for p in frames)
        if abs(total - 1.0) > PROB_SUM_TOL:
            problems.append(f"probabilities sum to {total!r}, expected 1")
        if problems:
            raise ValidationError("inconsistent probability table", problems)
        for f in frames:
            f.setflags(write=False)
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))

    @property
    def n_frames(self) -> int:
        return len(self.frames)

    @property
    def flat(self) -> np.ndarray:
        return np.concatenate(self.frames)


def probabilities(geam: Geam, rho, tol: float = 1e-10) -> ProbabilityTable:
    """Outcome probabilities Tr(P rho) of a density matrix under the GEAM."""
    arr = require_density(rho, tol)
    if arr.shape != (geam.dim, geam.dim):
        raise ValidationError(
            f"state has shape {arr.shape}, GEAM acts on dimension {geam.dim}"
        )
    frames = tuple(
        np.array([float(np.trace(p @ arr).real) for p in frame])
        for frame in geam.operators
    )
    return ProbabilityTable(frames, geam.gammas)


def partial_ioc(table: ProbabilityTable, L: int) -> float:
    """Sum of squared probabilities over the first L frames."""
    if not 1 <= L <= table.n_frames:
        raise ValueError(f"prefix length {L} out of range 1..{table.n_frames}")
    return float(sum(float(np.sum(p * p)) for p in table.frames[:L]))


def pure_ioc_bound(geam: Geam, L: int, tol: float = DESIGN_TOL) -> float:
    """Pure-state cap C~_L = (d-1) S / d + mu_L; needs a conical 2-design."""
    s = geam.design_constant(tol)
    if s is None:
        raise PremiseError(
            "index-of-coincidence bounds need a conical 2-design"
            " (per-frame design values differ)"
        )
    return (geam.dim - 1.0) / geam.dim * s + geam.mu(L)


@dataclass(frozen=True)
class CoincidenceBound:
    """Purity-linear and pure-state bounds for the partial index of coincidence."""

    L: int
    mu_L: float
    bound_state: float
    bound_pure: float
    c_l: float | None = None


def ioc_bounds(geam: Geam, L: int, purity: float, tol: float = DESIGN_TOL) -> CoincidenceBound:
    """Evaluate both coincidence bounds at prefix L for the given purity.

    The purity is caller-supplied so bounds can be evaluated counterfactually;
    it must lie in [1/d, 1].
    """
    cert = check_conical_design(geam, tol)
    if not cert.is_conical:
        raise PremiseError(
            f"coincidence bounds hold only for conical 2-designs"
            f" (residual {cert.residual:.3e})"
        )
    d = geam.dim
    if not 1.0 / d - 1e-12 <= purity <= 1.0 + 1e-12:
        raise ValidationError(f"purity must be in [1/{d}, 1], got {purity}")
    mu_l = geam.mu(L)
    return CoincidenceBound(
        L=L,
        mu_L=mu_l,
        bound_state=cert.S * (purity - 1.0 / d) + mu_l,
        bound_pure=(d - 1.0) / d * cert.S + mu_l,
    )


def decompose_state(geam: Geam, rho) -> tuple[np.ndarray, ...]:
    """Expansion coefficients of rho over the frame combinations H_{alpha,k}.

    Solves rho = I/d + sum_{alpha,k} r_{alpha,k} H_{alpha,k} in the zero-sum
    gauge sum_k r_{alpha,k} = 0 (the minimal-norm solution): with the flat
    Gram structure, r_{alpha,k} = Tr(rho H_{alpha,k}) / (M (sqrt(M)+1)^2).
    """
    arr = require_density(rho)
    if arr.shape != (geam.dim, geam.dim):
        raise ValidationError(
            f"state has shape {arr.shape}, GEAM acts on dimension {geam.dim}"
        )
    coeffs = []
    recon = np.eye(geam.dim, dtype=complex) / geam.dim
    for alpha in range(geam.n_frames):
        m = geam.sizes[alpha]
        hs = geam.h_operators(alpha)
        scale = m * (np.sqrt(m) + 1.0) ** 2
        r = np.array([float(np.trace(arr @ h).real) / scale for h in hs])
        coeffs.append(r)
        for rk, h in zip(r, hs):
            recon = recon + rk * h
    resid = float(np.max(np.abs(recon - arr)))
    if resid > 1e-9:
        raise ValidationError(
            f"decomposition does not reconstruct the state (residual {resid:.3e});"
            " the GEAM frames do not span the traceless space"
        )
    return tuple(coeffs)
