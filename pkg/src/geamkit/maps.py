"""Positive maps from conical-design GEAMs and their entanglement witnesses.

Each frame defines a (non trace-preserving) map

    Phi_alpha[X] = sum_{k,l} O_kl P_{alpha,k} Tr(X P_{alpha,l}),

where O is an M x M orthogonal matrix whose rows and columns each sum to 1,
so that Tr Phi_alpha[X] = a gamma Tr X.  Combining the first K frames with L
of them negated,

    Phi = A Phi_0 + sum_{alpha=L+1..K} Phi_alpha - sum_{alpha=1..L} Phi_alpha,
    Phi_0[X] = I Tr(X) / d,   A = d (2 C~_L - C~_K) = (d-1) S - d (mu_K - 2 mu_L),

gives a positive map: for every rank-1 projector P the spectral (Mehta)
ratio Tr(Phi[P]^2) / [Tr Phi[P]]^2 stays below 1/(d-1).  Its Choi matrix

    W = sum_{m,n} |m><n| (x) Phi[|m><n|]
      = (2 C~_L - C~_K) I (x) I + sum_{alpha>L} J_alpha - sum_{alpha<=L} J_alpha,
    J_alpha = sum_{k,l} O_kl conj(P_{alpha,l}) (x) P_{alpha,k},

is block-positive, i.e. an entanglement witness: Tr(W rho) >= 0 on all
separable rho, so a negative expectation certifies entanglement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .coincidence import pure_ioc_bound
from .errors import (
    DimensionMismatchError,
    NumericalError,
    PremiseError,
    ValidationError,
)
from .geam import DESIGN_TOL, Geam, check_conical_design
from .linalg import kron, require_hermitian
from .rng import PortableRng, derive_seed
from .states import require_density

ROTATION_TOL = 1e-10
GENERATOR_TOL = 1e-12
CHOI_CONSISTENCY_TOL = 1e-10

ENTANGLED = "ENTANGLED"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Rotation:
    """Orthogonal M x M matrix with unit row and column sums."""

    size: int
    kind: str
    data: object
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        n = self.size
        if m.shape != (n, n):
            raise ValidationError(f"rotation must be {n}x{n}, got {m.shape}")
        ortho = float(np.max(np.abs(m.T @ m - np.eye(n))))
        rows = float(np.max(np.abs(m.sum(axis=1) - 1.0)))
        cols = float(np.max(np.abs(m.sum(axis=0) - 1.0)))
        problems = []
        if ortho > ROTATION_TOL:
            problems.append(f"orthogonality residual {ortho:.3e}")
        if rows > ROTATION_TOL or cols > ROTATION_TOL:
            problems.append(f"row/column sums deviate from 1 by {max(rows, cols):.3e}")
        if problems:
            raise ValidationError("invalid rotation matrix", problems)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def make_rotation(size: int, spec="identity") -> Rotation:
    """Resolve a rotation description to a validated matrix.

    Accepted specs: "identity"; a permutation as a sequence of ints (row k
    carries a 1 in column perm[k]); a real antisymmetric generator matrix,
    which is compressed onto the orthogonal complement of the all-ones
    vector and exponentiated; ("random", seed) for a seeded Gaussian
    generator; or a ready Rotation.
    """
    if size < 1:
        raise ValidationError(f"rotation size must be >= 1, got {size}")
    if isinstance(spec, Rotation):
        if spec.size != size:
            raise DimensionMismatchError(f"rotation has size {spec.size}, expected {size}")
        return spec
    if isinstance(spec, str) and spec == "identity":
        return Rotation(size, "identity", None, np.eye(size))
    if isinstance(spec, tuple) and len(spec) == 2 and spec[0] == "random":
        seed = int(spec[1])
        gen = PortableRng(seed).antisymmetric(size)
        rot = Rotation(size, "random", seed, _exp_projected(gen, size))
        return rot
    arr = np.asarray(spec)
    if arr.ndim == 1:
        perm = [int(i) for i in arr]
        if sorted(perm) != list(range(size)):
            raise ValidationError(f"permutation {perm} is not a bijection on 0..{size - 1}")
        m = np.zeros((size, size))
        for k, p in enumerate(perm):
            m[k, p] = 1.0
        return Rotation(size, "permutation", tuple(perm), m)
    if arr.ndim == 2:
        gen = np.asarray(arr, dtype=float)
        if gen.shape != (size, size):
            raise DimensionMismatchError(f"generator must be {size}x{size}, got {gen.shape}")
        anti = float(np.max(np.abs(gen + gen.T)))
        if anti > GENERATOR_TOL:
            raise ValidationError(
                f"generator is not antisymmetric: max |T + T^t| = {anti:.3e}"
            )
        return Rotation(size, "generator", gen, _exp_projected(gen, size))
    raise ValidationError(f"unsupported rotation spec {spec!r}")


def _exp_projected(gen: np.ndarray, size: int) -> np.ndarray:
    q = np.eye(size) - np.full((size, size), 1.0 / size)
    return scipy.linalg.expm(q @ gen @ q)


def apply_phi_alpha(geam: Geam, alpha: int, rotation, x) -> np.ndarray:
    """One frame's map: rotated outcome weights recombined over the frame."""
    if not 0 <= alpha < geam.n_frames:
        raise ValueError(f"frame index {alpha} out of range for {geam.n_frames} frames")
    m = geam.sizes[alpha]
    rot = make_rotation(m, rotation)
    arr = np.asarray(x, dtype=complex)
    if arr.shape != (geam.dim, geam.dim):
        raise DimensionMismatchError(
            f"input has shape {arr.shape}, expected {(geam.dim, geam.dim)}"
        )
    frame = geam.operators[alpha]
    weights = np.array([np.trace(arr @ p) for p in frame])
    coeff = rot.matrix @ weights
    return np.tensordot(coeff, np.stack(frame), axes=1)


@dataclass(frozen=True)
class PositiveMapSpec:
    """Frozen description of the combined positive map."""

    geam: Geam
    L: int
    K: int
    rotations: tuple[Rotation, ...]
    A: float

    @property
    def dim(self) -> int:
        return self.geam.dim


def build_map(geam: Geam, L: int, K: int, rotations="identity", tol: float = DESIGN_TOL) -> PositiveMapSpec:
    """Assemble the positive-map description with A = d (2 C~_L - C~_K).

    `rotations` is a single spec broadcast to the first K frames or a
    sequence of K specs.  The GEAM must certify as a conical 2-design.
    """
    cert = check_conical_design(geam, tol)
    if not cert.is_conical:
        raise PremiseError(
            f"positive-map construction needs a conical 2-design (residual {cert.residual:.3e})"
        )
    n = geam.n_frames
    if not 1 <= L <= K <= n:
        raise ValidationError(f"need 1 <= L <= K <= N = {n}, got L = {L}, K = {K}")
    if isinstance(rotations, (str, Rotation)) or (
        isinstance(rotations, tuple) and len(rotations) == 2 and rotations[0] == "random"
    ):
        specs = [rotations] * K
    else:
        specs = list(rotations)
        if len(specs) != K:
            raise ValidationError(f"need {K} rotations (one for each used frame), got {len(specs)}")
    rots = tuple(make_rotation(geam.sizes[i], s) for i, s in enumerate(specs))
    d = geam.dim
    a = d * (2.0 * pure_ioc_bound(geam, L, tol) - pure_ioc_bound(geam, K, tol))
    alt = (d - 1.0) * cert.S - d * (geam.mu(K) - 2.0 * geam.mu(L))
    if abs(a - alt) > 1e-12:
        raise NumericalError(
            f"inconsistent map offset: {a!r} vs {alt!r} (difference {abs(a - alt):.3e})"
        )
    return PositiveMapSpec(geam=geam, L=int(L), K=int(K), rotations=rots, A=float(a))


def apply_map(spec: PositiveMapSpec, x) -> np.ndarray:
    """Evaluate the combined map on a d x d matrix."""
    arr = np.asarray(x, dtype=complex)
    d = spec.dim
    if arr.shape != (d, d):
        raise DimensionMismatchError(f"input has shape {arr.shape}, expected {(d, d)}")
    out = spec.A * np.trace(arr) / d * np.eye(d, dtype=complex)
    for alpha in range(spec.K):
        term = apply_phi_alpha(spec.geam, alpha, spec.rotations[alpha], arr)
        out = out + term if alpha >= spec.L else out - term
    return out


def mehta_ratio(spec: PositiveMapSpec, projector, tol: float = 1e-10) -> float:
    """Spectral ratio Tr(Phi[P]^2) / [Tr Phi[P]]^2 for a rank-1 projector P.

    Positivity of the map is equivalent to this staying <= 1/(d-1) over all
    rank-1 projectors.
    """
    p = require_hermitian(projector, name="projector")
    d = spec.dim
    if p.shape != (d, d):
        raise DimensionMismatchError(f"projector has shape {p.shape}, expected {(d, d)}")
    idem = float(np.max(np.abs(p @ p - p)))
    tr = float(np.trace(p).real)
    if idem > tol or abs(tr - 1.0) > tol:
        raise ValidationError(
            f"input is not a rank-1 projector: idempotency residual {idem:.3e},"
            f" trace {tr!r}"
        )
    y = apply_map(spec, p)
    denom = float(np.trace(y).real)
    if abs(denom) <= 1e-12:
        raise NumericalError("map output has vanishing trace; ratio undefined")
    num = float(np.trace(y @ y).real)
    return num / (denom * denom)


@dataclass(frozen=True)
class Witness:
    """Choi matrix of the combined map, acting on C^d (x) C^d."""

    matrix: np.ndarray
    dims: tuple[int, int]
    provenance: PositiveMapSpec | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        da, db = self.dims
        if m.shape != (da * db, da * db):
            raise ValidationError(f"witness must be {da * db}x{da * db}, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", (int(da), int(db)))


def choi_witness(spec: PositiveMapSpec, tol: float = CHOI_CONSISTENCY_TOL) -> Witness:
    """Entanglement witness of the map via its Choi matrix.

    Builds W = sum_{m,n} |m><n| (x) Phi[|m><n|] and cross-checks it entrywise
    against the closed form with the J_alpha blocks before returning.
    """
    d = spec.dim
    w = np.zeros((d * d, d * d), dtype=complex)
    unit = np.zeros((d, d), dtype=complex)
    for m in range(d):
        for n in range(d):
            unit[m, n] = 1.0
            w += kron(unit, apply_map(spec, unit))
            unit[m, n] = 0.0

    closed = spec.A / d * np.eye(d * d, dtype=complex)
    for alpha in range(spec.K):
        j = _j_block(spec.geam, alpha, spec.rotations[alpha])
        closed = closed + j if alpha >= spec.L else closed - j
    dev = float(np.max(np.abs(w - closed)))
    if dev > tol:
        raise NumericalError(
            f"witness constructions disagree entrywise by {dev:.3e} (tol {tol:.1e})"
        )
    return Witness(matrix=require_hermitian(w, tol=1e-10, name="witness"), dims=(d, d), provenance=spec)


def _j_block(geam: Geam, alpha: int, rot: Rotation) -> np.ndarray:
    frame = geam.operators[alpha]
    m = len(frame)
    d = geam.dim
    out = np.zeros((d * d, d * d), dtype=complex)
    o = rot.matrix
    for k in range(m):
        for l in range(m):
            if o[k, l] != 0.0:
                out += o[k, l] * kron(frame[l].conj(), frame[k])
    return out


def min_product_expectation(
    witness,
    dims: tuple[int, int] | None = None,
    restarts: int = 32,
    seed: int = 0,
    stagnation_tol: float = 1e-10,
    max_iterations: int = 500,
) -> tuple[float, tuple[np.ndarray, np.ndarray]]:
    """Alternating minimization of <a (x) b| W |a (x) b> over product vectors.

    Fixing one factor makes the problem a smallest-eigenvector computation
    for the contraction on the other; the two sides alternate until the
    value stagnates, best of `restarts` independent seeded starts.  The
    result is an upper bound on the true product minimum.
    """
    if isinstance(witness, Witness):
        mat, (da, db) = witness.matrix, witness.dims
    else:
        if dims is None:
            raise ValidationError("dims are required when passing a bare matrix")
        da, db = int(dims[0]), int(dims[1])
        mat = require_hermitian(witness, tol=1e-10, name="witness")
    if mat.shape != (da * db, da * db):
        raise DimensionMismatchError(
            f"witness has shape {mat.shape}, expected {(da * db, da * db)}"
        )
    if restarts < 1:
        raise ValidationError(f"restarts must be >= 1, got {restarts}")
    four = mat.reshape(da, db, da, db)
    best_val = np.inf
    best_pair = None
    for r in range(restarts):
        rng = PortableRng(derive_seed(seed, r))
        a = rng.unit_vector(da)
        val = np.inf
        for _ in range(max_iterations):
            contract_b = np.einsum("i,ikjl,j->kl", a.conj(), four, a)
            contract_b = (contract_b + contract_b.conj().T) / 2.0
            w_b, v_b = np.linalg.eigh(contract_b)
            b = v_b[:, 0]
            contract_a = np.einsum("k,ikjl,l->ij", b.conj(), four, b)
            contract_a = (contract_a + contract_a.conj().T) / 2.0
            w_a, v_a = np.linalg.eigh(contract_a)
            a = v_a[:, 0]
            new_val = float(w_a[0])
            if abs(new_val - val) < stagnation_tol:
                val = new_val
                break
            val = new_val
        if val < best_val:
            best_val = val
            best_pair = (a, b)
    return float(best_val), best_pair


@dataclass(frozen=True)
class DetectionRecord:
    value: float
    verdict: str
    tolerance: float


def detect(witness, rho, dims: tuple[int, int] | None = None, tol: float = 1e-10) -> DetectionRecord:
    """Expectation Tr(W rho) with the one-sided verdict a witness supports.

    A value below -tol certifies entanglement; anything else is
    INCONCLUSIVE (a witness cannot certify separability).
    """
    if isinstance(witness, Witness):
        mat, (da, db) = witness.matrix, witness.dims
    else:
        if dims is None:
            raise ValidationError("dims are required when passing a bare matrix")
        da, db = int(dims[0]), int(dims[1])
        mat = require_hermitian(witness, tol=1e-10, name="witness")
    arr = require_density(rho)
    if arr.shape != mat.shape:
        raise DimensionMismatchError(
            f"state has shape {arr.shape}, witness acts on {mat.shape}"
        )
    value = float(np.trace(mat @ arr).real)
    verdict = ENTANGLED if value < -tol else INCONCLUSIVE
    return DetectionRecord(value=value, verdict=verdict, tolerance=tol)
