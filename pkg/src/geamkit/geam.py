"""Generalized equiangular measurements (GEAMs).

A GEAM is a POVM split into N frames {P_{alpha,k} : k = 1..M_alpha} with a
per-frame resolution sum_k P_{alpha,k} = gamma_alpha * I for a probability
distribution gamma, constant traces Tr P_{alpha,k} = a_alpha, constant
purities Tr P^2 = b_alpha a_alpha^2, constant intra-frame overlaps
Tr(P_k P_l) = c_alpha a_alpha^2, and uniform cross-frame overlaps
Tr(P_{alpha,k} P_{beta,l}) = a_alpha a_beta / d.  Frame sizes satisfy
sum_alpha M_alpha = d^2 + N - 1, and

    a = d gamma / M,   c = (M - d b) / (d (M - 1)),   1/d < b <= min(d, M)/d.

Frames are built from a partitioned traceless orthonormal basis: a group
{G_1..G_{M-1}} yields M equal-norm combinations

    H_k = G - sqrt(M)(1 + sqrt(M)) G_k   (k < M),   H_M = (1 + sqrt(M)) G,

with G = sum_k G_k, which have the flat Gram structure
Tr H_k^2 = (M-1)(sqrt(M)+1)^2, Tr(H_k H_l) = -(sqrt(M)+1)^2, sum_k H_k = 0.
The frame operators are P_k = (a/d) I + tau H_k with
tau = +/- sqrt(S / (M (sqrt(M)+1)^2)) for a design constant
S = a^2 (b - c) in

    0 < S <= (d gamma^2 / M) * min{1, (d-1)/(M-1)},

and the sign chosen so every P_k stays positive semidefinite (the range above
bounds the parameters but does not by itself guarantee positivity for an
arbitrary basis; positivity is checked eigenvalue-by-eigenvalue).

When all frames share the same S the measurement is a conical 2-design:

    sum_{alpha,k} P_{alpha,k} (x) P_{alpha,k}
        = kappa_+ I (x) I + kappa_- SWAP,
    kappa_+ = mu_N - S/d,  kappa_- = S,  mu_N = (1/d) sum_alpha a_alpha gamma_alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import BasisPartition
from .errors import FeasibilityError, PositivityError, ValidationError
from .linalg import flip_operator, kron, require_hermitian

STRUCTURE_TOL = 1e-10
DESIGN_TOL = 1e-9
PROBABILITY_TOL = 1e-12


def build_H_operators(partition: BasisPartition, alpha: int) -> list[np.ndarray]:
    """The M_alpha equal-norm traceless combinations for frame `alpha` (0-based)."""
    if not 0 <= alpha < partition.n_frames:
        raise ValueError(f"frame index {alpha} out of range for {partition.n_frames} frames")
    group = [partition.basis.elements[i] for i in partition.groups[alpha]]
    m = len(group) + 1
    root = math.sqrt(m)
    g_sum = np.sum(group, axis=0)
    hs = [g_sum - root * (1.0 + root) * g for g in group]
    hs.append((1.0 + root) * g_sum)
    return hs


def design_caps(dim: int, gammas, sizes) -> np.ndarray:
    """Per-frame upper limits of the design constant S."""
    g = np.asarray(gammas, dtype=float)
    m = np.asarray(sizes, dtype=float)
    base = dim * g * g / m
    shrink = np.minimum(1.0, (dim - 1.0) / (m - 1.0))
    return base * shrink


def _check_gammas(gammas, n_frames: int) -> np.ndarray:
    g = np.asarray(gammas, dtype=float)
    if g.shape != (n_frames,):
        raise ValidationError(f"need {n_frames} frame weights, got shape {g.shape}")
    if np.any(g <= 0.0):
        raise ValidationError(f"frame weights must be positive, got {g.tolist()}")
    total = float(g.sum())
    if abs(total - 1.0) > PROBABILITY_TOL:
        raise ValidationError(f"frame weights must sum to 1, got {total!r}")
    return g


def _check_signs(signs, n_frames: int) -> np.ndarray:
    if signs is None:
        return np.ones(n_frames, dtype=int)
    s = np.asarray(signs, dtype=int)
    if s.shape != (n_frames,):
        raise ValidationError(f"need {n_frames} frame signs, got shape {s.shape}")
    if np.any(np.abs(s) != 1):
        raise ValidationError(f"frame signs must be +1 or -1, got {s.tolist()}")
    return s


@dataclass(frozen=True)
class Geam:
    """Immutable validated GEAM; frames are indexed 0-based."""

    dim: int
    gammas: tuple[float, ...]
    a: tuple[float, ...]
    b: tuple[float, ...]
    c: tuple[float, ...]
    signs: tuple[int, ...]
    operators: tuple[tuple[np.ndarray, ...], ...]

    def __post_init__(self):
        ops = tuple(tuple(np.asarray(p, dtype=complex) for p in frame) for frame in self.operators)
        for frame in ops:
            for p in frame:
                p.setflags(write=False)
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "gammas", tuple(float(x) for x in self.gammas))
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))
        object.__setattr__(self, "c", tuple(float(x) for x in self.c))
        object.__setattr__(self, "signs", tuple(int(x) for x in self.signs))

    @property
    def n_frames(self) -> int:
        return len(self.operators)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(frame) for frame in self.operators)

    @property
    def f(self) -> float:
        """Cross-frame overlap; fixed to 1/d by definition."""
        return 1.0 / self.dim

    @property
    def n_outcomes(self) -> int:
        return sum(self.sizes)

    def design_values(self) -> np.ndarray:
        """Per-frame a^2 (b - c); constant across frames iff conical 2-design."""
        a = np.asarray(self.a)
        return a * a * (np.asarray(self.b) - np.asarray(self.c))

    def design_constant(self, tol: float = DESIGN_TOL) -> float | None:
        """Common design constant S, or None when frames disagree beyond `tol`."""
        vals = self.design_values()
        s = float(vals.mean())
        if float(np.max(np.abs(vals - s))) > tol:
            return None
        return s

    def mu(self, L: int) -> float:
        """(1/d) sum of a_alpha gamma_alpha over the first L frames."""
        if not 1 <= L <= self.n_frames:
            raise ValueError(f"prefix length {L} out of range 1..{self.n_frames}")
        return float(sum(self.a[i] * self.gammas[i] for i in range(L)) / self.dim)

    def tau(self, alpha: int) -> float:
        m = self.sizes[alpha]
        s_alpha = float(self.design_values()[alpha])
        return self.signs[alpha] * math.sqrt(s_alpha / (m * (math.sqrt(m) + 1.0) ** 2))

    def h_operators(self, alpha: int) -> list[np.ndarray]:
        """Traceless frame combinations recovered from the operators themselves."""
        t = self.tau(alpha)
        a = self.a[alpha]
        eye = np.eye(self.dim)
        return [(p - (a / self.dim) * eye) / t for p in self.operators[alpha]]

    def iter_operators(self):
        for alpha, frame in enumerate(self.operators):
            for k, p in enumerate(frame):
                yield alpha, k, p


def build_geam(
    partition: BasisPartition,
    gammas,
    s,
    signs=None,
    tol: float = STRUCTURE_TOL,
) -> Geam:
    """Construct a GEAM over a basis partition at design constant `s`.

    `s` may be a scalar (shared by all frames: conical 2-design) or a
    per-frame sequence (still a valid GEAM, generally not a 2-design).
    Frame parameters are a = d gamma / M, b = 1/d + (M-1) s / (M a^2),
    c = b - s / a^2.  Raises FeasibilityError when some s exceeds its frame
    cap and PositivityError when an operator fails the eigenvalue check.
    """
    d = partition.dim
    n = partition.n_frames
    sizes = np.asarray(partition.group_sizes, dtype=int)
    g = _check_gammas(gammas, n)
    sg = _check_signs(signs, n)
    s_vals = np.asarray(s, dtype=float)
    if s_vals.ndim == 0:
        s_vals = np.full(n, float(s_vals))
    if s_vals.shape != (n,):
        raise ValidationError(f"need a scalar or {n} design constants, got shape {s_vals.shape}")
    if np.any(s_vals <= 0.0):
        raise FeasibilityError(f"design constant must be positive, got {s_vals.tolist()}")
    caps = design_caps(d, g, sizes)
    slack = 1.0 + 1e-12
    over = s_vals > caps * slack
    if np.any(over):
        msgs = [
            f"frame {i}: S = {s_vals[i]!r} exceeds cap {caps[i]!r}"
            for i in range(n)
            if over[i]
        ]
        raise FeasibilityError(
            "design constant outside admissible range; per-frame caps: "
            + ", ".join(repr(float(x)) for x in caps)
            + "\n  - "
            + "\n  - ".join(msgs)
        )

    eye = np.eye(d)
    a_list, b_list, c_list, frames = [], [], [], []
    for alpha in range(n):
        m = int(sizes[alpha])
        a = d * g[alpha] / m
        b = 1.0 / d + (m - 1) * s_vals[alpha] / (m * a * a)
        c = b - s_vals[alpha] / (a * a)
        tau = sg[alpha] * math.sqrt(s_vals[alpha] / (m * (math.sqrt(m) + 1.0) ** 2))
        hs = build_H_operators(partition, alpha)
        ops = [(a / d) * eye + tau * h for h in hs]
        for k, p in enumerate(ops):
            lo = float(np.linalg.eigvalsh(p)[0])
            if lo < -tol:
                raise PositivityError(
                    f"frame {alpha}, element {k}: min eigenvalue {lo:.6e} < -{tol:.1e}"
                    " (operator not positive semidefinite at this design constant)",
                    frame=alpha,
                    index=k,
                    min_eigenvalue=lo,
                )
        a_list.append(a)
        b_list.append(b)
        c_list.append(c)
        frames.append(tuple(ops))
    return Geam(
        dim=d,
        gammas=tuple(g.tolist()),
        a=tuple(a_list),
        b=tuple(b_list),
        c=tuple(c_list),
        signs=tuple(sg.tolist()),
        operators=tuple(frames),
    )


def validate_geam(operators, tol: float = STRUCTURE_TOL) -> Geam:
    """Infer GEAM parameters from raw frame operators and verify every relation.

    Checks, per frame: resolution sum_k P = gamma I, constant traces,
    positivity, constant purity b and intra-frame overlap c, the
    b + (M-1) c = M/d constraint tying them to the resolution, and the
    admissible b range; across frames: cross overlaps a a'/d, frame-size
    count sum M = d^2 + N - 1, and weights summing to one.  Raises
    ValidationError carrying one entry per violated relation, otherwise
    returns the populated measurement.
    """
    if not operators:
        raise ValidationError("no frames supplied")
    frames = []
    for alpha, frame in enumerate(operators):
        frame = tuple(frame)
        if len(frame) < 2:
            raise ValidationError(f"frame {alpha} has {len(frame)} operators; needs at least 2")
        frames.append(
            tuple(
                require_hermitian(p, name=f"operator ({alpha},{k})")
                for k, p in enumerate(frame)
            )
        )
    d = frames[0][0].shape[0]
    for alpha, frame in enumerate(frames):
        for k, p in enumerate(frame):
            if p.shape != (d, d):
                raise ValidationError(
                    f"operator ({alpha},{k}) has shape {p.shape}, expected {(d, d)}"
                )
    n = len(frames)
    sizes = [len(frame) for frame in frames]
    violations: list[str] = []

    if sum(sizes) != d * d + n - 1:
        violations.append(
            f"frame sizes {sizes} sum to {sum(sizes)}, expected d^2 + N - 1 = {d * d + n - 1}"
        )

    eye = np.eye(d)
    gammas, a_vals, b_vals, c_vals = [], [], [], []
    for alpha, frame in enumerate(frames):
        m = sizes[alpha]
        total = np.sum(frame, axis=0)
        gamma = float(np.trace(total).real) / d
        res = float(np.max(np.abs(total - gamma * eye)))
        if res > tol:
            violations.append(
                f"frame {alpha}: sum_k P deviates from gamma*I by {res:.3e} (tol {tol:.1e})"
            )
        if gamma <= 0.0:
            violations.append(f"frame {alpha}: nonpositive weight gamma = {gamma!r}")
        traces = np.array([float(np.trace(p).real) for p in frame])
        a = float(traces.mean())
        dev = float(np.max(np.abs(traces - a)))
        if dev > tol:
            violations.append(
                f"frame {alpha}: operator traces spread {dev:.3e} around a = {a!r} (tol {tol:.1e})"
            )
        if abs(a - d * gamma / m) > tol:
            violations.append(
                f"frame {alpha}: a = {a!r} differs from d*gamma/M = {d * gamma / m!r}"
            )
        for k, p in enumerate(frame):
            lo = float(np.linalg.eigvalsh(p)[0])
            if lo < -tol:
                violations.append(
                    f"frame {alpha}, element {k}: min eigenvalue {lo:.3e} < -{tol:.1e}"
                )
        overlaps = np.einsum("aij,bji->ab", np.stack(frame), np.stack(frame)).real
        b = float(np.mean(np.diag(overlaps))) / (a * a) if a else float("nan")
        off = overlaps[~np.eye(m, dtype=bool)]
        c = float(off.mean()) / (a * a) if a else float("nan")
        b_dev = float(np.max(np.abs(np.diag(overlaps) - b * a * a)))
        if b_dev > tol:
            violations.append(
                f"frame {alpha}: purities spread {b_dev:.3e} around b*a^2 (tol {tol:.1e})"
            )
        c_dev = float(np.max(np.abs(off - c * a * a)))
        if c_dev > tol:
            violations.append(
                f"frame {alpha}: intra-frame overlaps spread {c_dev:.3e} around c*a^2 (tol {tol:.1e})"
            )
        if abs(b + (m - 1) * c - m / d) > max(tol, 1e-12):
            violations.append(
                f"frame {alpha}: b + (M-1)c = {b + (m - 1) * c!r} differs from M/d = {m / d!r}"
            )
        if not b - 1.0 / d > 1e-12:
            violations.append(
                f"frame {alpha}: b = {b!r} must exceed 1/d = {1.0 / d!r}"
            )
        if b > min(d, m) / d + tol:
            violations.append(
                f"frame {alpha}: b = {b!r} above upper limit min(d,M)/d = {min(d, m) / d!r}"
            )
        gammas.append(gamma)
        a_vals.append(a)
        b_vals.append(b)
        c_vals.append(c)

    total_gamma = float(sum(gammas))
    if abs(total_gamma - 1.0) > max(tol, PROBABILITY_TOL):
        violations.append(f"frame weights sum to {total_gamma!r}, expected 1")

    f_target = 1.0 / d
    for alpha in range(n):
        for beta in range(alpha + 1, n):
            cross = np.einsum("aij,bji->ab", np.stack(frames[alpha]), np.stack(frames[beta])).real
            expected = a_vals[alpha] * a_vals[beta] * f_target
            dev = float(np.max(np.abs(cross - expected)))
            if dev > tol:
                violations.append(
                    f"frames ({alpha},{beta}): cross overlaps deviate from a a'/d by {dev:.3e}"
                    f" (tol {tol:.1e})"
                )

    if violations:
        raise ValidationError("operator set is not a valid GEAM", violations)

    return Geam(
        dim=d,
        gammas=tuple(gammas),
        a=tuple(a_vals),
        b=tuple(b_vals),
        c=tuple(c_vals),
        signs=tuple([1] * n),
        operators=tuple(frames),
    )


@dataclass(frozen=True)
class DesignCertificate:
    """Outcome of the conical 2-design check.

    `kappa_plus`/`kappa_minus` are fitted from the tensor-square sum;
    `residual` is the max-abs deviation of that sum from the closed form
    with kappa_+ = mu_N - S/d and kappa_- = S.
    """

    is_conical: bool
    S: float
    kappa_plus: float
    kappa_minus: float
    residual: float


def check_conical_design(geam: Geam, tol: float = DESIGN_TOL) -> DesignCertificate:
    """Certify (or refute) that the GEAM is a conical 2-design.

    Checks that a^2 (b - c) is constant across frames and that
    sum P (x) P matches kappa_+ I (x) I + kappa_- SWAP entrywise.  A negative
    certificate is a normal result, not an error.
    """
    d = geam.dim
    vals = geam.design_values()
    s = float(vals.mean())
    spread = float(np.max(np.abs(vals - s)))

    t = np.zeros((d * d, d * d), dtype=complex)
    for _, _, p in geam.iter_operators():
        t += kron(p, p)
    flip = flip_operator(d)
    # Fit T on span{I, SWAP}: <I,I> = <F,F> = d^2, <I,F> = d.
    tr_t = float(np.trace(t).real)
    tr_ft = float(np.trace(flip @ t).real)
    den = d * d * d * d - d * d
    kappa_plus = (d * d * tr_t - d * tr_ft) / den
    kappa_minus = (d * d * tr_ft - d * tr_t) / den

    mu = geam.mu(geam.n_frames)
    predicted = (mu - s / d) * np.eye(d * d) + s * flip
    residual = float(np.max(np.abs(t - predicted)))

    is_conical = (
        spread <= tol
        and residual <= tol
        and kappa_minus > 0.0
        and kappa_plus >= kappa_minus - tol
    )
    return DesignCertificate(
        is_conical=bool(is_conical),
        S=s,
        kappa_plus=float(kappa_plus),
        kappa_minus=float(kappa_minus),
        residual=residual,
    )


def max_feasible_S(
    partition: BasisPartition,
    gammas,
    signs=None,
    rel_tol: float = 1e-6,
    tol: float = STRUCTURE_TOL,
) -> float:
    """Largest design constant S at which the construction stays PSD.

    The parameter range caps S at min over frames of
    (d gamma^2 / M) min{1, (d-1)/(M-1)}; for a given basis and signs the
    positivity of the operators can bind earlier.  Bisects to relative
    precision `rel_tol` and returns the largest S known feasible.
    """
    g = _check_gammas(gammas, partition.n_frames)
    sg = _check_signs(signs, partition.n_frames)
    cap = float(np.min(design_caps(partition.dim, g, partition.group_sizes)))

    def feasible(s: float) -> bool:
        try:
            build_geam(partition, g, s, sg, tol=tol)
        except PositivityError:
            return False
        return True

    if feasible(cap):
        return cap
    hi = cap
    lo = cap / 2.0
    for _ in range(80):
        if feasible(lo):
            break
        hi = lo
        lo /= 2.0
    else:
        raise FeasibilityError(
            "no positive design constant is feasible; the frame combinations"
            " have too-negative spectra for this basis and sign choice"
        )
    while hi - lo > rel_tol * lo:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo
