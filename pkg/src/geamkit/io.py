"""JSON schemas and (de)serialization.

Complex scalars are encoded as two-element arrays [re, im]; matrices as
row-major nested arrays; reals in full double precision (Python's shortest
round-trip float formatting), so identical objects serialize to identical
bytes.

Document shapes:

* GEAM:    {"dim", "frames": [{"gamma", "sign", "ops": [matrix, ...]}, ...],
            "params": {"a", "b", "c", "f", "S"}, "certificate"}
* state:   {"dims": [dA, dB] or [d], "matrix": matrix}
* witness: {"dims": [dA, dB], "matrix": matrix,
            "provenance": {"geam_sha256", "L", "K", "rotations"}}
* report:  {"criterion", "lhs", "bound", "violated", "tolerance"}
* detection: {"value", "verdict"}
"""

from __future__ import annotations

import dataclasses
import hashlib
import json

import numpy as np

from .basis import OperatorBasis
from .errors import SchemaError
from .geam import (
    DesignCertificate,
    Geam,
    STRUCTURE_TOL,
    check_conical_design,
    validate_geam,
)
from .maps import DetectionRecord, Rotation, Witness
from .states import require_density


def encode_matrix(m) -> list:
    arr = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in arr]


def decode_matrix(obj, name: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(
            [[complex(float(z[0]), float(z[1])) for z in row] for row in obj],
            dtype=complex,
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise SchemaError(f"{name}: entries must be [re, im] pairs in nested rows") from exc
    if arr.ndim != 2:
        raise SchemaError(f"{name}: expected a 2-D matrix")
    return arr


def canonical_dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def certificate_to_dict(cert: DesignCertificate) -> dict:
    return {
        "is_conical": cert.is_conical,
        "S": cert.S,
        "kappa_plus": cert.kappa_plus,
        "kappa_minus": cert.kappa_minus,
        "residual": cert.residual,
    }


def geam_to_dict(geam: Geam, certificate: DesignCertificate | None = None) -> dict:
    if certificate is None:
        certificate = check_conical_design(geam)
    return {
        "dim": geam.dim,
        "frames": [
            {
                "gamma": geam.gammas[alpha],
                "sign": geam.signs[alpha],
                "ops": [encode_matrix(p) for p in frame],
            }
            for alpha, frame in enumerate(geam.operators)
        ],
        "params": {
            "a": list(geam.a),
            "b": list(geam.b),
            "c": list(geam.c),
            "f": geam.f,
            "S": geam.design_constant(),
        },
        "certificate": certificate_to_dict(certificate),
    }


def geam_from_dict(data: dict, tol: float = STRUCTURE_TOL) -> Geam:
    """Decode and re-validate a GEAM document (stored params are not trusted)."""
    try:
        frames = data["frames"]
        ops = [[decode_matrix(m, "frame op") for m in frame["ops"]] for frame in frames]
        signs = [int(frame.get("sign", 1)) for frame in frames]
        dim = int(data["dim"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed GEAM document: {exc!r}") from exc
    geam = validate_geam(ops, tol=tol)
    if geam.dim != dim:
        raise SchemaError(f"declared dim {dim} does not match operators ({geam.dim})")
    return dataclasses.replace(geam, signs=tuple(signs))


def geam_hash(geam: Geam) -> str:
    """sha256 over the canonical operator payload (frames only)."""
    payload = canonical_dumps(
        [
            {"gamma": geam.gammas[i], "ops": [encode_matrix(p) for p in geam.operators[i]]}
            for i in range(geam.n_frames)
        ]
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def state_to_dict(rho, dims) -> dict:
    return {"dims": [int(d) for d in dims], "matrix": encode_matrix(rho)}


def state_from_dict(data: dict, tol: float = 1e-10) -> tuple[np.ndarray, list[int]]:
    try:
        dims = [int(d) for d in data["dims"]]
        matrix = decode_matrix(data["matrix"], "state matrix")
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed state document: {exc!r}") from exc
    if len(dims) not in (1, 2):
        raise SchemaError(f"dims must have one or two entries, got {dims}")
    total = int(np.prod(dims))
    if matrix.shape != (total, total):
        raise SchemaError(f"state matrix shape {matrix.shape} does not match dims {dims}")
    return require_density(matrix, tol), dims


def rotation_to_dict(rot: Rotation) -> dict:
    if rot.kind == "identity":
        return {"kind": "identity"}
    if rot.kind == "permutation":
        return {"kind": "permutation", "indices": list(rot.data)}
    if rot.kind == "random":
        return {"kind": "random", "seed": int(rot.data)}
    return {"kind": "generator", "matrix": [[float(x) for x in row] for row in rot.data]}


def rotation_spec_from_dict(data: dict):
    """Translate a rotation document into a make_rotation spec."""
    try:
        kind = data["kind"]
    except (KeyError, TypeError) as exc:
        raise SchemaError("rotation document needs a 'kind'") from exc
    if kind == "identity":
        return "identity"
    if kind == "permutation":
        return [int(i) for i in data["indices"]]
    if kind == "random":
        return ("random", int(data["seed"]))
    if kind == "generator":
        return np.asarray(data["matrix"], dtype=float)
    raise SchemaError(f"unknown rotation kind {kind!r}")


def witness_to_dict(w: Witness, geam_sha256: str | None = None) -> dict:
    doc = {"dims": list(w.dims), "matrix": encode_matrix(w.matrix)}
    if w.provenance is not None:
        spec = w.provenance
        doc["provenance"] = {
            "geam_sha256": geam_sha256 or geam_hash(spec.geam),
            "L": spec.L,
            "K": spec.K,
            "rotations": [rotation_to_dict(r) for r in spec.rotations],
        }
    return doc


def witness_from_dict(data: dict) -> Witness:
    try:
        dims = tuple(int(d) for d in data["dims"])
        matrix = decode_matrix(data["matrix"], "witness matrix")
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed witness document: {exc!r}") from exc
    if len(dims) != 2:
        raise SchemaError(f"witness dims must have two entries, got {list(dims)}")
    return Witness(matrix=matrix, dims=dims, provenance=None)


def report_to_dict(report) -> dict:
    return {
        "criterion": report.criterion,
        "lhs": report.lhs,
        "bound": report.bound,
        "violated": report.violated,
        "tolerance": report.tolerance,
    }


def detection_to_dict(record: DetectionRecord) -> dict:
    return {"value": record.value, "verdict": record.verdict, "tolerance": record.tolerance}


def basis_to_dict(basis: OperatorBasis) -> dict:
    return {"dim": basis.dim, "elements": [encode_matrix(e) for e in basis.elements]}


def basis_from_dict(data: dict) -> OperatorBasis:
    try:
        dim = int(data["dim"])
        elements = tuple(decode_matrix(e, "basis element") for e in data["elements"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed basis document: {exc!r}") from exc
    return OperatorBasis(dim, elements)
