"""Command-line front end.

Subcommands: `geam build|validate|check-design|max-s`, `witness`, `criteria`,
`basis`.  All artifacts are JSON (schemas in `geamkit.io`).  Exit codes:
0 success, 2 domain/validation failure, 3 I/O or parse failure.  The default
tolerance can be overridden by the GEAM_TOL environment variable; an explicit
--tol flag wins over both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import io as gio
from .basis import gell_mann_basis, partition_basis
from .coincidence import pure_ioc_bound
from .criteria import (
    correlation_matrix,
    enhanced_criterion,
    trace_criterion,
    trace_norm_criterion,
)
from .errors import GeamkitError, SchemaError, ValidationError
from .geam import (
    STRUCTURE_TOL,
    build_geam,
    check_conical_design,
    design_caps,
    max_feasible_S,
    validate_geam,
)
from .maps import build_map, choi_witness, detect, mehta_ratio, min_product_expectation
from .rng import PortableRng, derive_seed
from .states import require_density


def _parse_scalar(text: str) -> float:
    """Exact rational entry ('1/9', '0.25') converted to float once."""
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"cannot parse number {text!r}") from exc


def _parse_sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"cannot parse sizes {text!r}") from exc


def _parse_gammas(text: str, n: int) -> tuple[float, ...]:
    if text == "uniform":
        return tuple(float(Fraction(1, n)) for _ in range(n))
    vals = tuple(_parse_scalar(tok) for tok in text.split(","))
    return vals


def _parse_signs(text: str | None, n: int):
    if text is None:
        return None
    mapping = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}
    try:
        return tuple(mapping[tok.strip()] for tok in text.split(","))
    except KeyError as exc:
        raise ValidationError(f"signs must be '+' or '-', got {text!r}") from exc


def _parse_rotation(text: str):
    if text == "identity":
        return "identity"
    if text.startswith("perm:"):
        return [int(tok) for tok in text[len("perm:"):].split(",")]
    if text.startswith("random:"):
        return ("random", int(text[len("random:"):]))
    raise ValidationError(
        f"unknown rotation spec {text!r}; use identity, perm:i,j,..., or random:SEED"
    )


def _tolerance(args) -> float:
    if getattr(args, "tol", None) is not None:
        return args.tol
    env = os.environ.get("GEAM_TOL")
    if env:
        try:
            return float(env)
        except ValueError as exc:
            raise ValidationError(f"GEAM_TOL must be a float, got {env!r}") from exc
    return STRUCTURE_TOL


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(args, obj) -> None:
    text = gio.canonical_dumps(obj)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _partition_from_args(args, tol: float):
    sizes = _parse_sizes(args.sizes)
    if args.basis:
        basis = gio.basis_from_dict(_load_json(args.basis))
        if basis.dim != args.dim:
            raise ValidationError(f"basis dim {basis.dim} does not match -d {args.dim}")
    else:
        basis = gell_mann_basis(args.dim)
    return partition_basis(basis, sizes), sizes


def _cmd_geam_build(args) -> int:
    tol = _tolerance(args)
    partition, sizes = _partition_from_args(args, tol)
    gammas = _parse_gammas(args.gamma, len(sizes))
    signs = _parse_signs(args.signs, len(sizes))
    geam = build_geam(partition, gammas, _parse_scalar(args.s), signs, tol=tol)
    _emit(args, gio.geam_to_dict(geam, check_conical_design(geam)))
    return 0


def _cmd_geam_validate(args) -> int:
    tol = _tolerance(args)
    geam = gio.geam_from_dict(_load_json(args.geam), tol=tol)
    _emit(args, gio.geam_to_dict(geam, check_conical_design(geam)))
    return 0


def _cmd_geam_check_design(args) -> int:
    tol = _tolerance(args)
    geam = gio.geam_from_dict(_load_json(args.geam), tol=tol)
    _emit(args, gio.certificate_to_dict(check_conical_design(geam)))
    return 0


def _cmd_geam_max_s(args) -> int:
    tol = _tolerance(args)
    partition, sizes = _partition_from_args(args, tol)
    gammas = _parse_gammas(args.gamma, len(sizes))
    signs = _parse_signs(args.signs, len(sizes))
    cap = float(np.min(design_caps(partition.dim, gammas, sizes)))
    best = max_feasible_S(partition, gammas, signs, tol=tol)
    _emit(args, {"max_s": best, "cap": cap, "cap_attained": best == cap})
    return 0


def _cmd_witness(args) -> int:
    tol = _tolerance(args)
    geam = gio.geam_from_dict(_load_json(args.geam), tol=tol)
    k = args.K if args.K is not None else geam.n_frames
    l = args.L if args.L is not None else k
    rotations = [_parse_rotation(tok) for tok in (args.rotation or ["identity"])]
    if len(rotations) == 1:
        rotations = rotations * k
    spec = build_map(geam, l, k, rotations)
    witness = choi_witness(spec)
    doc = gio.witness_to_dict(witness)
    if args.detect:
        states = _load_json(args.detect)
        if isinstance(states, dict):
            states = [states]
        records = []
        for entry in states:
            rho, dims = gio.state_from_dict(entry)
            records.append(gio.detection_to_dict(detect(witness, rho)))
        doc["detections"] = records
    if args.verify:
        value, _ = min_product_expectation(witness, restarts=args.restarts, seed=args.seed)
        rng = PortableRng(derive_seed(args.seed, 1_000_003))
        d = geam.dim
        worst = -np.inf
        for _ in range(args.samples):
            v = rng.unit_vector(d)
            worst = max(worst, mehta_ratio(spec, np.outer(v, v.conj())))
        doc["verification"] = {
            "min_product_expectation": value,
            "restarts": args.restarts,
            "mehta_max_ratio": worst,
            "mehta_samples": args.samples,
            "mehta_bound": 1.0 / (d - 1.0),
            "seed": args.seed,
        }
    _emit(args, doc)
    return 0


def _cmd_criteria(args) -> int:
    tol = _tolerance(args)
    geam_a = gio.geam_from_dict(_load_json(args.geam_a), tol=tol)
    geam_b = gio.geam_from_dict(_load_json(args.geam_b), tol=tol) if args.geam_b else geam_a
    states = _load_json(args.states)
    if isinstance(states, dict):
        states = [states]
    reports = []
    counts = {"TRACE": 0, "TRACE_NORM": 0, "ENHANCED": 0}
    for index, entry in enumerate(states):
        rho, dims = gio.state_from_dict(entry)
        corr = correlation_matrix(geam_a, geam_b, rho)
        item: dict = {"state": index}
        try:
            rep = trace_criterion(corr, geam_a, geam_b)
            item["trace"] = gio.report_to_dict(rep)
            counts["TRACE"] += rep.violated
        except ValidationError as exc:
            item["trace"] = {"error": str(exc)}
        rep = trace_norm_criterion(corr, geam_a, geam_b)
        item["trace_norm"] = gio.report_to_dict(rep)
        counts["TRACE_NORM"] += rep.violated
        rep = enhanced_criterion(geam_a, geam_b, rho)
        item["enhanced"] = gio.report_to_dict(rep)
        counts["ENHANCED"] += rep.violated
        reports.append(item)
    _emit(args, {
        "reports": reports,
        "summary": {"states": len(states), "violations": {k: int(v) for k, v in counts.items()}},
    })
    return 0


def _cmd_basis(args) -> int:
    _emit(args, gio.basis_to_dict(gell_mann_basis(args.dim)))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geamkit",
        description="Generalized equiangular measurements, entanglement witnesses,"
        " and correlation-matrix separability criteria.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    geam = sub.add_parser("geam", help="build, validate, or certify measurements")
    gsub = geam.add_subparsers(dest="subcommand", required=True)

    def add_build_args(p):
        p.add_argument("-d", "--dim", type=int, required=True)
        p.add_argument("--sizes", required=True, help="comma-separated frame sizes, e.g. 2,2,2")
        p.add_argument("--gamma", default="uniform", help="'uniform' or comma-separated weights")
        p.add_argument("--signs", default=None, help="comma-separated +/- per frame")
        p.add_argument("--basis", default=None, help="JSON operator-basis file")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("-o", "--output", default=None)

    build = gsub.add_parser("build", help="construct a GEAM over a basis partition")
    add_build_args(build)
    build.add_argument("--s", required=True, help="design constant, rational accepted (e.g. 1/9)")
    build.set_defaults(func=_cmd_geam_build)

    validate = gsub.add_parser("validate", help="validate raw operators as a GEAM")
    validate.add_argument("geam")
    validate.add_argument("--tol", type=float, default=None)
    validate.add_argument("-o", "--output", default=None)
    validate.set_defaults(func=_cmd_geam_validate)

    checkd = gsub.add_parser("check-design", help="certify the conical 2-design property")
    checkd.add_argument("geam")
    checkd.add_argument("--tol", type=float, default=None)
    checkd.add_argument("-o", "--output", default=None)
    checkd.set_defaults(func=_cmd_geam_check_design)

    maxs = gsub.add_parser("max-s", help="largest feasible design constant")
    add_build_args(maxs)
    maxs.set_defaults(func=_cmd_geam_max_s)

    witness = sub.add_parser("witness", help="build an entanglement witness from a GEAM")
    witness.add_argument("--geam", required=True)
    witness.add_argument("-L", type=int, default=None, help="number of negated frames (default K)")
    witness.add_argument("-K", type=int, default=None, help="number of frames used (default all)")
    witness.add_argument(
        "--rotation",
        action="append",
        default=None,
        help="identity | perm:i,j,... | random:SEED (repeat per frame or give one for all)",
    )
    witness.add_argument("--detect", default=None, help="state JSON (object or array) to test")
    witness.add_argument("--verify", action="store_true", help="embed see-saw and spectral-ratio checks")
    witness.add_argument("--seed", type=int, default=0)
    witness.add_argument("--restarts", type=int, default=32)
    witness.add_argument("--samples", type=int, default=500)
    witness.add_argument("--tol", type=float, default=None)
    witness.add_argument("-o", "--output", default=None)
    witness.set_defaults(func=_cmd_witness)

    criteria = sub.add_parser("criteria", help="run separability criteria over states")
    criteria.add_argument("--geam-a", required=True)
    criteria.add_argument("--geam-b", default=None)
    criteria.add_argument("--states", required=True)
    criteria.add_argument("--tol", type=float, default=None)
    criteria.add_argument("-o", "--output", default=None)
    criteria.set_defaults(func=_cmd_criteria)

    basis = sub.add_parser("basis", help="export the canonical operator basis")
    basis.add_argument("-d", "--dim", type=int, required=True)
    basis.add_argument("-o", "--output", default=None)
    basis.set_defaults(func=_cmd_basis)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except GeamkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
