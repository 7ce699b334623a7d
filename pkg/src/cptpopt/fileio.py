"""File formats: JSON matrices, ensembles, certificates, reports; delimited sweeps.

Matrices are ``{"dim": n, "entries": [[[re, im], ...], ...]}``; ensembles are
``{"d1": ..., "d2": ..., "pairs": [{"weight": w, "in": [[re, im], ...],
"out": [...]}, ...]}``; certificates are ``{"a0": x, "A": <matrix doc>}``.
Floats are written with Python's shortest round-trip representation, so
every value re-parses to the exact same double.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np

from .certify import CertReport
from .dual import DualCertificate
from .model import TransformationEnsemble, fidelity_operator
from .shifter import SweepRecord

__all__ = [
    "read_matrix",
    "write_matrix",
    "read_ensemble",
    "write_ensemble",
    "read_certificate",
    "write_certificate",
    "write_report",
    "read_target",
    "SWEEP_HEADER",
    "write_sweep",
]

SWEEP_HEADER = "alpha,F_analytic,F_numeric,gap,bound_A0,certified"


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _dump_json(doc, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _matrix_from_doc(doc, label: str) -> np.ndarray:
    if not isinstance(doc, dict):
        raise ValueError(f"{label}: expected an object with 'dim' and 'entries'")
    for key in ("dim", "entries"):
        if key not in doc:
            raise ValueError(f"{label}: missing field '{key}'")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ValueError(f"{label}: field 'dim' must be a positive integer")
    entries = doc["entries"]
    if not isinstance(entries, list) or len(entries) != dim:
        raise ValueError(f"{label}: 'entries' must have {dim} rows")
    try:
        arr = np.array(entries, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{label}: 'entries' must be [re, im] number pairs") from exc
    if arr.shape != (dim, dim, 2):
        raise ValueError(f"{label}: 'entries' must be a {dim}x{dim} array of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _matrix_doc(matrix) -> dict:
    M = np.asarray(matrix, dtype=complex)
    return {
        "dim": int(M.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in M],
    }


def read_matrix(path) -> np.ndarray:
    return _matrix_from_doc(_load_json(path), str(path))


def write_matrix(path, matrix):
    _dump_json(_matrix_doc(matrix), path)


def _vector_from_doc(doc, label: str) -> np.ndarray:
    try:
        arr = np.array(doc, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{label}: must be [re, im] number pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"{label}: must be a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def read_ensemble(path) -> TransformationEnsemble:
    doc = _load_json(path)
    label = str(path)
    for key in ("d1", "d2", "pairs"):
        if key not in doc:
            raise ValueError(f"{label}: missing field '{key}'")
    pairs = []
    if not isinstance(doc["pairs"], list) or not doc["pairs"]:
        raise ValueError(f"{label}: field 'pairs' must be a non-empty list")
    for idx, pair in enumerate(doc["pairs"]):
        for key in ("weight", "in", "out"):
            if key not in pair:
                raise ValueError(f"{label}: pair {idx} missing field '{key}'")
        pairs.append(
            (
                float(pair["weight"]),
                _vector_from_doc(pair["in"], f"{label}: pair {idx} 'in'"),
                _vector_from_doc(pair["out"], f"{label}: pair {idx} 'out'"),
            )
        )
    return TransformationEnsemble(int(doc["d1"]), int(doc["d2"]), pairs)


def write_ensemble(path, ensemble: TransformationEnsemble):
    doc = {
        "d1": ensemble.d1,
        "d2": ensemble.d2,
        "pairs": [
            {
                "weight": float(w),
                "in": [[float(z.real), float(z.imag)] for z in vin],
                "out": [[float(z.real), float(z.imag)] for z in vout],
            }
            for w, vin, vout in ensemble.pairs
        ],
    }
    _dump_json(doc, path)


def read_certificate(path) -> DualCertificate:
    doc = _load_json(path)
    label = str(path)
    for key in ("a0", "A"):
        if key not in doc:
            raise ValueError(f"{label}: missing field '{key}'")
    return DualCertificate(float(doc["a0"]), _matrix_from_doc(doc["A"], f"{label}: field 'A'"))


def write_certificate(path, certificate: DualCertificate):
    _dump_json({"a0": float(certificate.a0), "A": _matrix_doc(certificate.A)}, path)


def write_report(path, report: CertReport):
    _dump_json(dataclasses.asdict(report), path)


def read_target(path, d1: int | None = None):
    """Load a fidelity operator from an ensemble or matrix file.

    Ensemble files carry their own dimensions; for a matrix file the input
    dimension comes from ``d1`` (the output dimension is dim/d1) or, when
    omitted, from splitting the dimension as a perfect square.
    Returns (R, d1, d2).
    """
    doc = _load_json(path)
    if isinstance(doc, dict) and "pairs" in doc:
        ensemble = read_ensemble(path)
        return fidelity_operator(ensemble), ensemble.d1, ensemble.d2
    R = _matrix_from_doc(doc, str(path))
    dim = R.shape[0]
    if d1 is None:
        d1 = int(round(dim**0.5))
        if d1 * d1 != dim:
            raise ValueError(f"{path}: cannot infer d1 for dim {dim}; pass --d1")
    if d1 < 1 or dim % d1:
        raise ValueError(f"{path}: d1 = {d1} does not divide dim {dim}")
    return R, d1, dim // d1


def write_sweep(path, records: list[SweepRecord]):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_sweep(records))


def format_sweep(records: list[SweepRecord]) -> str:
    lines = [SWEEP_HEADER]
    for rec in records:
        lines.append(
            f"{rec.alpha!r},{rec.f_analytic!r},{rec.f_numeric!r},"
            f"{rec.gap!r},{rec.bound_a0!r},{'true' if rec.certified else 'false'}"
        )
    return "\n".join(lines) + "\n"
