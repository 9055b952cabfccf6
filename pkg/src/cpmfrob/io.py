"""JSON structure files and report files.

A structure file looks like::

    {"version": "1", "kind": "cp_comonoid", "dims": 2,
     "payload": {"delta": {"kraus": [M, ...]}, "counit": {"kraus": [M, ...]}},
     "metadata": {"generator": "spider:2", "conventions": "..."}}

where every matrix ``M`` is a row-major nested list of ``[re, im]`` pairs.
``dims`` is an int for algebras and comonoids and ``[in_dim, out_dim]`` for
``cp_map``. Floats are written with ``repr`` precision, so parsing an
emitted file gives back bit-identical arrays.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .canonicalize import CanonicalizationResult, IsometryDecomposition
from .cpmap import CpMap
from .errors import DimMismatch, ParseError
from .frobenius import AxiomReport, CpComonoid, FrobeniusAlgebra, PhaseReport

VERSION = "1"
KINDS = ("fhilb_algebra", "cp_comonoid", "cp_map")
CONVENTIONS = (
    "row-major matrices; kron index i1*rows(b)+i2; "
    "choi = sum_ij E_ij (x) phi(E_ij), input factor first; purification environment second"
)


def encode_matrix(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def decode_matrix(data: Any, shape: tuple[int, int]) -> np.ndarray:
    rows, cols = shape
    if not isinstance(data, list) or len(data) != rows:
        raise ParseError(f"expected {rows} rows, got {_describe(data)}")
    out = np.zeros((rows, cols), dtype=np.complex128)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f"row {i}: expected {cols} entries, got {_describe(row)}")
        for j, z in enumerate(row):
            if (
                not isinstance(z, list)
                or len(z) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)
            ):
                raise ParseError(f"entry ({i},{j}) is not an [re, im] pair: {z!r}")
            re, im = float(z[0]), float(z[1])
            if not (math.isfinite(re) and math.isfinite(im)):
                raise ParseError(f"entry ({i},{j}) is not finite")
            out[i, j] = complex(re, im)
    return out


def _describe(x) -> str:
    return f"list of length {len(x)}" if isinstance(x, list) else type(x).__name__


def _encode_cp(phi: CpMap) -> dict:
    return {"kraus": [encode_matrix(a) for a in phi.kraus]}


def _decode_cp(data: Any, in_dim: int, out_dim: int) -> CpMap:
    if not isinstance(data, dict) or not isinstance(data.get("kraus"), list) or not data["kraus"]:
        raise ParseError("CP map payload needs a non-empty 'kraus' list")
    ops = tuple(decode_matrix(k, (out_dim, in_dim)) for k in data["kraus"])
    return CpMap(in_dim, out_dim, ops)


def to_structure(obj, metadata: dict[str, str] | None = None) -> dict:
    meta = {"conventions": CONVENTIONS}
    meta.update({str(k): str(v) for k, v in (metadata or {}).items()})
    if isinstance(obj, FrobeniusAlgebra):
        kind, dims = "fhilb_algebra", obj.dim
        payload = {"delta": encode_matrix(obj.delta), "epsilon": encode_matrix(obj.epsilon)}
    elif isinstance(obj, CpComonoid):
        kind, dims = "cp_comonoid", obj.dim
        payload = {"delta": _encode_cp(obj.delta), "counit": _encode_cp(obj.counit)}
    elif isinstance(obj, CpMap):
        kind, dims = "cp_map", [obj.in_dim, obj.out_dim]
        payload = _encode_cp(obj)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return {"version": VERSION, "kind": kind, "dims": dims, "payload": payload, "metadata": meta}


def from_structure(doc: Any):
    """Parse a structure document; returns (object, metadata)."""
    if not isinstance(doc, dict):
        raise ParseError("structure file must be a JSON object")
    if doc.get("version") != VERSION:
        raise ParseError(f"unsupported version {doc.get('version')!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}")
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict) or not all(isinstance(v, str) for v in meta.values()):
        raise ParseError("metadata must be a map of strings")
    dims = doc.get("dims")
    payload = doc.get("payload")
    if not isinstance(payload, dict):
        raise ParseError("payload must be an object")
    try:
        if kind == "cp_map":
            if (
                not isinstance(dims, list)
                or len(dims) != 2
                or not all(_is_dim(x) for x in dims)
            ):
                raise ParseError("cp_map dims must be [in_dim, out_dim]")
            return _decode_cp(payload, dims[0], dims[1]), meta
        if not _is_dim(dims):
            raise ParseError(f"{kind} dims must be a non-negative integer")
        d = dims
        if kind == "fhilb_algebra":
            delta = decode_matrix(payload.get("delta"), (d * d, d))
            eps = decode_matrix(payload.get("epsilon"), (1, d))
            return FrobeniusAlgebra(d, delta, eps), meta
        delta = _decode_cp(payload.get("delta"), d, d * d)
        counit = _decode_cp(payload.get("counit"), d, 1)
        return CpComonoid(d, delta, counit), meta
    except DimMismatch as exc:
        raise ParseError(str(exc)) from exc


def _is_dim(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n"


def loads(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


def emit(obj, metadata: dict[str, str] | None = None) -> str:
    return dumps(to_structure(obj, metadata))


def parse(text: str):
    return from_structure(loads(text))[0]


def read_structure(path: str | Path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return from_structure(loads(text))


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text)


# -- report payloads -----------------------------------------------------


def _opt_matrix(m):
    return None if m is None else [[float(x) for x in row] for row in np.asarray(m)]


def axiom_report_to_dict(r: AxiomReport) -> dict:
    return {
        "residuals": dict(r.residuals),
        "snake_trace": r.snake_trace,
        "lambda_matrix": _opt_matrix(r.lambda_matrix),
        "rho_matrix": _opt_matrix(r.rho_matrix),
        "doubling": None if r.doubling is None else dict(r.doubling),
    }


def axiom_report_from_dict(d: dict) -> AxiomReport:
    def mat(x):
        return None if x is None else np.array(x, dtype=float).reshape(len(x), -1)

    return AxiomReport(
        residuals={k: float(v) for k, v in d["residuals"].items()},
        snake_trace=float(d["snake_trace"]),
        lambda_matrix=mat(d.get("lambda_matrix")),
        rho_matrix=mat(d.get("rho_matrix")),
        doubling=d.get("doubling"),
    )


def phase_report_to_dict(p: PhaseReport) -> dict:
    return p.as_dict()


def phase_report_from_dict(d: dict) -> PhaseReport:
    return PhaseReport(d["alpha"], d["rho"], d["sigma"], d["phi"], d["lambda"])


def decomposition_to_dict(dec: IsometryDecomposition) -> dict:
    return {
        "n": dec.n,
        "coeffs": list(dec.coeffs),
        "isometries": [encode_matrix(v) for v in dec.isometries],
    }


def decomposition_from_dict(d: dict, in_dim: int, out_dim: int) -> IsometryDecomposition:
    return IsometryDecomposition(
        [float(q) for q in d["coeffs"]],
        [decode_matrix(v, (out_dim, in_dim)) for v in d["isometries"]],
    )


def canonicalization_to_dict(r: CanonicalizationResult) -> dict:
    return {
        "algebra": to_structure(r.algebra),
        "lambda_used": r.lambda_used,
        "residual_delta": r.residual_delta,
        "residual_epsilon": r.residual_epsilon,
        "report": axiom_report_to_dict(r.report),
    }


def canonicalization_from_dict(d: dict) -> CanonicalizationResult:
    algebra, _ = from_structure(d["algebra"])
    algebra = FrobeniusAlgebra(algebra.dim, algebra.delta, algebra.epsilon, verified=True)
    return CanonicalizationResult(
        algebra=algebra,
        lambda_used=float(d["lambda_used"]),
        residual_delta=float(d["residual_delta"]),
        residual_epsilon=float(d["residual_epsilon"]),
        report=axiom_report_from_dict(d["report"]),
    )
