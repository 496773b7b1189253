"""JSON formats for states, vectors and certificates.

Complex entries are ``[re, im]`` pairs; matrices are row-major lists of rows.
A state file is ``{"dim_a", "dim_b", "matrix"}`` and a vector file
``{"dim_a", "dim_b", "amps"}``, both with the flat index ``i * dim_b + j``.
Extra keys are ignored on load.

Floats are written with Python's shortest round-trip repr, so every value
reads back bit-for-bit.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path
from typing import Any

import numpy as np

from .criteria import WitnessValue, state_hash
from .distill import BallReport, DistillCertificate
from .errors import ParseError
from .protocol import SchmidtCertificate
from .states import BipartiteVector, DensityOperator
from .witness import EdgeWitness

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "state_to_json",
    "vector_to_json",
    "state_from_json",
    "vector_from_json",
    "load_json",
    "load_state",
    "dump_json",
    "witness_to_json",
    "witness_from_json",
    "certificate_to_json",
    "certificate_from_json",
    "schmidt_certificate_to_json",
    "edge_witness_to_json",
    "edge_witness_from_json",
    "ball_report_to_json",
]


def _num(x) -> float:
    return float(x)


def matrix_to_json(m) -> list:
    a = np.asarray(m, dtype=complex)
    return [[[_num(z.real), _num(z.imag)] for z in row] for row in a]


def _complex_array(data) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"malformed complex array: {exc}") from exc
    if arr.shape[-1:] != (2,):
        raise ParseError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_from_json(data) -> np.ndarray:
    m = _complex_array(data)
    if m.ndim != 2:
        raise ParseError("matrix must be a list of rows")
    return m


def state_to_json(rho: DensityOperator, **extra) -> dict:
    return {"dim_a": rho.dim_a, "dim_b": rho.dim_b, "matrix": matrix_to_json(rho.mat), **extra}


def vector_to_json(v: BipartiteVector, **extra) -> dict:
    return {
        "dim_a": v.dim_a,
        "dim_b": v.dim_b,
        "amps": [[_num(z.real), _num(z.imag)] for z in v.amps],
        **extra,
    }


def _dims(data: dict) -> tuple[int, int]:
    try:
        return int(data["dim_a"]), int(data["dim_b"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"missing or invalid dimensions: {exc}") from exc


def state_from_json(data: dict) -> DensityOperator:
    if "matrix" not in data:
        raise ParseError("state JSON needs a 'matrix' key")
    da, db = _dims(data)
    try:
        return DensityOperator(matrix_from_json(data["matrix"]), da, db)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def vector_from_json(data: dict) -> BipartiteVector:
    if "amps" not in data:
        raise ParseError("vector JSON needs an 'amps' key")
    da, db = _dims(data)
    try:
        return BipartiteVector(_complex_array(data["amps"]), da, db)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def load_json(path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def load_state(path) -> DensityOperator:
    """Read a state file; a vector file is turned into its projector."""
    data = load_json(path)
    if not isinstance(data, dict):
        raise ParseError("top-level JSON must be an object")
    if "matrix" in data:
        return state_from_json(data)
    if "amps" in data:
        return vector_from_json(data).projector()
    raise ParseError("file is neither a state nor a vector")


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def witness_to_json(wv: WitnessValue) -> dict:
    return {"p": int(wv.p), "value": _num(wv.value), "psi": vector_to_json(wv.psi), "state_ref": wv.state_ref}


def witness_from_json(data: dict, rho: DensityOperator | None = None, atol: float = 1e-12) -> WitnessValue:
    """Rebuild a witness value; with ``rho`` given it is recomputed and checked."""
    try:
        wv = WitnessValue(float(data["value"]), vector_from_json(data["psi"]), int(data["p"]), data.get("state_ref", ""))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed witness JSON: {exc}") from exc
    if rho is not None:
        if wv.state_ref and wv.state_ref != state_hash(rho):
            raise ParseError("witness refers to a different state")
        if not wv.revalidate(rho, atol):
            raise ParseError(f"witness value does not revalidate: {wv.recompute(rho)!r} vs {wv.value!r}")
    return wv


def certificate_to_json(cert: DistillCertificate) -> dict:
    p_a, p_b = cert.projectors()
    return {
        "n_copies": cert.n_copies,
        "epsilon": _num(cert.epsilon),
        "single_copy_dims": list(cert.single_copy_dims),
        "psi": vector_to_json(cert.psi),
        "state_ref": cert.state_ref,
        "P_A": matrix_to_json(p_a),
        "P_B": matrix_to_json(p_b),
    }


def certificate_from_json(data: dict, rho: DensityOperator | None = None) -> DistillCertificate:
    try:
        cert = DistillCertificate(
            int(data["n_copies"]),
            vector_from_json(data["psi"]),
            float(data["epsilon"]),
            tuple(int(d) for d in data["single_copy_dims"]),
            data.get("state_ref", ""),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed certificate JSON: {exc}") from exc
    if rho is not None and not cert.revalidate(rho):
        raise ParseError("certificate does not revalidate against the given state")
    return cert


def schmidt_certificate_to_json(cert: SchmidtCertificate) -> dict:
    return {
        "m": cert.m,
        "F": _num(cert.F),
        "p": cert.p,
        "filter": matrix_to_json(cert.filter),
        "witness": witness_to_json(cert.witness),
        "p_lower": cert.p_lower,
        "isotropic_witness": _num(cert.isotropic_witness),
    }


def edge_witness_to_json(w: EdgeWitness) -> dict:
    return {
        "P": matrix_to_json(w.P),
        "Q": matrix_to_json(w.Q),
        "epsilon": _num(w.epsilon),
        "dims": list(w.dims),
        "product_minimum": _num(w.product_minimum),
        "state_ref": w.state_ref,
    }


def edge_witness_from_json(data: dict) -> EdgeWitness:
    try:
        return EdgeWitness(
            matrix_from_json(data["P"]),
            matrix_from_json(data["Q"]),
            float(data["epsilon"]),
            tuple(int(d) for d in data["dims"]),
            float(data.get("product_minimum", 0.0)),
            data.get("state_ref", ""),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed witness JSON: {exc}") from exc


def ball_report_to_json(report: BallReport) -> dict:
    return asdict(report)
