"""Shared JSON dialect for every exchange format.

Complex scalars are two-element arrays [re, im]. Matrices are
{"rows", "cols", "data"} with data a row-major list of [re, im] pairs.
Spectra are {"atoms", "weights"}. Symbols, kernels, operators,
factorizations, norm estimates and reports embed these building blocks.
Dumping is deterministic: keys are sorted and floats use their shortest
round-trip representation.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ParseError
from .factorization import FactorizationData
from .norms import NormEstimate, TheoremReport
from .schur import SymbolTensor
from .spectral import Kernel, NormalOperator, WeightedSpectrum

__all__ = [
    "encode_matrix",
    "decode_matrix",
    "encode_spectrum",
    "decode_spectrum",
    "encode_kernel",
    "decode_kernel",
    "encode_symbol",
    "decode_symbol",
    "encode_operator",
    "decode_operator",
    "encode_factorization",
    "decode_factorization",
    "encode_estimate",
    "encode_report",
    "dumps",
    "load_path",
]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_path(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read JSON from {path}: {exc}") from exc


def _c(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _nested(values: np.ndarray):
    if values.ndim == 0:
        return _c(values[()])
    return [_nested(v) for v in values]


def _from_nested(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise ParseError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def encode_matrix(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [_c(z) for z in m.reshape(-1)],
    }


def decode_matrix(obj) -> np.ndarray:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        data = _from_nested(obj["data"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad matrix object: {exc}") from exc
    if data.size != rows * cols:
        raise ParseError(
            f"matrix data length {data.size} != rows*cols = {rows * cols}"
        )
    return data.reshape(rows, cols)


def encode_spectrum(s: WeightedSpectrum) -> dict:
    return {
        "atoms": [_c(a) for a in s.atoms],
        "weights": [float(w) for w in s.weights],
    }


def decode_spectrum(obj) -> WeightedSpectrum:
    try:
        atoms = _from_nested(obj["atoms"])
        weights = np.asarray(obj["weights"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad spectrum object: {exc}") from exc
    return WeightedSpectrum(atoms, weights)


def encode_kernel(k: Kernel) -> dict:
    return {
        "domain": encode_spectrum(k.domain),
        "codomain": encode_spectrum(k.codomain),
        "values": _nested(k.values),
    }


def decode_kernel(obj) -> Kernel:
    try:
        dom = decode_spectrum(obj["domain"])
        cod = decode_spectrum(obj["codomain"])
        values = _from_nested(obj["values"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad kernel object: {exc}") from exc
    return Kernel(dom, cod, values)


def encode_symbol(phi: SymbolTensor) -> dict:
    return {
        "order": phi.order,
        "spectra": [encode_spectrum(s) for s in phi.spectra],
        "values": _nested(phi.values),
    }


def decode_symbol(obj) -> SymbolTensor:
    try:
        spectra = tuple(decode_spectrum(s) for s in obj["spectra"])
        values = _from_nested(obj["values"])
        order = int(obj.get("order", len(spectra)))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad symbol object: {exc}") from exc
    if order != len(spectra):
        raise ParseError(f"order {order} != number of spectra {len(spectra)}")
    return SymbolTensor(spectra, values)


def encode_operator(op: NormalOperator) -> dict:
    return {
        "matrix": encode_matrix(op.matrix),
        "spectrum": encode_spectrum(op.spectrum),
        "projections": [encode_matrix(p) for p in op.projections],
    }


def decode_operator(obj) -> NormalOperator:
    try:
        matrix = decode_matrix(obj["matrix"])
        spectrum = decode_spectrum(obj["spectrum"])
        projections = tuple(decode_matrix(p) for p in obj["projections"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad operator object: {exc}") from exc
    return NormalOperator(matrix, spectrum, projections)


def encode_factorization(f: FactorizationData) -> dict:
    return {
        "order": f.order,
        "hilbert_dims": [int(r) for r in f.hilbert_dims],
        "a_first": _nested(f.a_first),
        "a_mid": [_nested(m) for m in f.a_mid],
        "a_last": _nested(f.a_last),
    }


def decode_factorization(obj) -> FactorizationData:
    try:
        first = _from_nested(obj["a_first"])
        mids = tuple(_from_nested(m) for m in obj["a_mid"])
        last = _from_nested(obj["a_last"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad factorization object: {exc}") from exc
    return FactorizationData(first, mids, last)


def encode_estimate(e: NormEstimate) -> dict:
    if e.certificate is None:
        cert = None
    elif isinstance(e.certificate, FactorizationData):
        cert = encode_factorization(e.certificate)
    else:
        cert = {"witness": [encode_matrix(x) for x in e.certificate]}
    return {
        "kind": e.kind,
        "value": float(e.value),
        "certificate": cert,
        "diagnostics": dict(e.diagnostics),
    }


def encode_report(r: TheoremReport) -> dict:
    return {
        "order": r.order,
        "shape": [int(s) for s in r.shape],
        "sup_norm": float(r.sup_norm),
        "lower": encode_estimate(r.lower),
        "upper": None if r.upper is None else encode_estimate(r.upper),
        "oracle": None if r.oracle is None else encode_estimate(r.oracle),
        "checks": [dict(c) for c in r.checks],
        "gaps": {k: float(v) for k, v in r.gaps.items()},
        "sound": bool(r.sound),
        "failure": r.failure,
    }
