"""JSON documents shared by every command.

Integers are written as bare JSON integers and every other rational as a
``"p/q"`` string, so no value ever passes through a float. Output is
canonical: sorted keys, no insignificant whitespace.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import jsonschema

from .exact import Matrix
from .measurement import ClassicalDevice, MpsFamily
from .mortality import MmpInstance
from .pcp import PcpInstance
from .reduction import QuantumDevice, ReductionCertificate

_ENTRY = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$"},
    ]
}

MATRIX_SCHEMA = {
    "type": "object",
    "required": ["rows", "cols", "data"],
    "properties": {
        "rows": {"type": "integer", "minimum": 1},
        "cols": {"type": "integer", "minimum": 1},
        "data": {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _ENTRY}},
    },
}

SCHEMAS: dict[str, dict] = {
    "matrix": MATRIX_SCHEMA,
    "mmp": {
        "type": "object",
        "required": ["dim", "matrices"],
        "properties": {
            "dim": {"type": "integer", "minimum": 1},
            "matrices": {"type": "array", "minItems": 1, "items": MATRIX_SCHEMA},
        },
    },
    "device": {
        "type": "object",
        "required": ["dim", "kraus"],
        "properties": {
            "dim": {"type": "integer", "minimum": 1},
            "kraus": {"type": "array", "minItems": 1, "items": MATRIX_SCHEMA},
        },
    },
    "cdev": {
        "type": "object",
        "required": ["dim", "parts"],
        "properties": {
            "dim": {"type": "integer", "minimum": 1},
            "parts": {"type": "array", "minItems": 1, "items": MATRIX_SCHEMA},
        },
    },
    "mps": {
        "type": "object",
        "required": ["dim", "matrices"],
        "properties": {
            "dim": {"type": "integer", "minimum": 1},
            "matrices": {"type": "array", "minItems": 1, "items": MATRIX_SCHEMA},
        },
    },
    "pcp": {
        "type": "object",
        "required": ["alphabet", "h", "g"],
        "properties": {
            "alphabet": {"type": "array", "minItems": 1, "items": {"type": "string", "minLength": 1}},
            "h": {"type": "object", "additionalProperties": {"type": "string", "pattern": "^[23]+$"}},
            "g": {"type": "object", "additionalProperties": {"type": "string", "pattern": "^[23]+$"}},
        },
    },
    "certificate": {
        "type": "object",
        "required": ["T", "c", "extended", "device"],
        "properties": {
            "T": MATRIX_SCHEMA,
            "c": {"type": "integer", "minimum": 1},
            "extended": {"type": "array", "minItems": 40, "maxItems": 40, "items": MATRIX_SCHEMA},
        },
    },
}


class SchemaError(ValueError):
    """A document does not match its schema or its declared sizes."""


def validate(doc: Any, kind: str) -> None:
    try:
        jsonschema.validate(doc, SCHEMAS[kind])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{kind} document invalid at {where}: {exc.message}") from None


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def scalar_to_json(x: Fraction | int) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def matrix_to_json(m: Matrix) -> dict:
    return {"rows": m.rows, "cols": m.cols, "data": [[scalar_to_json(x) for x in row] for row in m.to_rows()]}


def matrix_from_json(doc: Any) -> Matrix:
    validate(doc, "matrix")
    data = doc["data"]
    if len(data) != doc["rows"] or any(len(r) != doc["cols"] for r in data):
        raise SchemaError(f"matrix data does not match declared shape {doc['rows']}x{doc['cols']}")
    return Matrix.from_rows(data)


def _square_list(docs: list, dim: int, what: str) -> tuple[Matrix, ...]:
    mats = tuple(matrix_from_json(d) for d in docs)
    for i, m in enumerate(mats, 1):
        if m.shape != (dim, dim):
            raise SchemaError(f"{what} {i} is {m.rows}x{m.cols}, expected {dim}x{dim}")
    return mats


def mmp_to_json(inst: MmpInstance) -> dict:
    return {"dim": inst.dim, "matrices": [matrix_to_json(m) for m in inst.generators]}


def mmp_from_json(doc: Any) -> MmpInstance:
    validate(doc, "mmp")
    return MmpInstance(_square_list(doc["matrices"], doc["dim"], "matrix"))


def device_to_json(dev: QuantumDevice) -> dict:
    return {"dim": dev.dim, "kraus": [matrix_to_json(a) for a in dev.kraus]}


def device_from_json(doc: Any) -> QuantumDevice:
    validate(doc, "device")
    return QuantumDevice(_square_list(doc["kraus"], doc["dim"], "Kraus operator"))


def cdev_to_json(cdev: ClassicalDevice) -> dict:
    return {"dim": cdev.dim, "parts": [matrix_to_json(q) for q in cdev.parts]}


def cdev_from_json(doc: Any) -> ClassicalDevice:
    validate(doc, "cdev")
    return ClassicalDevice(_square_list(doc["parts"], doc["dim"], "part"))


def mps_to_json(fam: MpsFamily) -> dict:
    return {"dim": fam.dim, "matrices": [matrix_to_json(a) for a in fam.matrices]}


def mps_from_json(doc: Any) -> MpsFamily:
    validate(doc, "mps")
    return MpsFamily(_square_list(doc["matrices"], doc["dim"], "matrix"))


def pcp_to_json(inst: PcpInstance) -> dict:
    return {"alphabet": list(inst.alphabet), "h": dict(inst.h), "g": dict(inst.g)}


def pcp_from_json(doc: Any) -> PcpInstance:
    validate(doc, "pcp")
    return PcpInstance(tuple(doc["alphabet"]), dict(doc["h"]), dict(doc["g"]))


def certificate_to_json(cert: ReductionCertificate) -> dict:
    return {
        "T": matrix_to_json(cert.T),
        "c": cert.c,
        "extended": [matrix_to_json(m) for m in cert.extended],
        "device": device_to_json(cert.device),
    }


def certificate_from_json(doc: Any) -> ReductionCertificate:
    validate(doc, "certificate")
    return ReductionCertificate(
        T=matrix_from_json(doc["T"]),
        c=doc["c"],
        extended=tuple(matrix_from_json(m) for m in doc["extended"]),
        device=device_from_json(doc["device"]),
    )
