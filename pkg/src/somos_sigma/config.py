"""Run configuration and input schemas for the command line.

A :class:`RunSpec` is the fully resolved description of one CLI run: the
command, the validated payload, working precision, output format and the
seed used by randomised checks.  Payload schemas are plain JSON Schema
dicts; ``scripts/export_schemas.py`` writes them to ``docs/schemas``.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field

import jsonschema

from .errors import ValidationError

ENV_DIGITS = "SOMOS_SIGMA_DIGITS"


def default_digits() -> int:
    return int(os.environ.get(ENV_DIGITS, "25"))


@dataclass(frozen=True)
class RunSpec:
    command: str
    payload: dict = field(default_factory=dict)
    digits: int = 25
    fmt: str = "json"
    seed: int = 0

    def to_json(self) -> dict:
        return asdict(self)


RATIONAL = {
    "description": "exact rational: an integer or a string 'p' or 'p/q'",
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*-?\d+\s*(/\s*-?\d+\s*)?$"},
    ],
}
REAL = {"description": "real number or exact rational string", "oneOf": [{"type": "number"}, RATIONAL["oneOf"][1]]}
POINT = {"type": "array", "items": RATIONAL, "minItems": 2, "maxItems": 2}
INDEX = {"type": "integer"}

SCHEMAS: dict[str, dict] = {
    "somos4": {
        "title": "Somos-4 problem",
        "type": "object",
        "properties": {
            "alpha": RATIONAL,
            "beta": RATIONAL,
            "seeds": {"type": "array", "items": RATIONAL, "minItems": 4, "maxItems": 4},
            "offset": INDEX,
            "start": INDEX,
            "stop": INDEX,
            "n": {"type": "integer", "minimum": 0},
            "cap": {"type": "integer", "minimum": 4},
            "n_max": {"type": "integer", "minimum": 4},
        },
        "additionalProperties": False,
    },
    "eds": {
        "title": "Elliptic divisibility sequence",
        "type": "object",
        "properties": {
            "seeds": {"type": "array", "items": RATIONAL, "minItems": 4, "maxItems": 4},
            "start": INDEX,
            "stop": INDEX,
            "through": {"type": "integer", "minimum": 1},
            "hankel_max": {"type": "integer", "minimum": 3},
        },
        "additionalProperties": False,
    },
    "g2": {
        "title": "Genus-2 curve, base divisor and step point",
        "type": "object",
        "properties": {
            "curve": {
                "description": "c0..c4 of y^2 = 4x^5 + c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0",
                "type": "array",
                "items": RATIONAL,
                "minItems": 5,
                "maxItems": 5,
            },
            "d0": {
                "description": "base divisor: two points [[x1,y1],[x2,y2]] or Mumford {U, V} (low degree first)",
                "oneOf": [
                    {"type": "array", "items": POINT, "minItems": 1, "maxItems": 2},
                    {
                        "type": "object",
                        "properties": {
                            "U": {"type": "array", "items": RATIONAL},
                            "V": {"type": "array", "items": RATIONAL},
                        },
                        "required": ["U", "V"],
                        "additionalProperties": False,
                    },
                ],
            },
            "point": POINT,
            "start": INDEX,
            "stop": INDEX,
            "rows": {"type": "array", "items": INDEX, "minItems": 4, "maxItems": 4},
            "alpha": {"type": "array", "items": RATIONAL, "minItems": 4, "maxItems": 4},
        },
        "additionalProperties": False,
    },
    "schur": {
        "title": "Cusp-limit symbolic checks",
        "type": "object",
        "properties": {"cap": {"type": "integer", "minimum": 2, "maximum": 12}, "all": {"type": "boolean"}},
        "additionalProperties": False,
    },
    "hh": {
        "title": "Henon-Heiles Backlund map",
        "type": "object",
        "properties": {
            "a": REAL,
            "c": REAL,
            "m": REAL,
            "state": {
                "description": "(q1, q2, p1, p2)",
                "type": "array",
                "items": REAL,
                "minItems": 4,
                "maxItems": 4,
            },
            "lambda": REAL,
            "lambda2": REAL,
            "steps": {"type": "integer", "minimum": 0, "maximum": 100000},
            "mu_sign": {"enum": [1, -1]},
            "q1_branch": {"enum": [1, -1]},
        },
        "additionalProperties": False,
    },
    "paper": {
        "title": "Reference reproduction",
        "type": "object",
        "properties": {
            "only": {"type": "array", "items": {"type": "integer", "minimum": 1, "maximum": 10}},
            "timings": {"type": "boolean"},
        },
        "additionalProperties": False,
    },
}


def validate_payload(group: str, payload: dict) -> dict:
    schema = SCHEMAS[group]
    try:
        jsonschema.validate(payload, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValidationError(f"invalid input at {where}: {exc.message}", path=where) from None
    return payload
