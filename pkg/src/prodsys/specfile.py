"""JSON system descriptions for the command line.

A spec file looks like::

    {"monoid": {"type": "free_abelian", "rank": 2},
     "dims": [2, 3],
     "multiplier": {"type": "bicharacter", "phases": [[0, 0], [0.5, 0]]},
     "L": 2, "tol": 1e-9, "seed": 0}

Only ``monoid`` and ``dims`` are required.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import jsonschema

from .monoid import FreeAbelian, FreeProduct
from .product_system import DEFAULT_CAP, DEFAULT_TOL, Bicharacter, ProductSystem

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["monoid", "dims"],
    "properties": {
        "monoid": {
            "oneOf": [
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["type", "rank"],
                    "properties": {
                        "type": {"const": "free_abelian"},
                        "rank": {"type": "integer", "minimum": 1},
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["type", "components"],
                    "properties": {
                        "type": {"const": "free_product"},
                        "components": {"type": "integer", "minimum": 1},
                    },
                },
            ]
        },
        "dims": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "multiplier": {
            "oneOf": [
                {"const": "trivial"},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["type", "phases"],
                    "properties": {
                        "type": {"const": "bicharacter"},
                        "phases": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
                    },
                },
            ]
        },
        "L": {"type": "integer", "minimum": 0},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "seed": {"type": "integer", "minimum": 0},
        "cap": {"type": "integer", "minimum": 1},
    },
}


class SpecError(ValueError):
    """The spec file is not valid JSON or does not match the schema."""


@dataclass
class SystemSpec:
    system: ProductSystem
    L: int = 2
    tol: float = DEFAULT_TOL
    seed: int = 0
    raw: dict = None

    @property
    def monoid(self):
        return self.system.monoid


def parse_spec(obj: dict) -> SystemSpec:
    try:
        jsonschema.validate(obj, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SpecError(f"invalid spec at {where}: {exc.message}") from None
    m = obj["monoid"]
    monoid = FreeAbelian(m["rank"]) if m["type"] == "free_abelian" else FreeProduct(m["components"])
    tol = float(obj.get("tol", DEFAULT_TOL))
    mult = obj.get("multiplier", "trivial")
    twist = None
    if mult != "trivial":
        try:
            twist = Bicharacter(mult["phases"]).bind(monoid)
        except ValueError as exc:
            raise SpecError(f"invalid multiplier: {exc}") from None
    if len(obj["dims"]) != monoid.ngens:
        raise SpecError(f"dims has {len(obj['dims'])} entries, monoid has {monoid.ngens} generators")
    system = ProductSystem(monoid, obj["dims"], twist=twist, cap=obj.get("cap", DEFAULT_CAP), tol=tol)
    return SystemSpec(system, L=obj.get("L", 2), tol=tol, seed=obj.get("seed", 0), raw=obj)


def load_spec(path: Union[str, Path]) -> SystemSpec:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: not valid JSON ({exc})") from None
    return parse_spec(obj)
