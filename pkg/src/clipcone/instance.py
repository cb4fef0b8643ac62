"""JSON instance files: schema, parsing and conversion to package objects."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from . import linalg as la
from .clipping import ClippedCone, canonicalize_roots
from .lattice import FiniteAction, QuadLattice, group_closure, trivial_action
from .symcone import Factor, SymCone

SCHEMA_VERSION = 1

_RATIONAL = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^-?\d+(/[1-9]\d*)?$"},
    ]
}
_VECTOR = {"type": "array", "items": _RATIONAL}
_INT_VECTOR = {"type": "array", "items": {"type": "integer"}}
_MATRIX = {"type": "array", "items": _VECTOR, "minItems": 1}

INSTANCE_SCHEMA = {
    "type": "object",
    "required": ["schema", "gram", "factors"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "gram": _MATRIX,
        "factors": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "coords"],
                "properties": {
                    "kind": {"enum": ["halfline", "lorentz", "psd"]},
                    "coords": _INT_VECTOR,
                    "h": _VECTOR,
                    "m": {"type": "integer", "minimum": 1},
                },
                "additionalProperties": False,
            },
        },
        "roots": {"type": "array", "items": _INT_VECTOR},
        "witness": _VECTOR,
        "group": {
            "type": "object",
            "required": ["generators"],
            "properties": {"generators": {"type": "array", "items": {"type": "array", "items": _INT_VECTOR}}},
            "additionalProperties": False,
        },
        "points": {"type": "array", "items": _VECTOR},
        "walls": {"type": "array", "items": _INT_VECTOR},
        "base": _VECTOR,
    },
    "additionalProperties": False,
}


class InstanceError(ValueError):
    """Malformed instance file."""


@dataclass
class InstanceFile:
    name: str
    sym: SymCone
    raw_roots: list
    witness: tuple | None
    generators: list
    points: list
    walls: list
    base: tuple | None

    def action(self, cap: int = 10_000) -> FiniteAction:
        if not self.generators:
            return trivial_action(self.sym.rank)
        return group_closure(self.generators, cap=cap)

    def clipped(self) -> tuple[ClippedCone, list]:
        if self.witness is None:
            raise InstanceError("instance has no witness point")
        roots, rejected = canonicalize_roots(self.raw_roots, self.sym, self.witness)
        return ClippedCone(self.sym, tuple(roots), self.witness), rejected


def parse(data: dict) -> InstanceFile:
    try:
        jsonschema.validate(data, INSTANCE_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise InstanceError(f"schema violation at '{path}': {exc.message}") from None
    try:
        gram = la.mat(data["gram"])
        lattice = QuadLattice(gram)
        factors = tuple(
            Factor(f["kind"], tuple(f["coords"]), f.get("h"), f.get("m")) for f in data["factors"]
        )
        n = lattice.rank

        def vec(v, what):
            v = la.vec(v)
            if len(v) != n:
                raise InstanceError(f"{what} has length {len(v)}, expected {n}")
            return v

        roots = [vec(r, "root") for r in data.get("roots", [])]
        witness = vec(data["witness"], "witness") if "witness" in data else None
        gens = data.get("group", {}).get("generators", [])
        for g in gens:
            if len(g) != n or any(len(r) != n for r in g):
                raise InstanceError(f"group generators must be {n}x{n}")
        return InstanceFile(
            data.get("name", "instance"),
            SymCone(lattice, factors),
            roots,
            witness,
            gens,
            [vec(p, "point") for p in data.get("points", [])],
            [vec(w, "wall") for w in data.get("walls", [])],
            vec(data["base"], "base") if "base" in data else None,
        )
    except InstanceError:
        raise
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InstanceError(str(exc)) from None


def load(path: str | Path) -> InstanceFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc}") from None
    return parse(data)


def to_dict(name: str, cone: ClippedCone, action: FiniteAction | None = None) -> dict:
    """Instance dictionary for an in-memory clipped cone."""
    sym = cone.ambient
    out = {
        "schema": SCHEMA_VERSION,
        "name": name,
        "gram": [[_num(x) for x in row] for row in sym.lattice.gram],
        "factors": [],
        "roots": [[int(x) for x in r.vector] for r in cone.roots],
        "witness": [_num(x) for x in cone.witness],
    }
    for f in sym.factors:
        d = {"kind": f.kind, "coords": list(f.coords)}
        if f.h is not None:
            d["h"] = [_num(x) for x in f.h]
        if f.m is not None:
            d["m"] = f.m
        out["factors"].append(d)
    if action is not None and action.order > 1:
        out["group"] = {"generators": [[list(r) for r in g] for g in action.generators]}
    return out


def _num(x):
    x = la.to_fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
