"""JSON ingestion and emission for simplicial sets and modules.

Emission is canonical: keys sorted, generators ordered by (dimension or
degree, id), matrix entries ordered by (source, target), two-space indent and
a trailing newline.  Every error carries a JSON-pointer path.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

import jsonschema

from .dgmod import DgModule
from .simplicial import SimplexRef, SimplicialError, SimplicialSet

__all__ = [
    "SchemaViolation",
    "SIMPLICIAL_SCHEMA",
    "MODULE_SCHEMA",
    "canonical_dumps",
    "simplicial_to_json",
    "simplicial_from_json",
    "module_to_json",
    "module_from_json",
    "emit_simplicial",
    "parse_simplicial",
    "emit_module",
    "parse_module",
    "load",
]


class SchemaViolation(ValueError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"
        self.message = message


_NUM = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]*[1-9][0-9]*)?$"},
    ]
}
_ENTRY = {"type": "array", "prefixItems": [{"type": "string"}, {"type": "string"}, _NUM], "minItems": 3, "maxItems": 3}

SIMPLICIAL_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["generators", "faces"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "generators": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "dim"],
                "additionalProperties": False,
                "properties": {"id": {"type": "string", "minLength": 1}, "dim": {"type": "integer", "minimum": 0}},
            },
        },
        "faces": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["base", "degen"],
                    "additionalProperties": False,
                    "properties": {
                        "base": {"type": "string"},
                        "degen": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    },
                },
            },
        },
    },
}

MODULE_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["generators"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "over": {"type": ["string", "null"]},
        "generators": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "degree"],
                "additionalProperties": False,
                "properties": {"id": {"type": "string", "minLength": 1}, "degree": {"type": "integer"}},
            },
        },
        "differential": {"type": "array", "items": _ENTRY},
        "action": {"type": "object", "additionalProperties": {"type": "array", "items": _ENTRY}},
    },
}


def _pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def _validate(doc: Any, schema: dict) -> None:
    v = jsonschema.Draft202012Validator(schema)
    errors = sorted(v.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        e = errors[0]
        raise SchemaViolation(_pointer(e.absolute_path), e.message)


def canonical_dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _num_out(v) -> int | str:
    q = Fraction(int(v)) if not isinstance(v, (int, Fraction)) else Fraction(v)
    return int(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _num_in(v) -> int | Fraction:
    q = Fraction(v) if isinstance(v, str) else Fraction(int(v))
    return int(q) if q.denominator == 1 else q


# ---------------------------------------------------------------------------
# simplicial sets


def simplicial_to_json(k: SimplicialSet) -> dict:
    gens = k.generators()
    return {
        "name": k.name,
        "generators": [{"id": g, "dim": k.dims[g]} for g in gens],
        "faces": {
            g: [{"base": f.base, "degen": list(f.degeneracy_word)} for f in k.faces[g]]
            for g in gens
            if k.dims[g] > 0
        },
    }


def simplicial_from_json(doc: Any) -> SimplicialSet:
    _validate(doc, SIMPLICIAL_SCHEMA)
    dims: dict[str, int] = {}
    for i, g in enumerate(doc["generators"]):
        if g["id"] in dims:
            raise SchemaViolation(f"/generators/{i}/id", f"duplicate generator {g['id']!r}")
        dims[g["id"]] = g["dim"]
    faces: dict[str, list[SimplexRef]] = {}
    for g, fs in doc["faces"].items():
        here = _pointer(["faces", g])
        if g not in dims:
            raise SchemaViolation(here, f"faces given for unknown generator {g!r}")
        if dims[g] == 0:
            raise SchemaViolation(here, f"vertex {g!r} cannot have faces")
        if len(fs) != dims[g] + 1:
            raise SchemaViolation(here, f"{g!r} of dimension {dims[g]} needs {dims[g] + 1} faces")
        refs = []
        for i, f in enumerate(fs):
            at = f"{here}/{i}"
            if f["base"] not in dims:
                raise SchemaViolation(f"{at}/base", f"unknown generator {f['base']!r}")
            try:
                r = SimplexRef.from_word(f["base"], dims[f["base"]], f["degen"])
            except SimplicialError as e:
                raise SchemaViolation(f"{at}/degen", str(e)) from None
            if r.dim != dims[g] - 1:
                raise SchemaViolation(at, f"face has dimension {r.dim}, expected {dims[g] - 1}")
            refs.append(r)
        faces[g] = refs
    for g, n in dims.items():
        if n > 0 and g not in faces:
            raise SchemaViolation("/faces", f"missing faces for {g!r}")
    k = SimplicialSet(doc.get("name", "unnamed"), dims, faces)
    try:
        k.validate()
    except SimplicialError as e:
        raise SchemaViolation("/faces", str(e)) from None
    return k


def emit_simplicial(k: SimplicialSet) -> str:
    return canonical_dumps(simplicial_to_json(k))


def parse_simplicial(text: str) -> SimplicialSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaViolation("/", f"invalid JSON: {e}") from None
    return simplicial_from_json(doc)


# ---------------------------------------------------------------------------
# modules


def _entries(table: dict) -> list:
    out = []
    for src in sorted(table):
        for tgt in sorted(table[src]):
            v = table[src][tgt]
            if v:
                out.append([src, tgt, _num_out(v)])
    return out


def module_to_json(m: DgModule) -> dict:
    return {
        "name": m.name,
        "over": m.over,
        "generators": [{"id": g, "degree": m.degrees[g]} for g in m.generators],
        "differential": _entries(m.differential),
        "action": {c: _entries(t) for c, t in sorted(m.action.items()) if _entries(t)},
    }


def _read_entries(rows: list, gens: dict, at: str) -> dict:
    table: dict[str, dict] = {}
    for i, (src, tgt, v) in enumerate(rows):
        for j, g in ((0, src), (1, tgt)):
            if g not in gens:
                raise SchemaViolation(f"{at}/{i}/{j}", f"unknown generator {g!r}")
        row = table.setdefault(src, {})
        if tgt in row:
            raise SchemaViolation(f"{at}/{i}", f"duplicate entry ({src!r}, {tgt!r})")
        q = _num_in(v)
        if q:
            row[tgt] = q
    return {k: v for k, v in table.items() if v}


def module_from_json(doc: Any) -> DgModule:
    _validate(doc, MODULE_SCHEMA)
    gens: dict[str, int] = {}
    for i, g in enumerate(doc["generators"]):
        if g["id"] in gens:
            raise SchemaViolation(f"/generators/{i}/id", f"duplicate generator {g['id']!r}")
        gens[g["id"]] = g["degree"]
    diff = _read_entries(doc.get("differential", []), gens, "/differential")
    for src, row in diff.items():
        for tgt in row:
            if gens[tgt] != gens[src] - 1:
                i = doc["differential"].index(next(r for r in doc["differential"] if r[0] == src and r[1] == tgt))
                raise SchemaViolation(f"/differential/{i}", "differential must lower degree by one")
    action = {}
    for c, rows in doc.get("action", {}).items():
        t = _read_entries(rows, gens, _pointer(["action", c]))
        if t:
            action[c] = t
    return DgModule(doc.get("name", "module"), gens, diff, action, over=doc.get("over"))


def emit_module(m: DgModule) -> str:
    return canonical_dumps(module_to_json(m))


def parse_module(text: str) -> DgModule:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaViolation("/", f"invalid JSON: {e}") from None
    return module_from_json(doc)


def load(path: str | Path) -> SimplicialSet | DgModule:
    """Read a simplicial set or module file, dispatching on its keys."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaViolation("/", f"invalid JSON: {e}") from None
    if isinstance(doc, dict) and "faces" in doc:
        return simplicial_from_json(doc)
    return module_from_json(doc)
