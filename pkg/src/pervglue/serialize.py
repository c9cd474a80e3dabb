"""JSON documents for every object kind, with exact rational entries.

Matrices are arrays of arrays of strings "p/q" (just "p" for integers);
dimension fields are explicit so that 0 x n and n x 0 maps round-trip.
Quadruple documents also carry a checksum of the canonical Fitting basis
their (u, v) coordinates refer to; the basis is recomputed on load and the
checksums compared, so a drift in the canonicalization convention cannot
silently reinterpret stored maps.
"""

from __future__ import annotations

import hashlib
import json
from typing import Tuple

from .categories import VS, LS, GS, CatMorphism, CatObject
from .errors import ParseError, PervglueError
from .linalg import LinearMap, rat
from .localsystems import LocalSystem
from .quadruples import GluedSheaf


def matrix_to_json(m: LinearMap) -> dict:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[str(x) for x in row] for row in m.entries],
    }


def matrix_from_json(doc, what: str = "matrix") -> LinearMap:
    try:
        rows, cols = int(doc["rows"]), int(doc["cols"])
        entries = [[rat(x) for x in row] for row in doc["entries"]]
        return LinearMap(rows, cols, entries)
    except ParseError:
        raise
    except Exception as exc:
        raise ParseError("bad %s: %s" % (what, exc)) from exc


def fitting_checksum(m: LocalSystem) -> str:
    basis = m.unipotent_space.basis
    blob = "%d:%d:%s" % (
        basis.rows,
        basis.cols,
        ";".join(",".join(str(x) for x in row) for row in basis.entries),
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def local_system_to_json(m: LocalSystem) -> dict:
    return {"type": "local_system", "dim": m.dim, "T": matrix_to_json(m.T)}


def local_system_from_json(doc) -> LocalSystem:
    if doc.get("type") != "local_system":
        raise ParseError("expected a local_system document")
    t = matrix_from_json(doc.get("T"), "monodromy")
    if t.rows != doc.get("dim"):
        raise ParseError("declared dimension disagrees with the monodromy")
    try:
        return LocalSystem(t)
    except PervglueError as exc:
        raise ParseError(str(exc)) from exc


def glued_sheaf_to_json(f: GluedSheaf, kind: str = "glued_sheaf") -> dict:
    return {
        "type": kind,
        "V": local_system_to_json(f.m_u),
        "W_dim": f.w_dim,
        "u": matrix_to_json(f.u),
        "v": matrix_to_json(f.v),
        "fitting_checksum": fitting_checksum(f.m_u),
    }


def glued_sheaf_from_json(doc) -> GluedSheaf:
    if doc.get("type") not in ("glued_sheaf", "gluing_data"):
        raise ParseError("expected a glued_sheaf or gluing_data document")
    m = local_system_from_json(doc.get("V", {}))
    stored = doc.get("fitting_checksum")
    if stored is not None and stored != fitting_checksum(m):
        raise ParseError("Fitting basis checksum mismatch: convention drift")
    u = matrix_from_json(doc.get("u"), "u")
    v = matrix_from_json(doc.get("v"), "v")
    try:
        return GluedSheaf(m, int(doc.get("W_dim")), u, v)
    except PervglueError as exc:
        raise ParseError(str(exc)) from exc


def object_to_json(x: CatObject) -> dict:
    if x.realization == VS:
        return {"type": "vector_space", "dim": x.payload}
    if x.realization == LS:
        return local_system_to_json(x.payload)
    return glued_sheaf_to_json(x.payload)


def object_from_json(doc) -> CatObject:
    kind = doc.get("type")
    if kind == "vector_space":
        return CatObject.vector_space(int(doc["dim"]))
    if kind == "local_system":
        return CatObject.local_system(local_system_from_json(doc))
    if kind in ("glued_sheaf", "gluing_data"):
        return CatObject.glued(glued_sheaf_from_json(doc))
    raise ParseError("unknown object type %r" % kind)


def morphism_to_json(phi: CatMorphism) -> dict:
    return {
        "type": "morphism",
        "source": object_to_json(phi.source),
        "target": object_to_json(phi.target),
        "components": [matrix_to_json(c) for c in phi.components],
    }


def morphism_from_json(doc) -> CatMorphism:
    if doc.get("type") != "morphism":
        raise ParseError("expected a morphism document")
    src = object_from_json(doc.get("source", {}))
    dst = object_from_json(doc.get("target", {}))
    comps = [matrix_from_json(c, "component") for c in doc.get("components", [])]
    try:
        return CatMorphism(src, dst, comps)
    except PervglueError as exc:
        raise ParseError(str(exc)) from exc


def document_from_json(doc):
    """Dispatch on the type tag; returns the decoded value."""
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    kind = doc.get("type")
    if kind == "local_system":
        return local_system_from_json(doc)
    if kind in ("glued_sheaf", "gluing_data"):
        return glued_sheaf_from_json(doc)
    if kind == "morphism":
        return morphism_from_json(doc)
    if kind == "vector_space":
        return object_from_json(doc)
    raise ParseError("unknown document type %r" % kind)


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("invalid JSON: %s" % exc) from exc
    return document_from_json(doc)


def dumps(value, indent=None) -> str:
    if isinstance(value, LocalSystem):
        doc = local_system_to_json(value)
    elif isinstance(value, GluedSheaf):
        doc = glued_sheaf_to_json(value)
    elif isinstance(value, CatMorphism):
        doc = morphism_to_json(value)
    elif isinstance(value, CatObject):
        doc = object_to_json(value)
    else:
        raise ParseError("cannot serialize %r" % type(value).__name__)
    return json.dumps(doc, indent=indent, sort_keys=True)
