"""JSON documents for polytopes, Zome models and certificates.

Exact coordinates are written as strings (``"1/2+3*phi"``), floats as JSON
numbers (Python's repr round-trips them).  Every document carries a
``schema`` field; :func:`load` dispatches on it.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .golden import GoldenScalar, golden
from .wythoff import Polytope
from .zome.check import Certificate, Offense
from .zome.model import Cell, Strut, ZomeModel

__all__ = [
    "POLYTOPE_SCHEMA",
    "MODEL_SCHEMA",
    "CERTIFICATE_SCHEMA",
    "SchemaError",
    "polytope_to_dict",
    "polytope_from_dict",
    "model_to_dict",
    "model_from_dict",
    "certificate_to_dict",
    "certificate_from_dict",
    "dumps",
    "load",
    "save",
]

POLYTOPE_SCHEMA = "zomekit.polytope/1"
MODEL_SCHEMA = "zomekit.zome-model/1"
CERTIFICATE_SCHEMA = "zomekit.certificate/1"


class SchemaError(ValueError):
    pass


def _vec_out(v):
    return [str(x) for x in v]


def _vec_in(v):
    return tuple(golden(x) for x in v)


def _plain(obj):
    """Provenance values made JSON-safe (tuples, numpy scalars, GoldenScalars)."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, GoldenScalar):
        return str(obj)
    return obj


# -- polytopes ---------------------------------------------------------------


def polytope_to_dict(poly: Polytope) -> dict:
    if poly.mode == "exact":
        verts = [_vec_out(v) for v in poly.vertices]
    else:
        verts = np.asarray(poly.vertices, dtype=float).tolist()
    doc = {
        "schema": POLYTOPE_SCHEMA,
        "dim": poly.dim,
        "rank": poly.rank,
        "mode": poly.mode,
        "f_vector": list(poly.f_vector),
        "vertices": verts,
        "faces": {str(k): [list(f) for f in poly.faces[k]] for k in sorted(poly.faces)},
        "provenance": _plain(poly.provenance),
    }
    if poly.edge_paths is not None:
        doc["edge_paths"] = [np.asarray(p, dtype=float).tolist() for p in poly.edge_paths]
    return doc


def polytope_from_dict(doc: dict) -> Polytope:
    _expect(doc, POLYTOPE_SCHEMA)
    mode = doc["mode"]
    if mode == "exact":
        verts = [_vec_in(v) for v in doc["vertices"]]
    else:
        verts = np.array(doc["vertices"], dtype=float).reshape(-1, doc["dim"])
    faces = {int(k): [tuple(f) for f in v] for k, v in doc["faces"].items()}
    paths = doc.get("edge_paths")
    if paths is not None:
        paths = [np.array(p, dtype=float) for p in paths]
    return Polytope(doc["dim"], doc["rank"], mode, verts, faces, dict(doc.get("provenance", {})), paths)


# -- models ------------------------------------------------------------------


def model_to_dict(model: ZomeModel) -> dict:
    cells = None
    if model.cells is not None:
        cells = [
            {
                "balls": list(c.balls),
                "struts": list(c.struts),
                "centroid": _vec_out(c.centroid),
                "source": c.source,
                "layer": c.layer,
            }
            for c in model.cells
        ]
    return {
        "schema": MODEL_SCHEMA,
        "balls": [_vec_out(b) for b in model.balls],
        "struts": [
            {"a": s.a, "b": s.b, "color": s.color, "line": s.line, "size": s.size, "tag": s.tag} for s in model.struts
        ],
        "cells": cells,
        "adjacency": model.adjacency,
        "provenance": _plain(model.provenance),
        "ball_origin": list(model.ball_origin),
        "strut_origin": list(model.strut_origin),
        "cell_origin": None if model.cell_origin is None else list(model.cell_origin),
    }


def model_from_dict(doc: dict) -> ZomeModel:
    _expect(doc, MODEL_SCHEMA)
    cells = None
    if doc.get("cells") is not None:
        cells = [
            Cell(tuple(c["balls"]), tuple(c["struts"]), _vec_in(c["centroid"]), c["source"], c["layer"])
            for c in doc["cells"]
        ]
    return ZomeModel(
        [_vec_in(b) for b in doc["balls"]],
        [Strut(s["a"], s["b"], s["color"], s["line"], s["size"], s.get("tag")) for s in doc["struts"]],
        cells,
        doc.get("adjacency"),
        dict(doc.get("provenance", {})),
        doc.get("ball_origin"),
        doc.get("strut_origin"),
        doc.get("cell_origin"),
    )


# -- certificates ------------------------------------------------------------


def certificate_to_dict(cert: Certificate) -> dict:
    return {
        "schema": CERTIFICATE_SCHEMA,
        "verdict": cert.verdict,
        "reference": None if cert.reference is None else str(cert.reference),
        "edges_checked": cert.edges_checked,
        "offending": [
            {"edge": o.edge, "vector": _vec_out(o.vector), "reason": o.reason, "line": o.line, "detail": o.detail}
            for o in cert.offending
        ],
        "spans": dict(cert.spans),
        "warnings": list(cert.warnings),
        "transform": None if cert.transform is None else [_vec_out(r) for r in cert.transform],
        "model": None if cert.model is None else model_to_dict(cert.model),
    }


def certificate_from_dict(doc: dict) -> Certificate:
    _expect(doc, CERTIFICATE_SCHEMA)
    return Certificate(
        doc["verdict"],
        None if doc.get("model") is None else model_from_dict(doc["model"]),
        [Offense(o["edge"], _vec_in(o["vector"]), o["reason"], o.get("line"), o.get("detail", "")) for o in doc["offending"]],
        None if doc.get("reference") is None else golden(doc["reference"]),
        dict(doc.get("spans", {})),
        list(doc.get("warnings", [])),
        None if doc.get("transform") is None else tuple(_vec_in(r) for r in doc["transform"]),
        doc.get("edges_checked", 0),
    )


# -- files -------------------------------------------------------------------

_WRITERS = {Polytope: polytope_to_dict, ZomeModel: model_to_dict, Certificate: certificate_to_dict}
_READERS = {POLYTOPE_SCHEMA: polytope_from_dict, MODEL_SCHEMA: model_from_dict, CERTIFICATE_SCHEMA: certificate_from_dict}


def _expect(doc: dict, schema: str):
    if not isinstance(doc, dict) or doc.get("schema") != schema:
        got = doc.get("schema") if isinstance(doc, dict) else type(doc).__name__
        raise SchemaError(f"expected schema {schema}, got {got}")


def to_dict(obj) -> dict:
    for cls, fn in _WRITERS.items():
        if isinstance(obj, cls):
            return fn(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_dict(doc: dict):
    reader = _READERS.get(doc.get("schema")) if isinstance(doc, dict) else None
    if reader is None:
        raise SchemaError(f"unknown schema {doc.get('schema') if isinstance(doc, dict) else None!r}")
    return reader(doc)


def dumps(obj) -> str:
    """Deterministic JSON text (compact rows, newline-terminated)."""
    return json.dumps(to_dict(obj), separators=(",", ":")) + "\n"


def save(obj, path) -> None:
    Path(path).write_text(dumps(obj))


def load(path):
    with open(path) as fh:
        return from_dict(json.load(fh))
