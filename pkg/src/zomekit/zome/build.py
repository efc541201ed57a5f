"""Assemble a projected polytope into a Zome model."""

from __future__ import annotations

from dataclasses import dataclass

from .. import lattice
from ..golden import ZERO
from ..wythoff import Polytope, RankError, cell_adjacency
from .catalog import StrutCatalog, default_catalog
from .check import Certificate, SkeletonError, align_to_catalog, apply_transform, check_constructible
from .model import Cell, ZomeModel

__all__ = ["CollapseReport", "NotConstructibleError", "merge_skeleton", "build_model"]


class NotConstructibleError(ValueError):
    """Carries the refuting certificate."""

    def __init__(self, certificate: Certificate):
        n = len(certificate.offending)
        super().__init__(f"not Zome constructible: {n} offending edge(s)")
        self.certificate = certificate


@dataclass
class CollapseReport:
    vertices: int
    balls: int
    edges: int
    dropped_edges: int  # edges whose ends project to one ball
    merged_struts: int  # edges absorbed into an already present strut
    struts: int

    @property
    def merged_balls(self) -> int:
        return self.vertices - self.balls

    def accounts(self) -> bool:
        return self.dropped_edges + self.merged_struts + self.struts == self.edges


@dataclass
class _Merged:
    balls: list
    ball_of: list[int]  # vertex id -> ball id
    edges: list[tuple[int, int]]  # distinct ball pairs
    strut_of: dict[tuple[int, int], int]
    report: CollapseReport


def merge_skeleton(poly: Polytope) -> _Merged:
    """Identify coincident vertices, drop null edges, merge repeated struts."""
    if poly.mode != "exact":
        raise SkeletonError("build_model needs an exact projection")
    if poly.dim != 3:
        raise SkeletonError(f"build_model needs 3D coordinates, got {poly.dim}D")
    num, _den = poly.lattice
    index: dict = {}
    ball_of = []
    balls = []
    for i in range(len(poly.vertices)):
        key = lattice.row_key(num[i])
        b = index.get(key)
        if b is None:
            b = index[key] = len(balls)
            balls.append(poly.vertices[i])
        ball_of.append(b)
    strut_of: dict[tuple[int, int], int] = {}
    edges = []
    dropped = merged = 0
    for a, b in poly.edges:
        ba, bb = ball_of[a], ball_of[b]
        if ba == bb:
            dropped += 1
            continue
        key = (min(ba, bb), max(ba, bb))
        if key in strut_of:
            merged += 1
            continue
        strut_of[key] = len(edges)
        edges.append(key)
    report = CollapseReport(len(poly.vertices), len(balls), len(poly.edges), dropped, merged, len(edges))
    return _Merged(balls, ball_of, edges, strut_of, report)


def _edges_by_low_vertex(poly: Polytope):
    """Edge ids keyed by their smaller endpoint (edge tuples are sorted)."""
    by_vertex: dict[int, list[int]] = {}
    for i, (a, b) in enumerate(poly.edges):
        by_vertex.setdefault(a, []).append(i)
    return by_vertex


def build_model(
    poly: Polytope,
    catalog: StrutCatalog | None = None,
    align: bool = True,
    size_offset: int = 0,
) -> tuple[ZomeModel, CollapseReport]:
    """Merge, check and package a 3D exact projection as a :class:`ZomeModel`.

    With ``align`` the balls are first moved by an exact similarity onto the
    catalog frame when the given coordinates do not already fit.  Raises
    :class:`NotConstructibleError` (holding the certificate) on failure.
    """
    cat = catalog or default_catalog()
    merged = merge_skeleton(poly)
    balls = merged.balls
    transform = None
    if align:
        M = align_to_catalog(balls, merged.edges, cat)
        if M is not None and any(M[i][j] != (1 if i == j else 0) for i in range(3) for j in range(3)):
            transform = M
            balls = apply_transform(M, balls)
    cert = check_constructible(balls, merged.edges, cat, size_offset=size_offset)
    cert.transform = transform
    if not cert.constructible:
        raise NotConstructibleError(cert)
    model = cert.model
    cells, adjacency = _cells(poly, merged)
    if cells is not None and transform is not None:
        for c in cells:
            c.centroid = tuple(sum((r * x for r, x in zip(row, c.centroid)), ZERO) for row in transform)
    model.cells = cells
    model.adjacency = adjacency
    model.cell_origin = list(range(len(cells))) if cells is not None else None
    model.provenance.update(dict(poly.provenance))
    model.provenance["collapse"] = merged.report.__dict__.copy()
    if transform is not None:
        model.provenance["transform"] = [[str(x) for x in row] for row in transform]
    model.provenance["warnings"] = list(cert.warnings)
    return model, merged.report


def _cells(poly: Polytope, merged: _Merged):
    if poly.rank < 4 or 3 not in poly.faces:
        return None, None
    by_vertex = _edges_by_low_vertex(poly)
    cells = []
    for cid, vids in enumerate(poly.faces[3]):
        vset = set(vids)
        struts = set()
        for a in vids:
            for ei in by_vertex.get(a, ()):
                b = poly.edges[ei][1]
                if b in vset:
                    ba, bb = merged.ball_of[a], merged.ball_of[b]
                    if ba != bb:
                        struts.add(merged.strut_of[(min(ba, bb), max(ba, bb))])
        c = [ZERO, ZERO, ZERO]
        for v in vids:
            c = [x + y for x, y in zip(c, poly.vertices[v])]
        centroid = tuple(x / len(vids) for x in c)
        balls = sorted({merged.ball_of[v] for v in vids})
        cells.append(Cell(tuple(balls), tuple(sorted(struts)), centroid, cid))
    try:
        adjacency = cell_adjacency(poly)
    except RankError:
        adjacency = None
    return cells, adjacency
