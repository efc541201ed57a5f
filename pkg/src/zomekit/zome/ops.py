"""Working with built models: layers, filters, diffs and single-color paths."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from ..golden import ZERO, GoldenScalar, cross, dot, golden, norm2
from .model import Cell, ZomeModel

__all__ = [
    "NoCellDataError",
    "DiffError",
    "layer_decomposition",
    "Predicate",
    "HalfSpace",
    "Orthant",
    "LayerRange",
    "ColorSet",
    "Meridian",
    "Ring",
    "And",
    "Not",
    "Custom",
    "TRUE",
    "filter_model",
    "model_diff",
    "Path",
    "monochrome_paths",
]


class NoCellDataError(ValueError):
    pass


class DiffError(ValueError):
    pass


# -- layers ------------------------------------------------------------------


def _centroid(points):
    n = len(points)
    c = [ZERO, ZERO, ZERO]
    for p in points:
        c = [x + y for x, y in zip(c, p)]
    return tuple(x / n for x in c)


def layer_decomposition(model: ZomeModel) -> list[int | None]:
    """BFS layer of every cell, starting from the cells nearest the model centroid.

    Distances are compared exactly.  Cells the adjacency never reaches get
    ``None``.  The result is also written to ``cell.layer``.
    """
    if not model.cells:
        raise NoCellDataError("model has no cell data")
    center = _centroid(model.balls) if model.balls else (ZERO, ZERO, ZERO)
    d2 = [norm2(tuple(x - y for x, y in zip(c.centroid, center))) for c in model.cells]
    best = min(d2)
    core = [i for i, d in enumerate(d2) if d == best]
    layers: list[int | None] = [None] * len(model.cells)
    adj = model.adjacency or [[] for _ in model.cells]
    queue = deque(core)
    for i in core:
        layers[i] = 0
    while queue:
        i = queue.popleft()
        for j in adj[i]:
            if layers[j] is None:
                layers[j] = layers[i] + 1
                queue.append(j)
    for c, lay in zip(model.cells, layers):
        c.layer = lay
    return layers


# -- predicates --------------------------------------------------------------


def _coords(p):
    if any(isinstance(x, float) for x in p):
        return p
    return tuple(golden(x) for x in p)


class Predicate:
    """Tests for ball coordinates, cells and struts; each defaults to true.

    A cell test defaults to the point test on the cell's centroid.
    ``levels`` names the tests a predicate actually constrains, so that
    :class:`Not` leaves the others alone.
    """

    levels = frozenset({"point", "cell"})

    def point(self, p) -> bool:
        return True

    def cell(self, cell: Cell, model: ZomeModel) -> bool:
        return self.point(cell.centroid)

    def strut(self, index: int, model: ZomeModel) -> bool:
        return True

    def __and__(self, other: Predicate) -> Predicate:
        return And(self, other)

    def __invert__(self) -> Predicate:
        return Not(self)


class _Always(Predicate):
    levels = frozenset()

    def __repr__(self):
        return "TRUE"


TRUE = _Always()


def _ge(x, y) -> bool:
    if isinstance(x, GoldenScalar) and isinstance(y, GoldenScalar):
        return x >= y
    return float(x) >= float(y) - 1e-12


class HalfSpace(Predicate):
    """``<normal, p> >= offset`` (``>`` when strict)."""

    def __init__(self, normal, offset=0, strict: bool = False):
        self.normal = tuple(x if isinstance(x, float) else golden(x) for x in normal)
        self.offset = offset if isinstance(offset, float) else golden(offset)
        self.strict = strict

    def point(self, p) -> bool:
        p = _coords(p)
        if any(isinstance(x, float) for x in tuple(p) + self.normal):
            val = sum(float(a) * float(b) for a, b in zip(self.normal, p))
            off = float(self.offset)
            return val > off if self.strict else val >= off - 1e-12
        val = dot(self.normal, p)
        return val > self.offset if self.strict else val >= self.offset

    def __repr__(self):
        return f"HalfSpace({[str(x) for x in self.normal]}, {self.offset}, strict={self.strict})"


class Orthant(Predicate):
    """Sign pattern per axis: ``+`` (>= 0), ``-`` (<= 0) or ``*`` (any)."""

    def __init__(self, signs: str):
        if any(s not in "+-*" for s in signs):
            raise ValueError(f"bad orthant pattern {signs!r}")
        self.signs = signs

    def point(self, p) -> bool:
        for s, x in zip(self.signs, _coords(p)):
            if s == "+" and not _ge(x, ZERO):
                return False
            if s == "-" and not _ge(ZERO, x):
                return False
        return True

    def __repr__(self):
        return f"Orthant({self.signs!r})"


class LayerRange(Predicate):
    """Cells whose layer lies in ``[lo, hi]`` (``hi=None``: no upper bound)."""

    levels = frozenset({"cell"})

    def __init__(self, lo: int = 0, hi: int | None = None):
        self.lo, self.hi = lo, hi

    def cell(self, cell, model) -> bool:
        if cell.layer is None:
            return False
        return cell.layer >= self.lo and (self.hi is None or cell.layer <= self.hi)

    def __repr__(self):
        return f"LayerRange({self.lo}, {self.hi})"


class ColorSet(Predicate):
    levels = frozenset({"strut"})

    def __init__(self, colors):
        self.colors = frozenset(colors)

    def strut(self, index, model) -> bool:
        return model.struts[index].color in self.colors

    def __repr__(self):
        return f"ColorSet({sorted(self.colors)})"


class Meridian(Predicate):
    """Struts lying in a plane through the origin that contains ``axis``.

    These are the struts on circles of constant longitude about ``axis``
    (both endpoints and the axis coplanar, tested exactly).
    """

    levels = frozenset({"strut"})

    def __init__(self, axis):
        self.axis = tuple(golden(x) for x in axis)

    def strut(self, index, model) -> bool:
        s = model.struts[index]
        return dot(self.axis, cross(model.balls[s.a], model.balls[s.b])) == ZERO

    def __repr__(self):
        return f"Meridian({[str(x) for x in self.axis]})"


class Ring(Predicate):
    """Struts perpendicular to ``axis``: pieces of circles at constant height.

    With ``below``/``above`` only struts strictly under/over the plane
    through the origin normal to ``axis`` count.
    """

    levels = frozenset({"strut"})

    def __init__(self, axis, below: bool = False, above: bool = False):
        self.axis = tuple(golden(x) for x in axis)
        self.below, self.above = below, above

    def strut(self, index, model) -> bool:
        s = model.struts[index]
        pa, pb = model.balls[s.a], model.balls[s.b]
        h = dot(self.axis, pa)
        if h != dot(self.axis, pb):
            return False
        if self.below and not h < ZERO:
            return False
        if self.above and not h > ZERO:
            return False
        return True

    def __repr__(self):
        return f"Ring({[str(x) for x in self.axis]}, below={self.below}, above={self.above})"


class And(Predicate):
    def __init__(self, *preds: Predicate):
        self.preds = preds
        self.levels = frozenset().union(*(q.levels for q in preds))

    def point(self, p):
        return all(q.point(p) for q in self.preds)

    def cell(self, cell, model):
        return all(q.cell(cell, model) for q in self.preds)

    def strut(self, index, model):
        return all(q.strut(index, model) for q in self.preds)

    def __repr__(self):
        return "And(" + ", ".join(map(repr, self.preds)) + ")"


class Not(Predicate):
    """Negates the tests the inner predicate constrains; the rest stay true.

    So ``~ColorSet({"red"})`` drops red struts without emptying every cell.
    """

    def __init__(self, pred: Predicate):
        self.pred = pred
        self.levels = pred.levels

    def point(self, p):
        return "point" not in self.levels or not self.pred.point(p)

    def cell(self, cell, model):
        return "cell" not in self.levels or not self.pred.cell(cell, model)

    def strut(self, index, model):
        return "strut" not in self.levels or not self.pred.strut(index, model)

    def __repr__(self):
        return f"Not({self.pred!r})"


class Custom(Predicate):
    def __init__(self, point: Callable | None = None, cell: Callable | None = None, strut: Callable | None = None):
        self._point, self._cell, self._strut = point, cell, strut
        self.levels = frozenset(
            name for name, fn in (("point", point), ("cell", cell or point), ("strut", strut)) if fn is not None
        )

    def point(self, p):
        return True if self._point is None else bool(self._point(p))

    def cell(self, cell, model):
        if self._cell is not None:
            return bool(self._cell(cell, model))
        return self.point(cell.centroid)

    def strut(self, index, model):
        return True if self._strut is None else bool(self._strut(index, model))


# -- filtering and diffs -----------------------------------------------------


def filter_model(model: ZomeModel, pred: Predicate) -> ZomeModel:
    """Sub-model of the items passing ``pred``.

    With cell data the cells are tested and the kept balls are those of kept
    cells; without it balls are tested directly.  A strut survives when both
    of its balls do and it passes the strut test.
    """
    if model.cells is not None:
        keep_cells = [i for i, c in enumerate(model.cells) if pred.cell(c, model)]
        keep_balls = sorted({b for i in keep_cells for b in model.cells[i].balls})
    else:
        keep_cells = None
        keep_balls = [i for i, p in enumerate(model.balls) if pred.point(p)]
    ball_map = {b: k for k, b in enumerate(keep_balls)}
    keep_struts = [
        i for i, s in enumerate(model.struts) if s.a in ball_map and s.b in ball_map and pred.strut(i, model)
    ]
    strut_map = {s: k for k, s in enumerate(keep_struts)}
    struts = [replace(model.struts[i], a=ball_map[model.struts[i].a], b=ball_map[model.struts[i].b]) for i in keep_struts]
    cells = adjacency = cell_origin = None
    if keep_cells is not None:
        cell_map = {c: k for k, c in enumerate(keep_cells)}
        cells = []
        for i in keep_cells:
            c = model.cells[i]
            cells.append(
                Cell(
                    tuple(ball_map[b] for b in c.balls),
                    tuple(strut_map[s] for s in c.struts if s in strut_map),
                    c.centroid,
                    c.source,
                    c.layer,
                )
            )
        if model.adjacency is not None:
            adjacency = [[cell_map[j] for j in model.adjacency[i] if j in cell_map] for i in keep_cells]
        cell_origin = [model.cell_origin[i] for i in keep_cells]
    prov = dict(model.provenance)
    prov["filter"] = repr(pred)
    return ZomeModel(
        [model.balls[b] for b in keep_balls],
        struts,
        cells,
        adjacency,
        prov,
        [model.ball_origin[b] for b in keep_balls],
        [model.strut_origin[s] for s in keep_struts],
        cell_origin,
    )


def model_diff(model: ZomeModel, sub: ZomeModel) -> ZomeModel:
    """Tag struts of ``model`` already present in ``sub`` as background.

    Both models must be cut from the same source, so struts are matched on
    their origin ids; the rest are tagged foreground (the ones to add).
    """
    have = set(model.strut_origin)
    done = set(sub.strut_origin)
    missing = done - have
    if missing:
        raise DiffError(f"{len(missing)} strut(s) of the sub-model are not in the model")
    tags = ["background" if o in done else "foreground" for o in model.strut_origin]
    return model.with_tags(tags)


# -- single-color paths ------------------------------------------------------


@dataclass
class Path:
    balls: tuple[int, ...]
    struts: tuple[int, ...]
    closed: bool

    def __len__(self) -> int:
        return len(self.struts)


def monochrome_paths(model: ZomeModel, color: str, pred: Predicate | None = None) -> list[Path]:
    """Maximal paths and cycles of ``color`` struts through degree-2 balls.

    Paths run between balls whose degree in the color subgraph is not 2;
    what remains are cycles.  ``pred`` restricts the struts first (e.g.
    :class:`Meridian`).  Ordering is deterministic: paths by start ball and
    first strut, then cycles by their smallest strut id.
    """
    ids = [i for i, s in enumerate(model.struts) if s.color == color and (pred is None or pred.strut(i, model))]
    inc: dict[int, list[int]] = {}
    for i in ids:
        s = model.struts[i]
        inc.setdefault(s.a, []).append(i)
        inc.setdefault(s.b, []).append(i)
    for v in inc.values():
        v.sort()
    used = set()
    out = []

    def other(i, b):
        s = model.struts[i]
        return s.b if s.a == b else s.a

    def walk(start, first):
        balls, struts = [start], []
        cur, edge = start, first
        while True:
            used.add(edge)
            struts.append(edge)
            nxt = other(edge, cur)
            balls.append(nxt)
            if nxt == start or len(inc[nxt]) != 2:
                return balls, struts, nxt == start
            edge = inc[nxt][0] if inc[nxt][0] != edge else inc[nxt][1]
            if edge in used:
                return balls, struts, False
            cur = nxt

    for b in sorted(inc):
        if len(inc[b]) == 2:
            continue
        for e in inc[b]:
            if e not in used:
                balls, struts, closed = walk(b, e)
                out.append(Path(tuple(balls), tuple(struts), closed))
    for e in ids:
        if e in used:
            continue
        s = model.struts[e]
        balls, struts, closed = walk(min(s.a, s.b), e)
        out.append(Path(tuple(balls), tuple(struts), closed))
    return out


def float_balls(model: ZomeModel) -> np.ndarray:
    return np.array([[float(x) for x in b] for b in model.balls]) if model.balls else np.zeros((0, 3))
