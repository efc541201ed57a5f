"""Zome model records and the parts list."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace

from .catalog import LETTERS

__all__ = ["Strut", "Cell", "ZomeModel", "PartsList", "parts_list"]


@dataclass(frozen=True)
class Strut:
    a: int
    b: int
    color: str
    line: int
    size: int
    tag: str | None = None  # "background" / "foreground" after model_diff

    @property
    def label(self) -> str:
        return f"{LETTERS.get(self.color, self.color[:1].upper())}{self.size}"


@dataclass
class Cell:
    balls: tuple[int, ...]
    struts: tuple[int, ...]
    centroid: tuple  # exact 3-vector (projected centroid of the source cell)
    source: int  # cell id in the projected polytope
    layer: int | None = None


@dataclass
class ZomeModel:
    """Balls (distinct exact 3-vectors) joined by catalog struts.

    Every strut vector equals ``scale * phi**(size - shift)`` times its line
    representative, up to sign, with ``scale`` and ``shift`` kept in
    ``provenance``.  ``ball_origin``/``strut_origin``/``cell_origin`` give the
    ids of each item in the model this one was cut from (identity for a
    freshly built model), which is what :func:`model_diff` matches on.
    """

    balls: list
    struts: list[Strut]
    cells: list[Cell] | None = None
    adjacency: list[list[int]] | None = None
    provenance: dict = field(default_factory=dict)
    ball_origin: list[int] | None = None
    strut_origin: list[int] | None = None
    cell_origin: list[int] | None = None

    def __post_init__(self):
        if self.ball_origin is None:
            self.ball_origin = list(range(len(self.balls)))
        if self.strut_origin is None:
            self.strut_origin = list(range(len(self.struts)))
        if self.cells is not None and self.cell_origin is None:
            self.cell_origin = list(range(len(self.cells)))

    @property
    def colors(self) -> set[str]:
        return {s.color for s in self.struts}

    def strut_vector(self, i: int) -> tuple:
        s = self.struts[i]
        return tuple(y - x for x, y in zip(self.balls[s.a], self.balls[s.b]))

    def with_tags(self, tags: list[str | None]) -> ZomeModel:
        struts = [replace(s, tag=t) for s, t in zip(self.struts, tags)]
        return replace(self, struts=struts)


@dataclass
class PartsList:
    balls: int
    struts: dict[str, int]  # label ("R2") -> count

    @property
    def total(self) -> int:
        return self.balls + sum(self.struts.values())

    def labels(self) -> list[str]:
        order = {LETTERS[c]: i for i, c in enumerate(("red", "blue", "yellow"))}
        return sorted(self.struts, key=lambda s: (order.get(s[0], len(order)), s[0], -int(s[1:])))

    def render(self) -> str:
        lines = [f"Balls = {self.balls}"]
        lines += [f"{lab} = {self.struts[lab]}" for lab in self.labels()]
        return "\n".join(lines) + "\n"


def parts_list(model: ZomeModel) -> PartsList:
    """Ball count plus strut counts by color letter and size.

    Rendered red first, then blue, then yellow, larger sizes before smaller
    ones within a color.
    """
    counts = Counter(s.label for s in model.struts)
    return PartsList(len(model.balls), dict(counts))
