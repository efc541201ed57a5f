"""The Zome strut directions: 15 blue, 10 yellow and 6 red lines.

Representatives within a color share one squared norm, so a single size
ladder (ratio phi) serves every line of that color.  :func:`verify` checks
each line against the icosahedron exactly: the rotation about it by the
color's angle must permute the twelve vertices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..golden import ONE, PHI, ZERO, GoldenScalar, cross, dot, golden, norm2

__all__ = ["COLORS", "Line", "StrutCatalog", "CatalogError", "default_catalog", "icosahedron", "axis_rotation"]

COLORS = ("blue", "yellow", "red")
LETTERS = {"blue": "B", "yellow": "Y", "red": "R"}
FOLD = {"blue": 2, "yellow": 3, "red": 5}

# cos(2 pi / n) in Q(phi)
_COS = {2: golden(-1), 3: GoldenScalar(Fraction(-1, 2)), 5: GoldenScalar(Fraction(-1, 2), Fraction(1, 2))}


class CatalogError(RuntimeError):
    pass


@dataclass(frozen=True)
class Line:
    id: int
    color: str
    rep: tuple[GoldenScalar, ...]

    @property
    def letter(self) -> str:
        return LETTERS[self.color]


def _cyclic(v):
    return [v, (v[1], v[2], v[0]), (v[2], v[0], v[1])]


def _signed(v):
    """Sign variants of ``v`` up to overall sign (first nonzero entry positive)."""
    out = []
    nz = [i for i, x in enumerate(v) if x]
    for signs in itertools.product((1, -1), repeat=len(nz) - 1):
        w = list(v)
        for i, s in zip(nz[1:], signs):
            w[i] = -w[i] if s < 0 else w[i]
        out.append(tuple(w))
    return out


def _reps():
    two = golden(2)
    blue = [(two, ZERO, ZERO), (ZERO, two, ZERO), (ZERO, ZERO, two)]
    for v in _cyclic((PHI - 1, PHI, ONE)):
        blue += _signed(v)
    yellow = _signed((ONE, ONE, ONE))
    for v in _cyclic((PHI - 1, ZERO, PHI)):
        yellow += _signed(v)
    red = []
    for v in _cyclic((ZERO, ONE, PHI)):
        red += _signed(v)
    return {"blue": blue, "yellow": yellow, "red": red}


def icosahedron() -> list[tuple[GoldenScalar, ...]]:
    """The twelve vertices: cyclic permutations of (0, +-1, +-phi)."""
    out = []
    for s1, s2 in itertools.product((1, -1), repeat=2):
        out += _cyclic((ZERO, golden(s1), s2 * PHI))
    return out


def axis_rotation(d, n: int):
    """Exact rotation by 2 pi / n about ``d``; None if it leaves Q(phi)."""
    c = _COS[n]
    nn = norm2(d)
    t = (ONE - c * c) / nn  # (sin / |d|)^2
    s = t.sqrt()
    if s is None:
        return None
    k = (ONE - c) / nn
    x, y, z = d
    K = ((ZERO, -z, y), (z, ZERO, -x), (-y, x, ZERO))
    return tuple(
        tuple((c if i == j else ZERO) + k * d[i] * d[j] + s * K[i][j] for j in range(3)) for i in range(3)
    )


class StrutCatalog:
    """Immutable list of lines with a float copy for prefiltering."""

    def __init__(self, extra: dict[str, list] | None = None, check: bool = True):
        reps = _reps()
        lines = []
        for color in COLORS:
            for r in reps[color]:
                lines.append(Line(len(lines), color, r))
        # extension hook: extra colors (e.g. green) are off unless supplied
        for color, vecs in (extra or {}).items():
            for r in vecs:
                lines.append(Line(len(lines), color, tuple(golden(x) for x in r)))
        self.lines: tuple[Line, ...] = tuple(lines)
        self.norm2 = {c: norm2(reps[c][0]) for c in COLORS}
        self.float_units = np.array([[float(x) for x in ln.rep] for ln in lines])
        self.float_units /= np.linalg.norm(self.float_units, axis=1)[:, None]
        if check:
            verify(self)

    def __len__(self) -> int:
        return len(self.lines)

    def __getitem__(self, i: int) -> Line:
        return self.lines[i]

    def by_color(self, color: str) -> list[Line]:
        return [ln for ln in self.lines if ln.color == color]

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for ln in self.lines:
            out[ln.color] = out.get(ln.color, 0) + 1
        return out


def verify(cat: StrutCatalog) -> None:
    """Exact checks: line counts, equal norms, axis symmetry, no parallels."""
    want = {"blue": 15, "yellow": 10, "red": 6}
    counts = cat.counts()
    for color, n in want.items():
        if counts.get(color) != n:
            raise CatalogError(f"{color}: {counts.get(color)} lines, expected {n}")
    ico = set(icosahedron())
    for ln in cat.lines:
        if ln.color not in FOLD:
            continue
        if norm2(ln.rep) != cat.norm2[ln.color]:
            raise CatalogError(f"line {ln.id} has the wrong norm for {ln.color}")
        R = axis_rotation(ln.rep, FOLD[ln.color])
        if R is None:
            raise CatalogError(f"line {ln.id}: rotation not exact")
        image = {tuple(dot(row, v) for row in R) for v in ico}
        if image != ico:
            raise CatalogError(f"line {ln.id} is not a {FOLD[ln.color]}-fold axis")
    for a, b in itertools.combinations(cat.lines, 2):
        if not any(cross(a.rep, b.rep)):
            raise CatalogError(f"lines {a.id} and {b.id} are parallel")


_DEFAULT: StrutCatalog | None = None


def default_catalog() -> StrutCatalog:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = StrutCatalog()
    return _DEFAULT
