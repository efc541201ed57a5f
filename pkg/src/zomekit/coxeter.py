"""Coxeter diagrams, ring patterns and their reflection representations.

Node order per family (ring patterns are positional):

* ``A_n``: chain 1-2-...-n, roots ``e_i - e_{i+1}`` in R^(n+1).
* ``B_n``: chain with the 4-edge between nodes n-1 and n; node n is the
  short root ``e_n``.  Ringing node 1 gives the cross-polytope, node n the
  hypercube.
* ``D_n``: chain 1-...-(n-2) with nodes n-1 and n both attached to n-2.
* ``E_6, E_7, E_8``: Bourbaki numbering, chain 1-3-4-5-...-n with node 2
  attached to node 4; roots in R^8.
* ``F_4``: chain 1-2=4=3-4 (4-edge between nodes 2 and 3); nodes 1, 2 long.
* ``H_3, H_4``: chain with the 5-edge between nodes 1 and 2.  Ringing node 1
  gives the dodecahedron / 120-cell, the last node the icosahedron / 600-cell.
* ``I2(p)``: two nodes joined by a p-edge.

A ring ``x`` marks an active node: the seed point lies off that mirror.
Diagrams drawn with crossed boxes on the fixed mirrors map crosses to ``o``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np

from . import lattice
from .golden import (
    ONE,
    PHI,
    ZERO,
    GoldenScalar,
    dot,
    golden,
    identity,
    mat_equal,
    matmul,
    solve_linear,
)
from .orbit import OrbitCapError, exact_orbit, float_orbit

__all__ = [
    "Diagram",
    "RingPattern",
    "ReflectionRep",
    "CoxeterElementInfo",
    "DiagramError",
    "NotFiniteTypeError",
    "ReducibleDiagramError",
    "parse_diagram",
    "parse_rings",
    "load_diagram_file",
    "family_matrix",
    "simple_roots",
    "group_order",
    "coxeter_element",
    "check_relations",
    "OrbitCapError",
]


class DiagramError(ValueError):
    """Malformed or unsupported diagram specification."""


class NotFiniteTypeError(DiagramError):
    """The Coxeter matrix does not describe a finite reflection group."""


class ReducibleDiagramError(DiagramError):
    """Operation needs a connected diagram."""


@dataclass(frozen=True)
class Diagram:
    m: tuple[tuple[int, ...], ...]
    family: str | None = None

    @property
    def n(self) -> int:
        return len(self.m)

    def components(self, nodes=None) -> list[list[int]]:
        nodes = list(range(self.n)) if nodes is None else sorted(nodes)
        left = set(nodes)
        comps = []
        while left:
            start = min(left)
            comp = {start}
            stack = [start]
            while stack:
                i = stack.pop()
                for j in list(left):
                    if j not in comp and self.m[i][j] >= 3:
                        comp.add(j)
                        stack.append(j)
            left -= comp
            comps.append(sorted(comp))
        return comps

    def is_connected(self, nodes=None) -> bool:
        return len(self.components(nodes)) == 1

    def gram_float(self) -> np.ndarray:
        n = self.n
        G = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                G[i, j] = 1.0 if i == j else -math.cos(math.pi / self.m[i][j])
        return G

    def __str__(self):
        if self.family:
            return self.family
        return "matrix:" + json.dumps([list(r) for r in self.m], separators=(",", ":"))


@dataclass(frozen=True)
class RingPattern:
    active: tuple[bool, ...]

    def __post_init__(self):
        if not any(self.active):
            raise DiagramError("ring pattern has no active node")

    @property
    def active_nodes(self) -> list[int]:
        return [i for i, a in enumerate(self.active) if a]

    def __str__(self):
        return " ".join("x" if a else "o" for a in self.active)


# -- family tables -----------------------------------------------------------


def _chain(n: int, labels: dict[tuple[int, int], int] | None = None) -> list[list[int]]:
    m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        m[i][i + 1] = m[i + 1][i] = 3
    for (i, j), v in (labels or {}).items():
        m[i][j] = m[j][i] = v
    return m


def family_matrix(family: str, n: int, p: int | None = None) -> list[list[int]]:
    if family == "A":
        if n < 1:
            raise DiagramError("A_n needs n >= 1")
        return _chain(n)
    if family == "B":
        if n < 2:
            raise DiagramError("B_n needs n >= 2")
        return _chain(n, {(n - 2, n - 1): 4})
    if family == "D":
        if n < 4:
            raise DiagramError("D_n needs n >= 4")
        m = _chain(n - 1)
        m = [row + [2] for row in m] + [[2] * n]
        m[n - 1][n - 1] = 1
        m[n - 3][n - 1] = m[n - 1][n - 3] = 3
        return m
    if family == "E":
        if n > 8:
            raise NotFiniteTypeError(f"E{n} is not of finite type")
        if n < 6:
            raise DiagramError("E_n needs 6 <= n <= 8")
        m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
        edges = [(0, 2), (2, 3), (1, 3)] + [(k, k + 1) for k in range(3, n - 1)]
        for i, j in edges:
            m[i][j] = m[j][i] = 3
        return m
    if family == "F":
        if n != 4:
            if n > 4:
                raise NotFiniteTypeError(f"F{n} is not of finite type")
            raise DiagramError("F_n exists only for n = 4")
        return _chain(4, {(1, 2): 4})
    if family == "H":
        if n not in (3, 4):
            if n > 4:
                raise NotFiniteTypeError(f"H{n} is not of finite type")
            raise DiagramError("H_n exists only for n = 3, 4")
        return _chain(n, {(0, 1): 5})
    if family == "I":
        if n != 2 or p is None or p < 2:
            raise DiagramError("dihedral family is written I2(p) with p >= 2")
        return [[1, p], [p, 1]]
    raise DiagramError(f"unknown family {family!r}")


_FAMILY_RE = re.compile(r"^([A-Za-z])(\d+)(?:\((\d+)\))?$")


def parse_rings(text: str, n: int) -> RingPattern:
    s = text.strip().lower()
    if s in ("all", "all-active", "*"):
        return RingPattern((True,) * n)
    tokens = s.split() if " " in s else list(s.replace(",", ""))
    bad = [t for t in tokens if t not in ("x", "o")]
    if bad:
        raise DiagramError(f"ring tokens must be 'x' or 'o', got {bad[0]!r}")
    if len(tokens) != n:
        raise DiagramError(f"ring pattern has {len(tokens)} nodes, diagram has {n}")
    return RingPattern(tuple(t == "x" for t in tokens))


def _validate_matrix(m) -> tuple[tuple[int, ...], ...]:
    n = len(m)
    if n == 0 or any(len(r) != n for r in m):
        raise DiagramError("Coxeter matrix must be square and nonempty")
    for i in range(n):
        if m[i][i] != 1:
            raise DiagramError("Coxeter matrix needs m_ii = 1")
        for j in range(n):
            if m[i][j] != m[j][i]:
                raise DiagramError("Coxeter matrix must be symmetric")
            if i != j and (not isinstance(m[i][j], int) or m[i][j] < 2):
                raise DiagramError("off-diagonal entries must be integers >= 2")
    return tuple(tuple(int(v) for v in row) for row in m)


def _check_finite(d: Diagram):
    w = np.linalg.eigvalsh(d.gram_float())
    if w.min() <= 1e-10:
        raise NotFiniteTypeError(f"{d} is not of finite type (Gram matrix not positive definite)")


def parse_diagram(text: str) -> tuple[Diagram, RingPattern]:
    """Parse ``"H4 o x x x"``, ``"I2(7) x x"`` or ``"matrix:[[1,3],[3,1]] rings:xo"``."""
    s = text.strip()
    if s.startswith("matrix:"):
        m = re.match(r"^matrix:\s*(\[.*\])\s+rings:\s*(.+)$", s)
        if not m:
            raise DiagramError("matrix form is 'matrix:[[...]] rings:<x|o...>'")
        try:
            raw = json.loads(m.group(1))
        except json.JSONDecodeError as exc:
            raise DiagramError(f"bad matrix literal: {exc}") from None
        d = Diagram(_validate_matrix(raw), None)
        _check_finite(d)
        return d, parse_rings(m.group(2), d.n)
    head, _, rest = s.partition(" ")
    fm = _FAMILY_RE.match(head)
    if not fm:
        raise DiagramError(f"cannot parse diagram {head!r}")
    fam, n = fm.group(1).upper(), int(fm.group(2))
    p = int(fm.group(3)) if fm.group(3) else None
    if fam not in "ABDEFHI":
        raise DiagramError(f"unknown family {fam!r}")
    if fam != "I" and p is not None:
        raise DiagramError("only the dihedral family takes a parameter")
    m = family_matrix(fam, n, p)
    tag = f"I2({p})" if fam == "I" else f"{fam}{n}"
    d = Diagram(_validate_matrix(m), tag)
    _check_finite(d)
    if not rest.strip():
        raise DiagramError("missing ring pattern")
    return d, parse_rings(rest, d.n)


def load_diagram_file(path) -> list[tuple[Diagram, RingPattern]]:
    """One diagram spec per line; blank lines and ``#`` comments ignored."""
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_diagram(line))
    return out


# -- root realizations -------------------------------------------------------

_H = Fraction(1, 2)


def _unit(n, i, c=1):
    v = [ZERO] * n
    v[i] = golden(c)
    return v


def _exact_roots(d: Diagram) -> list[tuple[GoldenScalar, ...]] | None:
    tag = d.family
    if tag is None:
        return None
    fam, n = tag[0], d.n
    rows: list[list[GoldenScalar]] = []
    if fam == "A":
        for i in range(n):
            v = _unit(n + 1, i)
            v[i + 1] = -ONE
            rows.append(v)
    elif fam == "B":
        for i in range(n - 1):
            v = _unit(n, i)
            v[i + 1] = -ONE
            rows.append(v)
        rows.append(_unit(n, n - 1))
    elif fam == "D":
        for i in range(n - 1):
            v = _unit(n, i)
            v[i + 1] = -ONE
            rows.append(v)
        v = _unit(n, n - 2)
        v[n - 1] = ONE
        rows.append(v)
    elif fam == "E":
        h = golden(_H)
        e8 = [[h, -h, -h, -h, -h, -h, -h, h]]
        e8.append([ONE, ONE] + [ZERO] * 6)
        e8.append([-ONE, ONE] + [ZERO] * 6)
        for k in range(1, 6):
            v = [ZERO] * 8
            v[k], v[k + 1] = -ONE, ONE
            e8.append(v)
        rows = e8[:n]
    elif fam == "F":
        h = golden(_H)
        rows = [
            [ZERO, ONE, -ONE, ZERO],
            [ZERO, ZERO, ONE, -ONE],
            [ZERO, ZERO, ZERO, ONE],
            [h, -h, -h, -h],
        ]
    elif fam == "H":
        psi = ONE - PHI  # 1 - phi = -1/phi
        h4 = [
            [golden(2), ZERO, ZERO, ZERO],
            [-PHI, -ONE, psi, ZERO],
            [ZERO, golden(2), ZERO, ZERO],
            [ZERO, -ONE, PHI, psi],
        ]
        rows = [r[:3] for r in h4[:3]] if n == 3 else h4
    elif tag == "I2(5)":
        rows = [[golden(2), ZERO, ZERO], [-PHI, -ONE, ONE - PHI]]
    elif tag == "I2(3)":
        rows = [[ONE, -ONE, ZERO], [ZERO, ONE, -ONE]]
    elif tag == "I2(4)":
        rows = [[ONE, -ONE], [ZERO, ONE]]
    elif tag == "I2(6)":
        # the G2 root system, in the plane x + y + z = 0
        rows = [[ONE, -ONE, ZERO], [golden(-2), ONE, ONE]]
    else:
        return None
    return [tuple(r) for r in rows]


def _reflection(alpha) -> tuple:
    n2 = dot(alpha, alpha)
    c = golden(2) / n2
    d = len(alpha)
    return tuple(
        tuple((ONE if i == j else ZERO) - c * alpha[i] * alpha[j] for j in range(d)) for i in range(d)
    )


@dataclass
class ReflectionRep:
    """Simple roots and reflection matrices, exact or float."""

    diagram: Diagram
    roots: list  # exact: tuples of GoldenScalar; float: rows of an ndarray
    mode: str  # "exact" | "float"

    @property
    def dim(self) -> int:
        return len(self.roots[0])

    @property
    def rank(self) -> int:
        return len(self.roots)

    @cached_property
    def reflections(self) -> list:
        if self.mode == "exact":
            return [_reflection(a) for a in self.roots]
        out = []
        for a in self.roots:
            a = np.asarray(a, dtype=float)
            out.append(np.eye(len(a)) - 2.0 * np.outer(a, a) / a.dot(a))
        return out

    @cached_property
    def lattice_generators(self) -> list[tuple[np.ndarray, int]]:
        if self.mode != "exact":
            raise ValueError("lattice generators need an exact representation")
        return [lattice.to_lattice(R) for R in self.reflections]

    def gram(self):
        if self.mode == "exact":
            return [[dot(a, b) for b in self.roots] for a in self.roots]
        R = np.asarray(self.roots, dtype=float)
        return R @ R.T

    def float_roots(self) -> np.ndarray:
        if self.mode == "exact":
            return np.array([[float(x) for x in r] for r in self.roots])
        return np.asarray(self.roots, dtype=float)

    def to_float(self) -> ReflectionRep:
        if self.mode == "float":
            return self
        return ReflectionRep(self.diagram, list(self.float_roots()), "float")


def _float_roots(d: Diagram) -> list[np.ndarray]:
    if d.family and d.family.startswith("I2("):
        p = d.m[0][1]
        return [np.array([1.0, 0.0]), np.array([-math.cos(math.pi / p), math.sin(math.pi / p)])]
    L = np.linalg.cholesky(d.gram_float())
    return [L[i].copy() for i in range(d.n)]


def simple_roots(d: Diagram) -> ReflectionRep:
    """Exact crystallographic or golden roots when available, float otherwise."""
    rows = _exact_roots(d)
    if rows is not None:
        return ReflectionRep(d, rows, "exact")
    return ReflectionRep(d, _float_roots(d), "float")


def check_relations(rep: ReflectionRep, tol: float = 1e-10) -> bool:
    """``R_i^2 = I`` and ``(R_i R_j)^m_ij = I`` for all pairs."""
    R = rep.reflections
    n = rep.rank
    if rep.mode == "exact":
        eye = identity(rep.dim)
        for i in range(n):
            for j in range(i, n):
                P = matmul(R[i], R[j])
                acc = eye
                for _ in range(rep.diagram.m[i][j]):
                    acc = matmul(acc, P)
                if not mat_equal(acc, eye):
                    return False
        return True
    eye = np.eye(rep.dim)
    for i in range(n):
        for j in range(i, n):
            P = np.linalg.matrix_power(R[i] @ R[j], rep.diagram.m[i][j])
            if np.abs(P - eye).max() > tol:
                return False
    return True


# -- group-level invariants --------------------------------------------------


def _generic_point(rep: ReflectionRep):
    """A point with <p, alpha_i> = 1 for every simple root, in the root span."""
    if rep.mode == "exact":
        G = rep.gram()
        beta = solve_linear(G, [ONE] * rep.rank)
        p = [ZERO] * rep.dim
        for b, a in zip(beta, rep.roots):
            p = [x + b * y for x, y in zip(p, a)]
        return tuple(p)
    R = rep.float_roots()
    beta = np.linalg.solve(R @ R.T, np.ones(rep.rank))
    p = beta @ R
    return p / np.linalg.norm(p)


def run_orbit(rep: ReflectionRep, p, cap: int):
    if rep.mode == "exact":
        num, den = lattice.to_lattice([p])
        return exact_orbit(rep.lattice_generators, num[0], den, cap=cap)
    return float_orbit([np.asarray(R) for R in rep.reflections], np.asarray(p, dtype=float), cap=cap)


def group_order(rep: ReflectionRep, cap: int = 10**7) -> int:
    """Size of the orbit of a point off every mirror (equals |W|)."""
    return len(run_orbit(rep, _generic_point(rep), cap))


@dataclass
class CoxeterElementInfo:
    matrix: object  # exact tuple-matrix or float ndarray
    h: int
    nodes: tuple[int, ...]
    mode: str
    rep: ReflectionRep = field(repr=False, default=None)

    def float_matrix(self) -> np.ndarray:
        if self.mode == "exact":
            return np.array([[float(x) for x in row] for row in self.matrix])
        return np.asarray(self.matrix, dtype=float)


def coxeter_element(rep: ReflectionRep, nodes=None, cap: int = 10**4) -> CoxeterElementInfo:
    """Product of the reflections in ``nodes`` (default: all, in node order).

    ``nodes`` selects a parabolic subdiagram; the product then acts on the
    ambient space and fixes the orthogonal complement of those roots.
    """
    nodes = tuple(range(rep.rank)) if nodes is None else tuple(nodes)
    if not nodes:
        raise ReducibleDiagramError("empty node set")
    if not rep.diagram.is_connected(nodes):
        raise ReducibleDiagramError("Coxeter element needs a connected (irreducible) diagram")
    R = rep.reflections
    if rep.mode == "exact":
        C = R[nodes[0]]
        for i in nodes[1:]:
            C = matmul(C, R[i])
        eye = identity(rep.dim)
        acc = C
        for h in range(1, cap + 1):
            if mat_equal(acc, eye):
                return CoxeterElementInfo(C, h, nodes, "exact", rep)
            acc = matmul(acc, C)
        raise OrbitCapError(cap)
    C = np.asarray(R[nodes[0]])
    for i in nodes[1:]:
        C = C @ R[i]
    eye = np.eye(rep.dim)
    acc = C.copy()
    for h in range(1, cap + 1):
        if np.abs(acc - eye).max() < 1e-9:
            return CoxeterElementInfo(C, h, nodes, "float", rep)
        acc = acc @ C
    raise OrbitCapError(cap)
