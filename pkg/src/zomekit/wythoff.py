"""Wythoff construction: seed point, vertex orbit, edges and face lattice.

Faces come from parabolic suborbits instead of a convex hull: for a set S
of k generators the points ``W_S p`` span a k-face exactly when their affine
hull is k-dimensional, and the k-faces are the images of that suborbit
under the whole group.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import lattice
from .coxeter import Diagram, ReflectionRep, RingPattern, parse_diagram, run_orbit, simple_roots
from .golden import ZERO, GoldenScalar, rank, solve_linear
from .orbit import Orbit, close_sets, suborbit

__all__ = [
    "Polytope",
    "ExactnessWarning",
    "seed_point",
    "vertex_orbit",
    "edges",
    "face_lattice",
    "build_polytope",
    "cell_adjacency",
    "affine_dimension",
    "RankError",
]

DEFAULT_VERTEX_CAP = 10**6


class ExactnessWarning(UserWarning):
    """Emitted when a computation has to leave exact arithmetic."""


class RankError(ValueError):
    """Operation called on a polytope of the wrong rank."""


@dataclass
class Polytope:
    """Vertices plus faces of every rank 1..rank-1 as sorted vertex-id tuples.

    ``dim`` is the coordinate dimension, ``rank`` the combinatorial one; they
    differ for projections (a 4-polytope projected to R^3 keeps its cells).
    """

    dim: int
    rank: int
    mode: str
    vertices: list  # exact: tuples of GoldenScalar; float: ndarray (n, dim)
    faces: dict[int, list[tuple[int, ...]]]
    provenance: dict = field(default_factory=dict)
    edge_paths: list | None = None  # optional sampled curves for each edge
    perms: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def edges(self) -> list[tuple[int, ...]]:
        return self.faces.get(1, [])

    @property
    def f_vector(self) -> tuple[int, ...]:
        return (len(self.vertices),) + tuple(len(self.faces.get(k, [])) for k in range(1, self.rank))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * f for k, f in enumerate(self.f_vector))

    def float_vertices(self) -> np.ndarray:
        if self.mode == "exact":
            num, den = self.lattice
            return lattice.to_float(num, den)
        return np.asarray(self.vertices, dtype=float)

    @cached_property
    def lattice(self) -> tuple[np.ndarray, int]:
        if self.mode != "exact":
            raise ValueError("float polytope has no lattice encoding")
        return lattice.to_lattice(self.vertices)


def seed_point(rep: ReflectionRep, rings: RingPattern):
    """Point on the inactive mirrors at equal distance from the active ones.

    Returns ``(point, rep)``: the representation is switched to float mode
    (with an :class:`ExactnessWarning`) when the active root norms are not
    square multiples of each other in Q(phi).
    """
    if len(rings.active) != rep.rank:
        raise ValueError("ring pattern length does not match the diagram")
    active = rings.active_nodes
    if rep.mode == "exact":
        G = rep.gram()
        ref = G[active[0]][active[0]]
        rhs = []
        ok = True
        for i in range(rep.rank):
            if not rings.active[i]:
                rhs.append(ZERO)
                continue
            r = (G[i][i] / ref).sqrt()
            if r is None:
                ok = False
                break
            rhs.append(r)
        if ok:
            beta = solve_linear(G, rhs)
            p = [ZERO] * rep.dim
            for b, a in zip(beta, rep.roots):
                if b:
                    p = [x + b * y for x, y in zip(p, a)]
            first = next(x for x in p if x)
            return tuple(x / first for x in p), rep
        warnings.warn(
            f"{rep.diagram} {rings}: active root norms are not square-related in Q(phi); using float mode",
            ExactnessWarning,
            stacklevel=2,
        )
        rep = rep.to_float()
    R = rep.float_roots()
    norms = np.sqrt((R * R).sum(axis=1))
    rhs = np.where(np.array(rings.active), norms, 0.0)
    beta = np.linalg.solve(R @ R.T, rhs)
    p = beta @ R
    return p / np.linalg.norm(p), rep


def _orbit(rep: ReflectionRep, p, cap: int) -> Orbit:
    if rep.mode == "float":
        p = np.asarray(p, dtype=float)
        p = p / np.linalg.norm(p)
    return run_orbit(rep, p, cap)


def vertex_orbit(rep: ReflectionRep, p, cap: int = DEFAULT_VERTEX_CAP):
    """All images of ``p``: exact tuples or a float array (unit circumradius)."""
    return _orbit(rep, p, cap).vectors()


def _edge_seeds(orb: Orbit, rings: RingPattern) -> list[tuple[int, int]]:
    return [(0, int(orb.perms[i, 0])) for i in rings.active_nodes if int(orb.perms[i, 0]) != 0]


def edges(rep: ReflectionRep, rings: RingPattern, p, vertices=None, cap: int = DEFAULT_VERTEX_CAP):
    """Edges as sorted id pairs; ids follow :func:`vertex_orbit` order."""
    orb = _orbit(rep, p, cap)
    return close_sets(orb.perms, _edge_seeds(orb, rings))


def affine_dimension(points) -> int:
    """Dimension of the affine hull of exact tuples or float rows."""
    if len(points) <= 1:
        return 0
    if isinstance(points, np.ndarray):
        diffs = points[1:] - points[0]
        scale = max(1.0, float(np.abs(points).max()))
        return int(np.linalg.matrix_rank(diffs, tol=1e-8 * scale))
    base = points[0]
    return rank([tuple(x - y for x, y in zip(q, base)) for q in points[1:]])


def _point_dimension(orb: Orbit, ids: list[int]) -> int:
    if orb.mode == "exact":
        # rank is unchanged by the common denominator, so use numerators directly
        rows = [tuple(GoldenScalar(int(a), int(b)) for a, b in orb.points[i].tolist()) for i in ids]
        return affine_dimension(rows)
    return affine_dimension(orb.points[ids])


def face_lattice(rep: ReflectionRep, rings: RingPattern, p=None, cap: int = DEFAULT_VERTEX_CAP) -> Polytope:
    """Full graded face lattice of the Wythoffian polytope."""
    if p is None:
        p, rep = seed_point(rep, rings)
    orb = _orbit(rep, p, cap)
    # the orbit spans exactly the roots of the components carrying a ring
    prank = sum(len(c) for c in rep.diagram.components() if any(rings.active[i] for i in c))
    faces: dict[int, list[tuple[int, ...]]] = {}
    for k in range(1, prank):
        seeds = []
        for S in itertools.combinations(range(rep.rank), k):
            ids = suborbit(orb.perms, list(S))
            if len(ids) < k + 1:
                continue
            if _point_dimension(orb, ids) == k:
                seeds.append(tuple(ids))
        faces[k] = close_sets(orb.perms, seeds)
    if prank == 1:
        faces[1] = close_sets(orb.perms, _edge_seeds(orb, rings))
    verts = orb.vectors()
    prov = {"diagram": str(rep.diagram), "rings": str(rings), "generator": "wythoff"}
    poly = Polytope(rep.dim, prank, orb.mode, verts, faces, prov, perms=orb.perms)
    if orb.mode == "exact":
        poly.__dict__["lattice"] = (orb.points, orb.denominator)
    return poly


def build_polytope(spec: str | tuple[Diagram, RingPattern], cap: int = DEFAULT_VERTEX_CAP) -> Polytope:
    """Parse, realize roots, place the seed and build the face lattice."""
    d, rings = parse_diagram(spec) if isinstance(spec, str) else spec
    rep = simple_roots(d)
    p, rep = seed_point(rep, rings)
    return face_lattice(rep, rings, p, cap=cap)


def cell_adjacency(poly: Polytope) -> list[list[int]]:
    """Neighbors of each rank-3 face, two cells touching along a 2-face."""
    if poly.rank != 4 or 3 not in poly.faces:
        raise RankError("cell adjacency needs a rank-4 polytope with cells")
    cells = poly.faces[3]
    by_vertex: dict[int, set[int]] = {}
    for ci, cell in enumerate(cells):
        for v in cell:
            by_vertex.setdefault(v, set()).add(ci)
    nbrs = [set() for _ in cells]
    for face in poly.faces[2]:
        owners = set.intersection(*(by_vertex.get(v, set()) for v in face))
        owners = sorted(owners)
        for i in owners:
            for j in owners:
                if i != j:
                    nbrs[i].add(j)
    return [sorted(s) for s in nbrs]
