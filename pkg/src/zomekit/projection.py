"""Orthogonal, element-first, stereographic and Coxeter-plane projections."""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from . import _kernels, lattice
from .coxeter import CoxeterElementInfo
from .golden import ONE, PHI, ZERO, GoldenScalar, dot, golden, norm2
from .wythoff import ExactnessWarning, Polytope

__all__ = [
    "ProjectionBasis",
    "PlanarImage",
    "CoxeterPlane",
    "ZeroAxisError",
    "PoleError",
    "ProjectionError",
    "element_first_axis",
    "choose_face",
    "complete_basis",
    "span_rows",
    "orthogonal_project",
    "stereographic",
    "coxeter_plane_basis",
    "project_to_plane",
    "rotation_defect",
]


class ProjectionError(ValueError):
    pass


class ZeroAxisError(ProjectionError):
    """The requested face passes through the center; give an explicit axis."""


class PoleError(ProjectionError):
    pass


@dataclass
class ProjectionBasis:
    rows: list  # exact tuples or float ndarray (k, d)
    mode: str
    norm2: GoldenScalar | None = None  # common squared row norm (exact mode)
    warning: str | None = None

    @property
    def k(self) -> int:
        return len(self.rows)

    def float_rows(self) -> np.ndarray:
        if self.mode == "exact":
            return np.array([[float(x) for x in r] for r in self.rows])
        return np.asarray(self.rows, dtype=float)


@dataclass
class PlanarImage:
    points: np.ndarray  # (n, 2)
    edges: list[tuple[int, int]]
    h: int | None = None


@dataclass
class CoxeterPlane:
    basis: np.ndarray  # (2, d) orthonormal rows
    eigenvalue: float
    h: int


# -- axes --------------------------------------------------------------------


def _face_ids(poly: Polytope, rank: int, face_id: int) -> tuple[int, ...]:
    if rank == 0:
        if not 0 <= face_id < len(poly.vertices):
            raise IndexError(f"no vertex {face_id}")
        return (face_id,)
    faces = poly.faces.get(rank)
    if not faces or not 0 <= face_id < len(faces):
        raise IndexError(f"no rank-{rank} face {face_id}")
    return faces[face_id]


def element_first_axis(poly: Polytope, rank: int, face_id: int):
    """Centroid of a face (rank 0: the vertex itself)."""
    ids = _face_ids(poly, rank, face_id)
    if poly.mode == "exact":
        c = [ZERO] * poly.dim
        for i in ids:
            c = [x + y for x, y in zip(c, poly.vertices[i])]
        n = len(ids)
        c = tuple(x / n for x in c)
        if not any(c):
            raise ZeroAxisError(f"rank-{rank} face {face_id} has its centroid at the origin")
        return c
    c = np.asarray(poly.vertices, dtype=float)[list(ids)].mean(axis=0)
    if np.linalg.norm(c) < 1e-12:
        raise ZeroAxisError(f"rank-{rank} face {face_id} has its centroid at the origin")
    return c


def choose_face(poly: Polytope, rank: int) -> int:
    """Default face for element-first views.

    Prefers centroids with the most zero coordinates (axis-aligned views
    keep exact bases simple), then larger faces, then centroids along later
    axes, then the lowest id.
    """
    count = len(poly.vertices) if rank == 0 else len(poly.faces.get(rank, []))
    if count == 0:
        raise IndexError(f"polytope has no rank-{rank} faces")
    fv = poly.float_vertices()
    best = None
    for fid in range(count):
        ids = list(_face_ids(poly, rank, fid))
        c = fv[ids].mean(axis=0)
        if np.linalg.norm(c) < 1e-12:
            continue
        nz = np.flatnonzero(np.abs(c) > 1e-12)
        key = (-(poly.dim - len(nz)), -len(ids), -int(nz[-1]), fid)
        if best is None or key < best:
            best = key
    if best is None:
        raise ZeroAxisError(f"every rank-{rank} face passes through the center")
    return best[-1]


# -- bases -------------------------------------------------------------------


def _gram_schmidt(vectors, against=()):
    out = list(against)
    added = []
    for v in vectors:
        w = tuple(v)
        for r in out:
            c = dot(w, r) / norm2(r)
            if c:
                w = tuple(x - c * y for x, y in zip(w, r))
        if any(w):
            out.append(w)
            added.append(w)
    return added


_COEFFS = (ONE, ZERO, -ONE, golden(2), golden(-2), PHI, -PHI)


def _equal_norm_rows(span, target=None):
    """Orthogonal rows spanning ``span`` whose norms are square multiples of one value."""
    if len(span) == 1:
        n = norm2(span[0])
        if target is None or (target / n).sqrt() is not None:
            return [span[0]]
        return None
    k = len(span)
    # scaling a row by a golden unit or an integer keeps its norm class, so
    # the first nonzero coefficient can be fixed to 1
    for lead in range(k):
        for tail in itertools.product(_COEFFS, repeat=k - lead - 1):
            v = span[lead]
            for c, s in zip(tail, span[lead + 1 :]):
                if c:
                    v = tuple(x + c * y for x, y in zip(v, s))
            n = norm2(v)
            if target is not None and (target / n).sqrt() is None:
                continue
            rest = _gram_schmidt(span, against=[v])
            sub = _equal_norm_rows(rest, n if target is None else target)
            if sub is not None:
                return [v] + sub
    return None


_ENTRIES = (ZERO, ONE, -ONE, PHI, -PHI, PHI - 1, 1 - PHI, golden(2), golden(-2))
_SEARCH_BUDGET = 200_000


def _ambient_rows(axis, k, within=None):
    """Second search: rows with small entries taken directly in coordinates.

    Catches complements such as (1,-1,1,-1), (1,1,-1,-1), (1,-1,-1,1) for the
    axis (1,1,1,1), which the combination search over a Gram-Schmidt basis
    misses.  Candidates are sign-normalized and tried rational and short
    ones first.
    """
    d = len(axis)
    entries = _ENTRIES if d <= 4 else _ENTRIES[:5]
    fa = np.array([float(x) for x in axis])
    fw = None if within is None else np.array([[float(x) for x in r] for r in within])
    wrank = None if fw is None else np.linalg.matrix_rank(fw, tol=1e-9)
    cands = []
    for v in itertools.product(entries, repeat=d):
        nz = next((x for x in v if x != ZERO), None)
        if nz is None or nz < ZERO:
            continue
        fv = np.array([float(x) for x in v])
        if abs(fv @ fa) > 1e-9:
            continue
        if fw is not None and np.linalg.matrix_rank(np.vstack([fw, fv]), tol=1e-9) > wrank:
            continue
        if dot(v, axis) != ZERO:
            continue
        cands.append(((sum(not x.is_rational() for x in v), float(fv @ fv)), v))
    cands.sort(key=lambda t: t[0])
    vecs = [v for _, v in cands]
    norms = [norm2(v) for v in vecs]
    steps = 0

    def extend(chosen, start, target):
        nonlocal steps
        if len(chosen) == k:
            return chosen
        for i in range(start, len(vecs)):
            steps += 1
            if steps > _SEARCH_BUDGET:
                return None
            v = vecs[i]
            if target is not None and (target / norms[i]).sqrt() is None:
                continue
            if any(dot(v, c) != ZERO for c in chosen):
                continue
            found = extend(chosen + [v], i + 1, norms[i] if target is None else target)
            if found is not None:
                return found
        return None

    return extend([], 0, None)


def _float_complement(axis: np.ndarray, within: np.ndarray | None = None) -> np.ndarray:
    d = len(axis)
    basis = [axis / np.linalg.norm(axis)]
    rows = []
    starts = np.eye(d) if within is None else np.asarray(within, dtype=float)
    want = len(starts) - 1 if within is not None else d - 1
    for e in starts:
        for b in basis:
            e = e - e.dot(b) * b
        nrm = np.linalg.norm(e)
        if nrm > 1e-9:
            e = e / nrm
            basis.append(e)
            rows.append(e)
        if len(rows) == want:
            break
    return np.array(rows)


def complete_basis(axis, within=None) -> ProjectionBasis:
    """Basis of the orthogonal complement of ``axis``.

    ``within`` optionally restricts to a subspace (rows spanning it, with
    ``axis`` inside), e.g. the hyperplane holding an A_n polytope.

    Exact axes get orthogonal rows over Q(phi) rescaled to one common squared
    norm, so the projection is a similarity.  When no such rows are found
    the basis falls back to float with ``warning`` set.
    """
    if isinstance(axis, np.ndarray) and axis.dtype != object:
        if np.linalg.norm(axis) < 1e-12:
            raise ZeroAxisError("zero projection axis")
        return ProjectionBasis(_float_complement(np.asarray(axis, dtype=float), within), "float")
    axis = tuple(golden(x) for x in axis)
    if not any(axis):
        raise ZeroAxisError("zero projection axis")
    d = len(axis)
    if within is None:
        starts = [tuple(ONE if i == j else ZERO for j in range(d)) for i in range(d)]
    else:
        starts = [tuple(golden(x) for x in r) for r in within]
    span = _gram_schmidt(starts, against=[axis])
    rows = _equal_norm_rows(span)
    if rows is None:
        rows = _ambient_rows(axis, len(span), within if within is None else starts)
    if rows is not None:
        target = norm2(rows[0])
        scaled = []
        for r in rows:
            f = (target / norm2(r)).sqrt()
            scaled.append(tuple(f * x for x in r) if f != ONE else r)
        return ProjectionBasis(scaled, "exact", target)
    msg = "no equal-norm exact basis found; float basis used, Zome checks will be inexact"
    warnings.warn(msg, ExactnessWarning, stacklevel=2)
    fa = np.array([float(x) for x in axis])
    fw = None if within is None else np.array([[float(x) for x in r] for r in within])
    return ProjectionBasis(_float_complement(fa, fw), "float", None, msg)


def span_rows(poly: Polytope):
    """Vertices spanning the linear hull of ``poly`` (None when it is all of R^dim)."""
    if poly.rank >= poly.dim:
        return None
    fv = poly.float_vertices()
    picked = []
    for i in range(len(fv)):
        trial = picked + [i]
        if np.linalg.matrix_rank(fv[trial], tol=1e-9) == len(trial):
            picked = trial
            if len(picked) == poly.rank:
                break
    if poly.mode == "exact":
        return [poly.vertices[i] for i in picked]
    return fv[picked]


def identity_basis(d: int) -> ProjectionBasis:
    rows = [tuple(ONE if i == j else ZERO for j in range(d)) for i in range(d)]
    return ProjectionBasis(rows, "exact", ONE)


# -- projections -------------------------------------------------------------


def orthogonal_project(poly: Polytope, basis: ProjectionBasis, note: dict | None = None) -> Polytope:
    """Coordinates ``<x, b_i>`` for every vertex; faces carried over by id.

    With an exact equal-norm basis the image is the orthogonal projection
    scaled by ``sqrt(norm2)``; ``norm2`` is recorded in the provenance.
    Coincident images are not merged.
    """
    if basis.rows is None or len(basis.rows) == 0:
        raise ProjectionError("empty basis")
    if len(basis.rows[0]) != poly.dim:
        raise ProjectionError(f"basis dimension {len(basis.rows[0])} != polytope dimension {poly.dim}")
    prov = dict(poly.provenance)
    proj = {"basis_mode": basis.mode, "k": basis.k}
    if note:
        proj.update(note)
    if poly.mode == "exact" and basis.mode == "exact":
        Mnum, Mden = lattice.to_lattice(basis.rows)
        num, den = poly.lattice
        Y = lattice.matvec(Mnum, num)
        verts = lattice.from_lattice(Y, Mden * den)
        proj["scale2"] = str(basis.norm2)
        mode = "exact"
        out = Polytope(basis.k, poly.rank, mode, verts, poly.faces, prov, perms=poly.perms)
        out.__dict__["lattice"] = lattice.reduce(Y, Mden * den)
    else:
        B = basis.float_rows()
        verts = poly.float_vertices() @ B.T
        mode = "float"
        out = Polytope(basis.k, poly.rank, mode, verts, poly.faces, prov, perms=poly.perms)
    prov["projection"] = proj
    return out


def _slerp(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    R = np.linalg.norm(a)
    ua, ub = a / R, b / np.linalg.norm(b)
    omega = math.acos(max(-1.0, min(1.0, float(ua.dot(ub)))))
    ts = np.linspace(0.0, 1.0, m + 1)
    if omega < 1e-12:
        return np.outer(1 - ts, a) + np.outer(ts, b)
    s = math.sin(omega)
    pts = (np.sin((1 - ts) * omega)[:, None] * ua + np.sin(ts * omega)[:, None] * ub) / s
    return pts * R


def stereographic(poly: Polytope, pole="north", arc_samples: int = 0) -> Polytope:
    """Project from the circumsphere point in direction ``pole`` to R^(d-1).

    ``pole`` is ``"north"`` (last axis), ``"south"``, a vertex id, or a
    direction vector.  With ``arc_samples = m > 0`` each edge is also
    sampled at m segments along its great-circle preimage (``edge_paths``).
    """
    X = poly.float_vertices()
    d = poly.dim
    radii = np.linalg.norm(X, axis=1)
    R = float(radii.max())
    if R == 0 or np.abs(radii - R).max() > 1e-9 * R:
        raise ProjectionError("stereographic projection needs all vertices on one sphere")
    if isinstance(pole, str):
        u = np.zeros(d)
        if pole == "north":
            u[-1] = 1.0
        elif pole == "south":
            u[-1] = -1.0
        else:
            raise ProjectionError(f"unknown pole {pole!r}")
    elif isinstance(pole, (int, np.integer)):
        u = X[int(pole)] / R
    else:
        u = np.array([float(x) for x in pole])
        u = u / np.linalg.norm(u)
    heights = X @ u
    if np.any(heights > R * (1 - 1e-9)):
        raise PoleError("the pole coincides with a vertex")
    B = _float_complement(u)

    def proj(P):
        h = P @ u
        return (P @ B.T) * (R / (R - h))[:, None]

    verts = proj(X)
    paths = None
    if arc_samples and arc_samples > 0:
        paths = [proj(_slerp(X[a], X[b], arc_samples)) for a, b in poly.edges]
    prov = dict(poly.provenance)
    prov["projection"] = {"kind": "stereographic", "pole": u.tolist(), "radius": R}
    return Polytope(d - 1, poly.rank, "float", verts, poly.faces, prov, edge_paths=paths, perms=poly.perms)


def coxeter_plane_basis(info: CoxeterElementInfo, tol: float = 1e-12) -> CoxeterPlane:
    """Invariant plane on which the Coxeter element rotates by 2 pi / h.

    Top eigenspace of ``(C + C^T)/2`` below eigenvalue 1 (the eigenvalue-1
    space is the part a parabolic element fixes), found with the Jacobi
    solver.
    """
    C = info.float_matrix()
    M = 0.5 * (C + C.T)
    w, V = _kernels.jacobi_eigh(M, tol=tol)
    cand = [i for i in range(len(w)) if w[i] < 1.0 - 1e-9]
    if not cand:
        raise ProjectionError("Coxeter element has no rotation plane")
    top = w[cand[0]]
    space = [i for i in cand if abs(w[i] - top) < 1e-8]
    if len(space) != 2:
        raise ProjectionError(f"top eigenspace has dimension {len(space)}, expected 2")
    Q, _ = np.linalg.qr(V[:, space])
    return CoxeterPlane(Q.T.copy(), float(top), info.h)


def project_to_plane(poly: Polytope, basis2, h: int | None = None) -> PlanarImage:
    if isinstance(basis2, CoxeterPlane):
        h = basis2.h if h is None else h
        basis2 = basis2.basis
    B = np.asarray(basis2, dtype=float)
    if B.shape != (2, poly.dim):
        raise ProjectionError(f"plane basis must have shape (2, {poly.dim})")
    pts = poly.float_vertices() @ B.T
    return PlanarImage(pts, [tuple(e) for e in poly.edges], h)


def rotation_defect(points: np.ndarray, order: int, tol: float = 1e-6) -> float:
    """How far a planar point multiset is from invariance under rotation by 2 pi / order.

    Returns the symmetric nearest-point distance, or ``inf`` when the sets
    match but a point's multiplicity does not.
    """
    P = np.asarray(points, dtype=float)
    t = 2 * math.pi / order
    rot = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
    Q = P @ rot.T
    err = max(_kernels.max_nearest_distance(Q, P), _kernels.max_nearest_distance(P, Q))
    if err > tol:
        return err
    tree = cKDTree(P)
    mult = np.array([len(x) for x in tree.query_ball_point(P, tol)])
    _, nearest = tree.query(Q)
    if np.any(mult != mult[nearest]):
        return math.inf
    return err
