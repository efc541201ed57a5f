"""Constructibility: classify edges against the catalog, certify or refute.

An edge vector ``v`` fits the system when it is parallel to a catalog line
``d`` and ``v = rho * d`` with ``rho = q * phi**k``.  All edges of one model
must share the rational factor ``q`` once a global scale is divided out;
the scale is taken from the largest group of mutually compatible edges and
stored in the certificate as ``reference`` so every verdict can be replayed.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .. import _kernels
from ..golden import ONE, PHI, PHI_FLOAT, ZERO, GoldenScalar, canonical_hash, cross, dot, golden, norm2
from ..golden import rational_sqrt, solve_linear, transpose
from .catalog import COLORS, StrutCatalog, default_catalog
from .model import Strut, ZomeModel

__all__ = [
    "REASONS",
    "Classification",
    "Offense",
    "Certificate",
    "SkeletonError",
    "PhiPowerBoundError",
    "classify_vector",
    "phi_power_residue",
    "check_constructible",
    "replay_offense",
    "align_to_catalog",
    "apply_transform",
    "AdvisoryReport",
    "advisory_check",
]

REASONS = ("no-parallel-line", "ratio-not-phi-power", "mixed-scale")
RESIDUE_BOUND = 64
_PHI_INV = PHI - 1


class SkeletonError(ValueError):
    """Input a certificate cannot be issued for (float coordinates, no edges)."""


class PhiPowerBoundError(ArithmeticError):
    """The phi-exponent would lie beyond the search bound."""


@dataclass(frozen=True)
class Classification:
    color: str
    line: int
    rho: GoldenScalar  # v = rho * rep, rho > 0
    sign: int  # +1 when v points along rep, -1 against it


def classify_vector(v, catalog: StrutCatalog | None = None) -> Classification | None:
    """The catalog line parallel to ``v`` and the positive multiplier, if any."""
    cat = catalog or default_catalog()
    v = tuple(golden(x) for x in v)
    if not any(v):
        raise ValueError("zero vector")
    fv = np.array([[float(x) for x in v]])
    idx, _ = _kernels.best_lines(fv, cat.float_units)
    line = cat.lines[int(idx[0])]
    if any(cross(v, line.rep)):
        return None
    rho = dot(v, line.rep) / norm2(line.rep)
    sign = 1
    if rho.sign() < 0:
        rho, sign = -rho, -1
    return Classification(line.color, line.id, rho, sign)


def _is_square_norm(x: GoldenScalar) -> bool:
    return rational_sqrt(abs(x.norm())) is not None


def phi_power_residue(rho, bound: int = RESIDUE_BOUND) -> tuple[int, Fraction] | None:
    """``(k, q)`` with ``rho = q * phi**k`` and rational ``q > 0``, else None.

    Walks ``rho * phi**-j`` and ``rho * phi**j`` for ``j = 0..bound`` until
    the phi-coefficient vanishes.  The norm of ``q * phi**k`` is ``+-q**2``,
    so anything else is rejected up front; a candidate whose float exponent
    estimate lies past ``bound`` raises :class:`PhiPowerBoundError`.
    """
    rho = golden(rho)
    if rho.sign() <= 0:
        raise ValueError("phi_power_residue needs rho > 0")
    if not _is_square_norm(rho):
        return None
    down = up = rho
    for j in range(bound + 1):
        if down.b == 0:
            return j, down.a
        if up.b == 0:
            return -j, up.a
        down = down * _PHI_INV
        up = up * PHI
    q = math.sqrt(abs(float(rho.norm())))
    est = math.log(float(rho) / q, PHI_FLOAT) if q else math.inf
    if abs(est) > bound:
        raise PhiPowerBoundError(f"phi exponent near {est:.1f} exceeds the search bound {bound}")
    return None


@dataclass
class Offense:
    edge: int
    vector: tuple
    reason: str
    line: int | None = None
    detail: str = ""


@dataclass
class Certificate:
    """Verdict plus either the model or the offending edges.

    ``reference`` is the multiplier of the reference edge (the global scale
    before the phi-power shift); reasons of offending edges are relative to
    it.  ``transform`` records the exact similarity applied beforehand, if
    any.
    """

    verdict: str  # "constructible" | "not"
    model: ZomeModel | None = None
    offending: list[Offense] = field(default_factory=list)
    reference: GoldenScalar | None = None
    spans: dict[str, int] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    transform: tuple | None = None
    edges_checked: int = 0

    @property
    def constructible(self) -> bool:
        return self.verdict == "constructible"

    def replay(self, catalog: StrutCatalog | None = None) -> list[bool]:
        """Re-derive each offense's reason from its stored vector."""
        return [replay_offense(o.vector, self.reference, catalog) == o.reason for o in self.offending]


def replay_offense(vector, reference: GoldenScalar | None, catalog: StrutCatalog | None = None) -> str | None:
    """The reason an edge vector fails relative to ``reference`` (None if it fits)."""
    c = classify_vector(vector, catalog)
    if c is None:
        return "no-parallel-line"
    if reference is None:
        return None
    res = phi_power_residue(c.rho / reference)
    if res is None:
        return "ratio-not-phi-power"
    if res[1] != 1:
        return "mixed-scale"
    return None


def _sign_normalize(v):
    for x in v:
        if x:
            return v if x.sign() > 0 else tuple(-y for y in v)
    return v


def _exact_vertices(vertices):
    if isinstance(vertices, np.ndarray) and vertices.dtype != object:
        raise SkeletonError("float skeletons cannot be certified; use advisory_check")
    out = []
    for v in vertices:
        if any(isinstance(x, float) for x in v):
            raise SkeletonError("float skeletons cannot be certified; use advisory_check")
        out.append(tuple(golden(x) for x in v))
    return out


def check_constructible(vertices, edges, catalog: StrutCatalog | None = None, size_offset: int = 0) -> Certificate:
    """Decide whether the exact skeleton is a Zome model.

    On success the certificate carries a :class:`ZomeModel` whose sizes are
    shifted so the smallest used size is ``1 + size_offset``.  Zero-length
    edges are rejected; merge coincident vertices first (see ``build_model``).
    """
    cat = catalog or default_catalog()
    verts = _exact_vertices(vertices)
    edges = [tuple(int(i) for i in e) for e in edges]
    if not edges:
        raise SkeletonError("empty edge set")
    vecs = [tuple(y - x for x, y in zip(verts[a], verts[b])) for a, b in edges]
    if any(not any(v) for v in vecs):
        raise SkeletonError("zero-length edge; merge coincident vertices first")

    # classify each distinct direction once
    cache: dict[tuple, Classification | None] = {}
    keys = []
    for v in vecs:
        key = canonical_hash(_sign_normalize(v))
        keys.append(key)
        if key not in cache:
            cache[key] = classify_vector(v, cat)
    classes = [cache[k] for k in keys]

    offending = [Offense(i, vecs[i], "no-parallel-line") for i, c in enumerate(classes) if c is None]

    # group distinct multipliers into classes differing by phi powers
    rhos = sorted({c.rho for c in classes if c is not None}, key=canonical_hash)
    groups: list[list[GoldenScalar]] = []
    for r in rhos:
        for g in groups:
            res = phi_power_residue(r / g[0])
            if res is not None and res[1] == 1:
                g.append(r)
                break
        else:
            groups.append([r])
    weight = Counter(c.rho for c in classes if c is not None)
    reference = None
    if groups:
        best = max(groups, key=lambda g: (sum(weight[r] for r in g), -groups.index(g)))
        reference = min(best, key=lambda r: (float(r), canonical_hash(r)))

    exps: list[int | None] = [None] * len(edges)
    for i, c in enumerate(classes):
        if c is None:
            continue
        res = phi_power_residue(c.rho / reference)
        if res is None:
            offending.append(Offense(i, vecs[i], "ratio-not-phi-power", c.line))
        elif res[1] != 1:
            offending.append(Offense(i, vecs[i], "mixed-scale", c.line, f"rational factor {res[1]}"))
        else:
            exps[i] = res[0]
    offending.sort(key=lambda o: o.edge)
    if offending:
        return Certificate("not", None, offending, reference, edges_checked=len(edges))

    kmin = min(exps)
    struts = []
    spans: dict[str, int] = {}
    per_color: dict[str, list[int]] = {}
    for (a, b), c, k in zip(edges, classes, exps):
        size = k - kmin + 1 + size_offset
        struts.append(Strut(min(a, b), max(a, b), c.color, c.line, size))
        per_color.setdefault(c.color, []).append(size)
    warn = []
    for color in COLORS:
        if color in per_color:
            sizes = per_color[color]
            spans[color] = max(sizes) - min(sizes)
            if spans[color] > 2:
                warn.append(f"{color} struts span {spans[color] + 1} sizes; kits stock 3")
    warn += _overlap_warnings(verts, struts, cat)
    scale = reference * PHI ** kmin if kmin >= 0 else reference * _PHI_INV ** (-kmin)
    prov = {"scale": str(scale), "shift": 1 + size_offset, "reference": str(reference)}
    model = ZomeModel(list(verts), struts, provenance=prov)
    return Certificate("constructible", model, [], reference, spans, warn, edges_checked=len(edges))


def _overlap_warnings(verts, struts: list[Strut], cat: StrutCatalog) -> list[str]:
    """Collinear struts that share more than an endpoint."""
    fv = np.array([[float(x) for x in v] for v in verts]) if verts else np.zeros((0, 3))
    groups: dict[tuple, list[int]] = {}
    for i, s in enumerate(struts):
        u = cat.float_units[s.line]
        off = np.cross(fv[s.a], u)
        groups.setdefault((s.line,) + tuple(np.round(off, 6)), []).append(i)
    out = []
    for ids in groups.values():
        if len(ids) < 2:
            continue
        rep = cat.lines[struts[ids[0]].line].rep
        exact: dict[tuple, list[tuple]] = {}
        for i in ids:
            s = struts[i]
            key = canonical_hash(cross(verts[s.a], rep))
            ta, tb = dot(verts[s.a], rep), dot(verts[s.b], rep)
            exact.setdefault(key, []).append((min(ta, tb), max(ta, tb), i))
        for segs in exact.values():
            segs.sort(key=lambda t: (float(t[0]), float(t[1])))
            for (s0, e0, i0), (s1, e1, i1) in zip(segs, segs[1:]):
                if s1 < e0:
                    out.append(f"struts {i0} and {i1} overlap along line {struts[i0].line}")
    return out


# -- alignment ---------------------------------------------------------------


def apply_transform(M, vertices) -> list[tuple]:
    return [tuple(dot(row, v) for row in M) for v in vertices]


def _distinct_directions(vecs):
    seen = {}
    for v in vecs:
        if any(v):
            seen.setdefault(canonical_hash(_sign_normalize(v)), _sign_normalize(v))
    return [seen[k] for k in sorted(seen)]


def align_to_catalog(vertices, edges, catalog: StrutCatalog | None = None):
    """Exact similarity ``M`` putting every edge on a catalog line, or None.

    Two independent edges ``u, v`` must land on lines ``d1, d2`` at the same
    angle; the map is then fixed by ``u -> d1``, ``v -> b d2`` and
    ``u x v -> +-c (d1 x d2)``, which is exact only when ``b`` and ``c`` are
    square roots in Q(phi).  Every such candidate is tried, so ``None``
    means no similarity over Q(phi) of this shape exists.
    """
    cat = catalog or default_catalog()
    verts = _exact_vertices(vertices)
    vecs = _distinct_directions([tuple(y - x for x, y in zip(verts[a], verts[b])) for a, b in edges])
    if not vecs:
        return None
    F = np.array([[float(x) for x in v] for v in vecs])
    Fu = F / np.linalg.norm(F, axis=1)[:, None]
    _, cos = _kernels.best_lines(F, cat.float_units)
    eye = tuple(tuple(ONE if i == j else ZERO for j in range(3)) for i in range(3))
    if np.all(cos > 1 - 1e-12) and _exact_fit(eye, verts, edges, cat):
        return eye
    j = next((j for j in range(1, len(vecs)) if abs(Fu[0].dot(Fu[j])) < 1 - 1e-9), None)
    if j is None:
        # a single direction: searching frames for it is not supported
        return None
    u, v = vecs[0], vecs[j]
    lines = cat.lines
    U = cat.float_units
    nu = norm2(u)
    w = cross(u, v)
    nv, nw = norm2(v), norm2(w)
    target = float(Fu[0].dot(Fu[j]))
    Uinv = _inverse_columns(u, v, w)
    for d1, d2 in itertools.product(lines, lines):
        if d1.id == d2.id:
            continue
        c12 = float(U[d1.id].dot(U[d2.id]))
        for s in (1, -1):
            if abs(s * c12 - target) > 1e-9:
                continue
            e2 = d2.rep if s > 0 else tuple(-x for x in d2.rep)
            n1, n2 = norm2(d1.rep), norm2(e2)
            b = (n1 * nv / (nu * n2)).sqrt()
            if b is None:
                continue
            e3 = cross(d1.rep, e2)
            c = (n1 * nw / (nu * norm2(e3))).sqrt()
            if c is None:
                continue
            for t in (1, -1):
                cols = (d1.rep, tuple(b * x for x in e2), tuple(t * c * x for x in e3))
                M = _compose(cols, Uinv)
                if _prefilter(M, F, U) and _exact_fit(M, verts, edges, cat):
                    return M
    return None


def _inverse_columns(u, v, w):
    """Inverse of the matrix with columns u, v, w."""
    A = transpose((u, v, w))
    cols = []
    for i in range(3):
        e = tuple(ONE if k == i else ZERO for k in range(3))
        cols.append(solve_linear(A, e))
    return transpose(cols)


def _compose(cols, Uinv):
    A = transpose(cols)
    return tuple(tuple(sum((A[i][k] * Uinv[k][j] for k in range(3)), ZERO) for j in range(3)) for i in range(3))


def _prefilter(M, F, U) -> bool:
    Mf = np.array([[float(x) for x in row] for row in M])
    _, cos = _kernels.best_lines(F @ Mf.T, U)
    return bool(np.all(cos > 1 - 1e-9))


def _exact_fit(M, verts, edges, cat) -> bool:
    moved = apply_transform(M, verts)
    cert = check_constructible(moved, edges, cat)
    return not any(o.reason == "no-parallel-line" for o in cert.offending)


# -- advisory float check ----------------------------------------------------


@dataclass
class AdvisoryReport:
    """Float best-effort check.  NOT a certificate: tolerances can mislead."""

    plausible: bool
    colors: list[str | None]
    sizes: list[int | None]
    failures: list[int]
    tolerance: float
    certifying: bool = False


def advisory_check(vertices, edges, catalog: StrutCatalog | None = None, tol: float = 1e-9) -> AdvisoryReport:
    cat = catalog or default_catalog()
    X = np.asarray(vertices, dtype=float)
    E = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    V = X[E[:, 1]] - X[E[:, 0]]
    lens = np.linalg.norm(V, axis=1)
    idx, cos = _kernels.best_lines(V, cat.float_units)
    repn = np.array([math.sqrt(float(cat.norm2[cat.lines[i].color])) for i in idx])
    rho = lens / repn
    ok = cos > 1 - tol
    colors = [cat.lines[i].color if good else None for i, good in zip(idx, ok)]
    sizes: list[int | None] = [None] * len(E)
    failures = [i for i in range(len(E)) if not ok[i]]
    if ok.any():
        logs = np.log(rho[ok]) / math.log(PHI_FLOAT)
        # choose the reference class that makes the most exponents integral
        best_ref, best_hits = None, -1
        for ref in np.unique(np.round(logs % 1.0, 6)):
            hits = int(np.sum(np.abs(((logs - ref + 0.5) % 1.0) - 0.5) < 1e-6))
            if hits > best_hits:
                best_ref, best_hits = ref, hits
        k = np.round(logs - best_ref)
        good = np.abs(logs - best_ref - k) < 1e-6
        kmin = int(k[good].min()) if good.any() else 0
        for pos, i in enumerate(np.flatnonzero(ok)):
            if good[pos]:
                sizes[i] = int(k[pos]) - kmin + 1
            else:
                failures.append(int(i))
    failures.sort()
    return AdvisoryReport(not failures, colors, sizes, failures, tol)
