"""Breadth-first orbit enumeration under a set of generator matrices.

Exact orbits run on the golden-integer lattice (see :mod:`zomekit.lattice`)
and deduplicate by the raw numerator bytes, which is exact because every
point shares one denominator.  Float orbits deduplicate on a rounding grid.
Both record, for every generator, the permutation it induces on point ids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lattice

__all__ = ["Orbit", "OrbitCapError", "exact_orbit", "float_orbit", "DEFAULT_FLOAT_GRID"]

DEFAULT_FLOAT_GRID = 1e-8


class OrbitCapError(RuntimeError):
    """The orbit grew past the configured size cap."""

    def __init__(self, cap: int):
        super().__init__(f"orbit exceeds cap of {cap} points")
        self.cap = cap


@dataclass
class Orbit:
    mode: str  # "exact" | "float"
    points: np.ndarray  # exact: (n, d, 2) numerators; float: (n, d)
    denominator: int  # 1 for float orbits
    perms: np.ndarray  # (ngens, n): perms[g, i] = id of generator g applied to point i

    def __len__(self) -> int:
        return self.points.shape[0]

    def vectors(self):
        if self.mode == "exact":
            return lattice.from_lattice(self.points, self.denominator)
        return self.points.copy()

    def float_points(self) -> np.ndarray:
        if self.mode == "exact":
            return lattice.to_float(self.points, self.denominator)
        return self.points


class _Store:
    """Growable point array plus id lookup."""

    def __init__(self, first: np.ndarray, ngens: int, key):
        self.key = key
        self.data = np.empty((64,) + first.shape, dtype=first.dtype)
        self.data[0] = first
        self.n = 1
        self.index = {key(first): 0}
        self.perms = np.full((ngens, 64), -1, dtype=np.int64)

    def _grow(self):
        cap = self.data.shape[0] * 2
        data = np.empty((cap,) + self.data.shape[1:], dtype=self.data.dtype)
        data[: self.n] = self.data[: self.n]
        self.data = data
        perms = np.full((self.perms.shape[0], cap), -1, dtype=np.int64)
        perms[:, : self.n] = self.perms[:, : self.n]
        self.perms = perms

    def _to_object(self):
        self.data = lattice.as_object(self.data)
        self.index = {self.key(self.data[i]): i for i in range(self.n)}

    def add(self, row: np.ndarray) -> tuple[int, bool]:
        # keys must be computed at one dtype: bytes for int64, int tuples for object
        if row.dtype == object and self.data.dtype != object:
            self._to_object()
        elif self.data.dtype == object and row.dtype != object:
            row = lattice.as_object(row)
        k = self.key(row)
        got = self.index.get(k)
        if got is not None:
            return got, False
        if self.n == self.data.shape[0]:
            self._grow()
        self.data[self.n] = row
        self.index[k] = self.n
        self.n += 1
        return self.n - 1, True

    def rescale(self, factor: int):
        pts = lattice.scale(self.data[: self.n], factor)
        data = np.empty((self.data.shape[0],) + self.data.shape[1:], dtype=pts.dtype)
        if pts.dtype == object:
            data[...] = 0
        data[: self.n] = pts
        self.data = data
        self.index = {self.key(data[i]): i for i in range(self.n)}


def exact_orbit(gens: list[tuple[np.ndarray, int]], p_num: np.ndarray, p_den: int, cap: int = 10**6) -> Orbit:
    """Orbit of one lattice point under lattice-encoded generator matrices.

    ``gens`` holds ``(numerators (d, d, 2), denominator)`` pairs.  When a
    generator image leaves the current lattice, all stored points are scaled
    up by the generator's denominator and the search continues; ids already
    assigned stay valid.
    """
    store = _Store(np.asarray(p_num), len(gens), lattice.row_key)
    den = p_den
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        nxt = []
        for g, (M, Md) in enumerate(gens):
            while True:
                Y = lattice.apply(M, Md, store.data[frontier])
                if Y is not None:
                    break
                store.rescale(Md)
                den *= Md
            for r, src in enumerate(frontier):
                idx, new = store.add(Y[r])
                store.perms[g, src] = idx
                if new:
                    if store.n > cap:
                        raise OrbitCapError(cap)
                    nxt.append(idx)
        frontier = np.array(nxt, dtype=np.int64)
    pts = lattice.maybe_int64(store.data[: store.n])
    return Orbit("exact", pts, den, store.perms[:, : store.n].copy())


def float_orbit(gens: list[np.ndarray], p: np.ndarray, cap: int = 10**6, grid: float = DEFAULT_FLOAT_GRID) -> Orbit:
    """Float orbit, deduplicated on a ``grid``-spaced rounding lattice."""
    inv = 1.0 / grid

    def key(row):
        return np.rint(row * inv).astype(np.int64).tobytes()

    store = _Store(np.asarray(p, dtype=float), len(gens), key)
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        nxt = []
        for g, M in enumerate(gens):
            Y = store.data[frontier] @ M.T
            for r, src in enumerate(frontier):
                idx, new = store.add(Y[r])
                store.perms[g, src] = idx
                if new:
                    if store.n > cap:
                        raise OrbitCapError(cap)
                    nxt.append(idx)
        frontier = np.array(nxt, dtype=np.int64)
    return Orbit("float", store.data[: store.n].copy(), 1, store.perms[:, : store.n].copy())


def suborbit(perms: np.ndarray, gens: list[int], start: int = 0) -> list[int]:
    """Ids reachable from ``start`` using only the generators in ``gens``."""
    seen = {start}
    order = [start]
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for g in gens:
            w = int(perms[g, v])
            if w not in seen:
                seen.add(w)
                order.append(w)
    return sorted(seen)


def close_sets(perms: np.ndarray, seeds: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Closure of vertex-id sets under all generator permutations, sorted."""
    found = set()
    queue = []
    for s in seeds:
        t = tuple(sorted(s))
        if t not in found:
            found.add(t)
            queue.append(t)
    while queue:
        cur = queue.pop()
        arr = np.fromiter(cur, dtype=np.int64, count=len(cur))
        for g in range(perms.shape[0]):
            img = tuple(sorted(perms[g, arr].tolist()))
            if img not in found:
                found.add(img)
                queue.append(img)
    return sorted(found)
