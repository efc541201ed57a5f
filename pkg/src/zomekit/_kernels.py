"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Set ``ZOMEKIT_NUMBA=0`` to force the numpy implementations.  Both paths
compute the same results; the benchmark in ``benchmarks/`` compares them.
Object-dtype (arbitrary precision) arrays always take the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def decorator(func):
            return func

        if args and callable(args[0]):
            return args[0]
        return decorator


def _env_flag() -> bool:
    return os.environ.get("ZOMEKIT_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


USE_NUMBA = _HAVE_NUMBA and _env_flag()

# 3 * d * max|M| * max|X| must stay below this for int64 golden products
INT64_SAFE = 2**62


# -- golden matrix times a batch of golden vectors ---------------------------
# Arrays carry a trailing axis of length 2: [..., 0] rational part, [..., 1]
# phi part.  (a + b phi)(c + d phi) = (ac + bd) + (ad + bc + bd) phi.


@njit(cache=True)
def _golden_matvec_nb(M, X):
    n = X.shape[0]
    dout = M.shape[0]
    din = M.shape[1]
    Y = np.zeros((n, dout, 2), dtype=np.int64)
    for k in range(n):
        for i in range(dout):
            sa = 0
            sb = 0
            for j in range(din):
                a = M[i, j, 0]
                b = M[i, j, 1]
                c = X[k, j, 0]
                d = X[k, j, 1]
                bd = b * d
                sa += a * c + bd
                sb += a * d + b * c + bd
            Y[k, i, 0] = sa
            Y[k, i, 1] = sb
    return Y


def _golden_matvec_np(M, X):
    Ma, Mb = M[..., 0], M[..., 1]
    Xa, Xb = X[..., 0], X[..., 1]
    bd = Xb @ Mb.T
    ya = Xa @ Ma.T + bd
    yb = Xb @ Ma.T + Xa @ Mb.T + bd
    return np.stack([ya, yb], axis=-1)


def golden_matvec(M: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Apply golden-integer matrix ``M`` (dout, din, 2) to rows of ``X`` (n, din, 2)."""
    if USE_NUMBA and M.dtype == np.int64 and X.dtype == np.int64:
        return _golden_matvec_nb(M, X)
    return _golden_matvec_np(M, X)


def fits_int64(M: np.ndarray, X: np.ndarray) -> bool:
    if M.dtype == object or X.dtype == object:
        return False
    mm = int(np.abs(M).max()) if M.size else 0
    mx = int(np.abs(X).max()) if X.size else 0
    return 3 * M.shape[1] * mm * mx < INT64_SAFE


# -- symmetric eigensolver (cyclic Jacobi) -----------------------------------


@njit(cache=True)
def _jacobi_nb(A, tol, max_sweeps):
    n = A.shape[0]
    A = A.copy()
    V = np.eye(n)
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += A[p, q] * A[p, q]
        if np.sqrt(off) < tol:
            break
        for p in range(n):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * akq
                    A[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = s * apk + c * aqk
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * vkq
                    V[k, q] = s * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = A[i, i]
    return w, V


def _jacobi_np(A, tol, max_sweeps):
    A = np.array(A, dtype=float, copy=True)
    n = A.shape[0]
    V = np.eye(n)
    for _ in range(max_sweeps):
        if np.sqrt(np.sum(np.triu(A, 1) ** 2)) < tol:
            break
        for p in range(n):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = 1.0 if theta == 0.0 else np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                colp, colq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp, rowq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    return np.diag(A).copy(), V


def jacobi_eigh(A: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and column eigenvectors of a symmetric matrix."""
    A = np.ascontiguousarray(A, dtype=float)
    if USE_NUMBA:
        w, V = _jacobi_nb(A, tol, max_sweeps)
    else:
        w, V = _jacobi_np(A, tol, max_sweeps)
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


# -- nearest-point matching --------------------------------------------------


@njit(cache=True)
def _max_nearest_nb(A, B):
    worst = 0.0
    for i in range(A.shape[0]):
        best = np.inf
        for j in range(B.shape[0]):
            s = 0.0
            for k in range(A.shape[1]):
                t = A[i, k] - B[j, k]
                s += t * t
            if s < best:
                best = s
        if best > worst:
            worst = best
    return np.sqrt(worst)


def _max_nearest_np(A, B, chunk=512):
    worst = 0.0
    for start in range(0, A.shape[0], chunk):
        block = A[start : start + chunk]
        d2 = ((block[:, None, :] - B[None, :, :]) ** 2).sum(-1)
        worst = max(worst, float(d2.min(axis=1).max()))
    return float(np.sqrt(worst))


def max_nearest_distance(A: np.ndarray, B: np.ndarray) -> float:
    """``max_a min_b |a - b|`` over rows of ``A`` and ``B``."""
    A = np.ascontiguousarray(A, dtype=float)
    B = np.ascontiguousarray(B, dtype=float)
    if A.shape[0] == 0:
        return 0.0
    if USE_NUMBA:
        return float(_max_nearest_nb(A, B))
    return _max_nearest_np(A, B)


# -- direction matching against a line catalog -------------------------------


@njit(cache=True)
def _best_lines_nb(E, L):
    n = E.shape[0]
    idx = np.empty(n, dtype=np.int64)
    val = np.empty(n)
    for i in range(n):
        nrm = np.sqrt(E[i, 0] ** 2 + E[i, 1] ** 2 + E[i, 2] ** 2)
        best = -1.0
        bj = -1
        for j in range(L.shape[0]):
            c = abs(E[i, 0] * L[j, 0] + E[i, 1] * L[j, 1] + E[i, 2] * L[j, 2]) / nrm
            if c > best:
                best = c
                bj = j
        idx[i] = bj
        val[i] = best
    return idx, val


def _best_lines_np(E, L):
    nrm = np.linalg.norm(E, axis=1)
    cos = np.abs(E @ L.T) / nrm[:, None]
    idx = cos.argmax(axis=1)
    return idx.astype(np.int64), cos[np.arange(len(E)), idx]


def best_lines(E: np.ndarray, L: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For each nonzero row of ``E`` the unit line in ``L`` with largest |cos|."""
    E = np.ascontiguousarray(E, dtype=float)
    L = np.ascontiguousarray(L, dtype=float)
    if E.shape[0] == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    if USE_NUMBA:
        return _best_lines_nb(E, L)
    return _best_lines_np(E, L)


def set_backend(use_numba: bool) -> None:
    """Switch kernels at runtime (used by tests and the benchmark)."""
    global USE_NUMBA
    USE_NUMBA = bool(use_numba) and _HAVE_NUMBA


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
