"""Golden-integer lattice encoding of exact vectors.

A batch of exact vectors is stored as integer numerators ``num`` of shape
``(n, d, 2)`` over one positive common denominator ``den``: coordinate
``(i, j)`` equals ``(num[i, j, 0] + num[i, j, 1] * phi) / den``.  Arrays use
int64 when the values fit and Python-int object arrays otherwise.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .golden import GoldenScalar, golden

INT_LIMIT = 2**62


def _int_array(values, shape) -> np.ndarray:
    big = any(abs(v) >= INT_LIMIT for v in values)
    arr = np.array(values, dtype=object if big else np.int64)
    return arr.reshape(shape)


def to_lattice(vectors: Sequence[Sequence]) -> tuple[np.ndarray, int]:
    """Encode exact vectors (or a matrix, row by row) as ``(num, den)``."""
    rows = [[golden(x) for x in v] for v in vectors]
    n = len(rows)
    d = len(rows[0]) if n else 0
    den = 1
    for row in rows:
        for x in row:
            den = math.lcm(den, x.a.denominator, x.b.denominator)
    flat = []
    for row in rows:
        for x in row:
            flat.append(int(x.a * den))
            flat.append(int(x.b * den))
    return _int_array(flat, (n, d, 2)), den


def from_lattice(num: np.ndarray, den: int) -> list[tuple[GoldenScalar, ...]]:
    out = []
    for row in num.tolist():
        out.append(tuple(GoldenScalar(Fraction(a, den), Fraction(b, den)) for a, b in row))
    return out


def row_key(row: np.ndarray) -> bytes | tuple:
    if row.dtype == object:
        return tuple(int(v) for v in row.ravel())
    return row.tobytes()


def as_object(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return arr
    out = np.empty(arr.shape, dtype=object)
    out[...] = [int(v) for v in arr.ravel()]
    return out.reshape(arr.shape)


def maybe_int64(arr: np.ndarray) -> np.ndarray:
    if arr.dtype != object:
        return arr
    vals = arr.ravel()
    if all(abs(int(v)) < INT_LIMIT for v in vals):
        return arr.astype(np.int64)
    return arr


def apply(M_num: np.ndarray, M_den: int, X_num: np.ndarray) -> np.ndarray | None:
    """Numerators of ``(M_num / M_den) @ (X_num / den)`` over the same ``den``.

    Returns ``None`` when the result does not stay on the lattice, i.e. some
    numerator is not divisible by ``M_den``.
    """
    if _kernels.fits_int64(M_num, X_num):
        Y = _kernels.golden_matvec(M_num, X_num)
    else:
        Y = _kernels.golden_matvec(as_object(M_num), as_object(X_num))
    if M_den != 1:
        if Y.dtype == object:
            if any(int(v) % M_den for v in Y.ravel()):
                return None
        elif np.any(Y % M_den):
            return None
        Y = Y // M_den
    return Y


def matvec(M_num: np.ndarray, X_num: np.ndarray) -> np.ndarray:
    """Raw numerator product ``M_num @ X_num`` (denominators multiply)."""
    if _kernels.fits_int64(M_num, X_num):
        return _kernels.golden_matvec(M_num, X_num)
    return maybe_int64(_kernels.golden_matvec(as_object(M_num), as_object(X_num)))


def reduce(num: np.ndarray, den: int) -> tuple[np.ndarray, int]:
    """Divide out the common factor of all numerators and the denominator."""
    g = den
    for v in num.ravel().tolist():
        g = math.gcd(g, int(v))
        if g == 1:
            return num, den
    if g > 1:
        num = maybe_int64(num // g if num.dtype != object else as_object(num) // g)
        den //= g
    return num, den


def scale(X_num: np.ndarray, factor: int) -> np.ndarray:
    if X_num.dtype != object:
        bound = int(np.abs(X_num).max()) if X_num.size else 0
        if bound * factor < INT_LIMIT:
            return X_num * factor
        X_num = as_object(X_num)
    return X_num * factor


def to_float(num: np.ndarray, den: int) -> np.ndarray:
    from .golden import PHI_FLOAT

    a = num[..., 0].astype(float)
    b = num[..., 1].astype(float)
    return (a + b * PHI_FLOAT) / den
