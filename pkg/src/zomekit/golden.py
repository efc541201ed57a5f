"""Exact arithmetic in the golden field Q(phi), phi^2 = phi + 1.

Elements are stored as ``a + b*phi`` with ``a`` and ``b`` reduced
:class:`fractions.Fraction` values, so equality and hashing are structural.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence, Union

__all__ = [
    "PHI_FLOAT",
    "GoldenScalar",
    "GoldenZeroDivisionError",
    "SingularMatrixError",
    "ZERO",
    "ONE",
    "PHI",
    "golden",
    "canonical_hash",
    "dot",
    "norm2",
    "vadd",
    "vsub",
    "vscale",
    "matvec",
    "matmul",
    "transpose",
    "identity",
    "mat_equal",
    "solve_linear",
    "rank",
    "cross",
    "format_vector",
    "parse_vector",
    "rational_sqrt",
]

PHI_FLOAT = (1.0 + math.sqrt(5.0)) / 2.0

Number = Union[int, Fraction, "GoldenScalar"]


class GoldenZeroDivisionError(ZeroDivisionError):
    """Raised when inverting the zero element of Q(phi)."""


class SingularMatrixError(ArithmeticError):
    """Raised by :func:`solve_linear` when the system is singular."""

    def __init__(self, rank: int, size: int):
        super().__init__(f"singular matrix: rank {rank} < {size}")
        self.rank = rank
        self.size = size


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


@total_ordering
class GoldenScalar:
    """The number ``a + b*phi`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))

    def __setattr__(self, name, value):
        raise AttributeError("GoldenScalar is immutable")

    def __reduce__(self):
        return (GoldenScalar, (self.a, self.b))

    @classmethod
    def coerce(cls, x: Number) -> GoldenScalar:
        if isinstance(x, GoldenScalar):
            return x
        return cls(x, 0)

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GoldenScalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            return GoldenScalar(self.a + other, self.b)
        return GoldenScalar(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return GoldenScalar(-self.a, -self.b)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, GoldenScalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            return GoldenScalar(self.a - other, self.b)
        return GoldenScalar(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GoldenScalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            return GoldenScalar(self.a * other, self.b * other)
        a, b, c, d = self.a, self.b, other.a, other.b
        bd = b * d
        return GoldenScalar(a * c + bd, a * d + b * c + bd)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm ``x * conj(x) = a^2 + ab - b^2``."""
        a, b = self.a, self.b
        return a * a + a * b - b * b

    def conjugate(self) -> GoldenScalar:
        """Galois conjugate, phi -> 1 - phi."""
        return GoldenScalar(self.a + self.b, -self.b)

    def inv(self) -> GoldenScalar:
        n = self.norm()
        if n == 0:
            raise GoldenZeroDivisionError("inverse of zero in Q(phi)")
        return GoldenScalar((self.a + self.b) / n, -self.b / n)

    def __truediv__(self, other):
        if not isinstance(other, GoldenScalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            if other == 0:
                raise GoldenZeroDivisionError("division by zero in Q(phi)")
            return GoldenScalar(self.a / other, self.b / other)
        return self * other.inv()

    def __rtruediv__(self, other):
        return GoldenScalar.coerce(other) * self.inv()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- order ------------------------------------------------------------
    def sign(self) -> int:
        """Exact sign of the real number ``a + b*(1 + sqrt 5)/2``.

        Writes the value as ``(u + v*sqrt5)/2`` with ``u = 2a + b``, ``v = b``
        and compares ``u^2`` with ``5 v^2`` when the signs disagree.
        """
        u = 2 * self.a + self.b
        v = self.b
        su = (u > 0) - (u < 0)
        sv = (v > 0) - (v < 0)
        if su >= 0 and sv >= 0:
            return 1 if (su or sv) else 0
        if su <= 0 and sv <= 0:
            return -1
        big = u * u - 5 * v * v
        if su > 0:
            return 1 if big > 0 else -1
        return 1 if big < 0 else -1

    def __eq__(self, other):
        if isinstance(other, GoldenScalar):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __lt__(self, other):
        if not isinstance(other, (GoldenScalar, int, Fraction)):
            return NotImplemented
        return (self - other).sign() < 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.a) + float(self.b) * PHI_FLOAT

    def is_rational(self) -> bool:
        return self.b == 0

    # -- text -------------------------------------------------------------
    def __str__(self):
        if self.b == 0:
            return str(self.a)
        bs = {1: "phi", -1: "-phi"}.get(self.b, f"{self.b}*phi")
        if self.a == 0:
            return bs
        return f"{self.a}{bs}" if self.b < 0 else f"{self.a}+{bs}"

    def __repr__(self):
        return f"GoldenScalar({self})"

    _TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(\*?phi)?")

    @classmethod
    def parse(cls, text: str) -> GoldenScalar:
        """Inverse of ``str``; accepts ``"3"``, ``"phi"``, ``"-1/2+3/4*phi"``, ``"-phi+1"``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty golden scalar")
        a = b = Fraction(0)
        pos = 0
        while pos < len(s):
            m = cls._TERM.match(s, pos)
            if not m or m.end() == pos or not (m.group(2) or m.group(3)):
                raise ValueError(f"cannot parse golden scalar {text!r}")
            if m.group(3) and m.group(3).startswith("*") and not m.group(2):
                raise ValueError(f"cannot parse golden scalar {text!r}")
            # every term after the first needs an explicit sign
            if pos and not m.group(1):
                raise ValueError(f"cannot parse golden scalar {text!r}")
            c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            if m.group(1) == "-":
                c = -c
            if m.group(3):
                b += c
            else:
                a += c
            pos = m.end()
        return cls(a, b)

    def sqrt(self) -> GoldenScalar | None:
        """Positive square root inside Q(phi), or ``None`` if there is none."""
        s = self.sign()
        if s < 0:
            return None
        if s == 0:
            return ZERO
        # x = A + B*sqrt5 with A = a + b/2, B = b/2
        A = self.a + self.b / 2
        B = self.b / 2
        candidates = []
        if B == 0:
            r = rational_sqrt(A)
            if r is not None:
                candidates.append((r, Fraction(0)))
            r = rational_sqrt(A / 5)
            if r is not None:
                candidates.append((Fraction(0), r))
        else:
            n = rational_sqrt(A * A - 5 * B * B)
            if n is not None:
                for c2 in ((A + n) / 2, (A - n) / 2):
                    c = rational_sqrt(c2)
                    if c is not None and c != 0:
                        candidates.append((c, B / (2 * c)))
        for c, d in candidates:
            # c + d*sqrt5 = (c - d) + 2d*phi
            root = GoldenScalar(c - d, 2 * d)
            if root.sign() < 0:
                root = -root
            if root * root == self:
                return root
        return None


def rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


ZERO = GoldenScalar(0, 0)
ONE = GoldenScalar(1, 0)
PHI = GoldenScalar(0, 1)


def golden(x) -> GoldenScalar:
    """Coerce ints, Fractions, strings and GoldenScalars."""
    if isinstance(x, GoldenScalar):
        return x
    if isinstance(x, str):
        return GoldenScalar.parse(x)
    return GoldenScalar(x, 0)


def canonical_hash(x) -> tuple:
    """Deterministic hash token for a scalar or a vector of scalars.

    Tokens are plain integer tuples, so they are stable across interpreter
    runs regardless of ``PYTHONHASHSEED``.
    """
    if isinstance(x, GoldenScalar):
        return (x.a.numerator, x.a.denominator, x.b.numerator, x.b.denominator)
    return tuple(canonical_hash(golden(c)) for c in x)


# -- vectors and matrices (tuples of GoldenScalar) ---------------------------

Vector = Sequence[GoldenScalar]
Matrix = Sequence[Sequence[GoldenScalar]]


def dot(u: Vector, v: Vector) -> GoldenScalar:
    total = ZERO
    for x, y in zip(u, v):
        if x and y:
            total = total + x * y
    return total


def norm2(u: Vector) -> GoldenScalar:
    return dot(u, u)


def vadd(u: Vector, v: Vector) -> tuple:
    return tuple(x + y for x, y in zip(u, v))


def vsub(u: Vector, v: Vector) -> tuple:
    return tuple(x - y for x, y in zip(u, v))


def vscale(c, u: Vector) -> tuple:
    c = golden(c)
    return tuple(c * x for x in u)


def cross(u: Vector, v: Vector) -> tuple:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def matvec(A: Matrix, x: Vector) -> tuple:
    return tuple(dot(row, x) for row in A)


def transpose(A: Matrix) -> tuple:
    return tuple(tuple(col) for col in zip(*A))


def matmul(A: Matrix, B: Matrix) -> tuple:
    Bt = transpose(B)
    return tuple(tuple(dot(row, col) for col in Bt) for row in A)


def identity(n: int) -> tuple:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def mat_equal(A: Matrix, B: Matrix) -> bool:
    return all(tuple(r) == tuple(s) for r, s in zip(A, B)) and len(A) == len(B)


def _eliminate(rows: list[list[GoldenScalar]], ncols: int) -> tuple[list[list[GoldenScalar]], list[int]]:
    """Reduced row echelon form in place; returns rows and pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inv()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rank(rows: Iterable[Vector]) -> int:
    rows = [[golden(x) for x in row] for row in rows]
    if not rows:
        return 0
    _, pivots = _eliminate(rows, len(rows[0]))
    return len(pivots)


def solve_linear(A: Matrix, b: Vector) -> tuple:
    """Solve ``A x = b`` exactly by Gauss-Jordan elimination over Q(phi)."""
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("solve_linear needs a square system")
    aug = [[golden(x) for x in row] + [golden(y)] for row, y in zip(A, b)]
    aug, pivots = _eliminate(aug, n)
    if len(pivots) < n:
        raise SingularMatrixError(len(pivots), n)
    return tuple(aug[i][n] for i in range(n))


def format_vector(v: Vector) -> list[str]:
    return [str(golden(x)) for x in v]


def parse_vector(items: Iterable[str]) -> tuple:
    return tuple(GoldenScalar.parse(s) if isinstance(s, str) else golden(s) for s in items)
