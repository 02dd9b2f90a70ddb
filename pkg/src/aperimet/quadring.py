"""Exact arithmetic in Z[sqrt 2] and the octagonal rank-4 lattice.

Every direct-space and internal-space coordinate of a lattice point is of
the form ``(p + q*sqrt(2)) / 2`` with integers ``p, q``; membership and
equality decisions are made on those integers only.  Floats appear solely
in ``float()`` conversions used for norms and plotting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import NamedTuple, Union

import numpy as np

SQRT2 = math.sqrt(2.0)

Rational = Union[int, Fraction]


def surd_sign(p: int, q: int) -> int:
    """Exact sign of ``p + q*sqrt(2)`` for integers ``p``, ``q``."""
    if q == 0:
        return (p > 0) - (p < 0)
    if p == 0:
        return (q > 0) - (q < 0)
    if (p > 0) == (q > 0):
        return 1 if p > 0 else -1
    # opposite signs: the term with the larger square wins
    if p * p > 2 * q * q:
        return 1 if p > 0 else -1
    return 1 if q > 0 else -1


def floor_surd(a: int, b: int, d: int = 1) -> int:
    """Exact ``floor((a + b*sqrt(2)) / d)`` for integers, ``d > 0``."""
    if d <= 0:
        raise ValueError("denominator must be positive")
    if b == 0:
        return a // d
    t = math.isqrt(2 * b * b)
    # b*sqrt(2) is irrational, so it lies strictly between consecutive integers
    fb = t if b > 0 else -t - 1
    return (a + fb) // d


def _sign_rational_surd(a: Fraction, b: Fraction) -> int:
    den = a.denominator * b.denominator
    return surd_sign(int(a * den), int(b * den))


class QSqrt2:
    """Element ``a + b*sqrt(2)`` of the field Q(sqrt 2), rational ``a, b``."""

    __slots__ = ("a", "b")

    def __init__(self, a: Rational = 0, b: Rational = 0) -> None:
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def coerce(cls, x) -> QSqrt2:
        if isinstance(x, QSqrt2):
            return x
        if isinstance(x, (QuadInt, QuadHalf)):
            return x.to_field()
        if isinstance(x, (int, Fraction)):
            return cls(x, 0)
        raise TypeError(f"cannot represent {x!r} exactly in Q(sqrt 2)")

    def __repr__(self) -> str:
        return f"QSqrt2({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}*sqrt2"

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * SQRT2

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __eq__(self, other) -> bool:
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def sign(self) -> int:
        return _sign_rational_surd(self.a, self.b)

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __neg__(self) -> QSqrt2:
        return QSqrt2(-self.a, -self.b)

    def __abs__(self) -> QSqrt2:
        return -self if self.sign() < 0 else self

    def __add__(self, other) -> QSqrt2:
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other) -> QSqrt2:
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return QSqrt2(self.a - o.a, self.b - o.b)

    def __rsub__(self, other) -> QSqrt2:
        return (-self) + other

    def __mul__(self, other) -> QSqrt2:
        try:
            o = QSqrt2.coerce(other)
        except TypeError:
            return NotImplemented
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> QSqrt2:
        return QSqrt2(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - 2 * self.b * self.b

    def __truediv__(self, other) -> QSqrt2:
        o = QSqrt2.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 2)")
        num = self * o.conjugate()
        return QSqrt2(num.a / n, num.b / n)

    def __floor__(self) -> int:
        den = self.a.denominator * self.b.denominator
        return floor_surd(int(self.a * den), int(self.b * den), den)

    def is_rational_integer(self) -> bool:
        return self.b == 0 and self.a.denominator == 1


@dataclass(frozen=True, slots=True)
class QuadInt:
    """``p + q*sqrt(2)`` with integer ``p, q``."""

    p: int
    q: int

    def __add__(self, other: QuadInt) -> QuadInt:
        return QuadInt(self.p + other.p, self.q + other.q)

    def __sub__(self, other: QuadInt) -> QuadInt:
        return QuadInt(self.p - other.p, self.q - other.q)

    def __neg__(self) -> QuadInt:
        return QuadInt(-self.p, -self.q)

    def __mul__(self, other: QuadInt | int) -> QuadInt:
        if isinstance(other, int):
            return QuadInt(self.p * other, self.q * other)
        return QuadInt(self.p * other.p + 2 * self.q * other.q,
                       self.p * other.q + self.q * other.p)

    __rmul__ = __mul__

    def sign(self) -> int:
        return surd_sign(self.p, self.q)

    def conjugate(self) -> QuadInt:
        return QuadInt(self.p, -self.q)

    def __float__(self) -> float:
        return self.p + self.q * SQRT2

    def to_field(self) -> QSqrt2:
        return QSqrt2(self.p, self.q)


@dataclass(frozen=True, slots=True)
class QuadHalf:
    """``(p + q*sqrt(2)) / 2`` with integer ``p, q``."""

    p: int
    q: int

    def __add__(self, other: QuadHalf) -> QuadHalf:
        return QuadHalf(self.p + other.p, self.q + other.q)

    def __sub__(self, other: QuadHalf) -> QuadHalf:
        return QuadHalf(self.p - other.p, self.q - other.q)

    def __neg__(self) -> QuadHalf:
        return QuadHalf(-self.p, -self.q)

    def __mul__(self, other: QuadInt | int) -> QuadHalf:
        if isinstance(other, int):
            return QuadHalf(self.p * other, self.q * other)
        if isinstance(other, QuadInt):
            return QuadHalf(self.p * other.p + 2 * self.q * other.q,
                            self.p * other.q + self.q * other.p)
        return NotImplemented

    __rmul__ = __mul__

    def sign(self) -> int:
        return surd_sign(self.p, self.q)

    def __lt__(self, other: QuadHalf) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: QuadHalf) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: QuadHalf) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: QuadHalf) -> bool:
        return (self - other).sign() >= 0

    def compare_rational(self, r: Rational) -> int:
        """Exact sign of ``self - r``."""
        r = Fraction(r)
        return surd_sign(self.p * r.denominator - 2 * r.numerator, self.q * r.denominator)

    def conjugate(self) -> QuadHalf:
        return QuadHalf(self.p, -self.q)

    def __float__(self) -> float:
        return 0.5 * (self.p + self.q * SQRT2)

    def to_field(self) -> QSqrt2:
        return QSqrt2(Fraction(self.p, 2), Fraction(self.q, 2))


class LatticeVector(NamedTuple):
    """Integer coefficients with respect to the columns of the basis matrix."""

    n1: int
    n2: int
    n3: int
    n4: int

    def __add__(self, other) -> LatticeVector:  # type: ignore[override]
        return LatticeVector(self.n1 + other[0], self.n2 + other[1],
                             self.n3 + other[2], self.n4 + other[3])

    def __sub__(self, other) -> LatticeVector:
        return LatticeVector(self.n1 - other[0], self.n2 - other[1],
                             self.n3 - other[2], self.n4 - other[3])

    def __neg__(self) -> LatticeVector:
        return LatticeVector(-self.n1, -self.n2, -self.n3, -self.n4)

    def __mul__(self, k) -> LatticeVector:  # type: ignore[override]
        return LatticeVector(k * self.n1, k * self.n2, k * self.n3, k * self.n4)

    __rmul__ = __mul__


Vec2 = tuple[QuadHalf, QuadHalf]

_H1 = QuadHalf(2, 0)    # 1
_HS = QuadHalf(0, 1)    # 1/sqrt(2)
_H0 = QuadHalf(0, 0)

# columns are the basis vectors; rows 1-2 direct space, rows 3-4 internal space
BASIS_MATRIX: tuple[tuple[QuadHalf, ...], ...] = (
    (_H1, _HS, _H0, -_HS),
    (_H0, _HS, _H1, _HS),
    (_H1, -_HS, _H0, _HS),
    (_H0, -_HS, _H1, -_HS),
)


@dataclass(frozen=True)
class SchemeConstants:
    basis_matrix: tuple[tuple[QuadHalf, ...], ...]
    lattice_density: Fraction
    dual_scale: Fraction


OCTAGONAL = SchemeConstants(BASIS_MATRIX, Fraction(1, 4), Fraction(1, 2))


# integer parts of each row, ((p1..p4), (q1..q4))
_ROW_PARTS = tuple((tuple(e.p for e in row), tuple(e.q for e in row)) for row in BASIS_MATRIX)


def _row_dot(i: int, n) -> QuadHalf:
    (p1, p2, p3, p4), (q1, q2, q3, q4) = _ROW_PARTS[i]
    n1, n2, n3, n4 = n
    return QuadHalf(p1 * n1 + p2 * n2 + p3 * n3 + p4 * n4, q1 * n1 + q2 * n2 + q3 * n3 + q4 * n4)


def direct_image(n) -> Vec2:
    """Rows 1-2 of the basis matrix applied to ``n``."""
    n = tuple(map(int, n))
    return _row_dot(0, n), _row_dot(1, n)


def star_image(n) -> Vec2:
    """Rows 3-4 of the basis matrix applied to ``n`` (internal space)."""
    n = tuple(map(int, n))
    return _row_dot(2, n), _row_dot(3, n)


def star_by_conjugation(n) -> Vec2:
    """Star map via sqrt(2) -> -sqrt(2) on the direct coordinates."""
    x, y = direct_image(n)
    return x.conjugate(), y.conjugate()


def direct_fast(n) -> Vec2:
    """Closed-form direct coordinates, bypassing the matrix product."""
    n1, n2, n3, n4 = n
    return QuadHalf(2 * n1, n2 - n4), QuadHalf(2 * n3, n2 + n4)


def star_fast(n) -> Vec2:
    n1, n2, n3, n4 = n
    return QuadHalf(2 * n1, n4 - n2), QuadHalf(2 * n3, -n2 - n4)


_BASIS_P = np.array([part[0] for part in _ROW_PARTS], dtype=np.int64)
_BASIS_Q = np.array([part[1] for part in _ROW_PARTS], dtype=np.int64)
_INT64_SAFE = 2 ** 60


def _as_coefficients(n) -> np.ndarray:
    n = np.asarray(n, dtype=np.int64)
    if n.shape[-1] != 4:
        raise ValueError("coefficient rows must have length 4")
    if n.size and int(np.abs(n).max()) >= _INT64_SAFE // 8:
        raise OverflowError("coefficients too large for exact int64 evaluation")
    return n


def images_array(n) -> tuple[np.ndarray, np.ndarray]:
    """Matrix path for many vectors at once.

    Returns integer arrays ``P, Q`` of shape ``(..., 4)`` with row ``i`` of
    the image equal to ``(P[..., i] + Q[..., i] sqrt2) / 2``; indices 0-1 are
    direct, 2-3 internal.  Exact while the overflow guard holds.
    """
    n = _as_coefficients(n)
    return n @ _BASIS_P.T, n @ _BASIS_Q.T


def star_by_conjugation_array(n) -> tuple[np.ndarray, np.ndarray]:
    """Internal coordinates as conjugated direct coordinates, same layout (2 columns)."""
    p, q = images_array(n)
    return p[..., :2], -q[..., :2]


def star_on_half_module(n) -> tuple[QSqrt2, QSqrt2]:
    """Star image of ``k = direct_image(n) / 2``, an element of L/2."""
    x, y = star_image(n)
    return x.to_field() / 2, y.to_field() / 2


def direct_on_half_module(n) -> tuple[QSqrt2, QSqrt2]:
    x, y = direct_image(n)
    return x.to_field() / 2, y.to_field() / 2


def solve_coefficients(x_direct, x_internal) -> LatticeVector | None:
    """Invert the embedding using ``B^-1 = B^T / 2``.

    Returns ``None`` when the 4-vector is not a lattice point.
    """
    coords = [QSqrt2.coerce(c) for c in (*x_direct, *x_internal)]
    out = []
    for j in range(4):
        acc = QSqrt2()
        for i in range(4):
            acc = acc + coords[i] * BASIS_MATRIX[i][j].to_field()
        acc = acc / 2
        if not acc.is_rational_integer():
            return None
        out.append(int(acc.a))
    return LatticeVector(*out)


def _leibniz_zsqrt2(m: list[list[tuple[int, int]]]) -> tuple[int, int]:
    """Determinant of a matrix over Z[sqrt 2], entries as ``(p, q)`` pairs."""
    size = len(m)
    tp = tq = 0
    for perm in permutations(range(size)):
        inversions = sum(1 for i in range(size) for j in range(i + 1, size) if perm[i] > perm[j])
        p, q = (-1 if inversions % 2 else 1), 0
        for i, j in enumerate(perm):
            a, b = m[i][j]
            p, q = p * a + 2 * q * b, p * b + q * a
            if p == 0 and q == 0:
                break
        tp += p
        tq += q
    return tp, tq


def exact_determinant(matrix) -> QSqrt2:
    """Leibniz expansion; fine for 4x4.

    QuadHalf matrices are doubled so the expansion runs in Z[sqrt 2].
    """
    if all(isinstance(e, QuadHalf) for row in matrix for e in row):
        p, q = _leibniz_zsqrt2([[(e.p, e.q) for e in row] for row in matrix])
        scale = Fraction(1, 2 ** len(matrix))
        return QSqrt2(p * scale, q * scale)
    m = [[QSqrt2.coerce(e) for e in row] for row in matrix]
    total = QSqrt2()
    for perm in permutations(range(len(m))):
        inversions = sum(1 for i in range(len(m)) for j in range(i + 1, len(m)) if perm[i] > perm[j])
        term = QSqrt2(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term = term * m[i][j]
        total = total + term
    return total


def dual_basis_matrix() -> list[list[QSqrt2]]:
    """``(B^-1)^T`` computed as the transpose of ``B^T / 2``."""
    b = [[e.to_field() for e in row] for row in BASIS_MATRIX]
    inv = [[b[j][i] / 2 for j in range(4)] for i in range(4)]
    return [[inv[j][i] for j in range(4)] for i in range(4)]


def norm(v) -> float:
    """Euclidean norm of an exact 2-vector, as a float."""
    return math.hypot(float(v[0]), float(v[1]))
