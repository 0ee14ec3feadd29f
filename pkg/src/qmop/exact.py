"""Exact dense matrices over the rationals.

A :class:`Matrix` keeps its entries as integer numerators over a single
positive common denominator, reduced so that ``gcd(numerators..., den) == 1``.
That form is canonical: two matrices are equal iff their stored tuples are
equal, and integer matrices are simply those with ``den == 1``.  Scalars are
:class:`fractions.Fraction`, which is already canonical.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from operator import mul
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


class DimensionError(ValueError):
    """Raised when matrix shapes are incompatible."""


def to_fraction(value) -> Fraction:
    """Parse an int, Fraction or ``"p/q"``/``"n"`` string exactly.

    Floats are rejected: no rounding is allowed anywhere.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"unsupported entry type {type(value).__name__}")


def _canonical(nums: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        nums = [-x for x in nums]
        den = -den
    g = math.gcd(den, *nums)
    if g > 1:
        nums = [x // g for x in nums]
        den //= g
    return tuple(nums), den


class Matrix:
    """Immutable exact ``rows x cols`` matrix.

    Build instances with :meth:`from_rows` or the constructors below; the raw
    ``__init__`` expects already-flattened numerators.
    """

    __slots__ = ("rows", "cols", "nums", "den", "_hash")

    def __init__(self, rows: int, cols: int, nums: Sequence[int], den: int = 1):
        if rows < 1 or cols < 1:
            raise DimensionError("matrices must have at least one row and column")
        if len(nums) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(nums)}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        self.rows = rows
        self.cols = cols
        self.nums, self.den = _canonical(list(nums), den)
        self._hash = None

    # construction ------------------------------------------------------

    @classmethod
    def from_rows(cls, data: Iterable[Iterable]) -> Matrix:
        rows = [[to_fraction(x) for x in row] for row in data]
        if not rows or not rows[0]:
            raise DimensionError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged rows")
        flat = [x for r in rows for x in r]
        den = math.lcm(*(x.denominator for x in flat))
        return cls(len(rows), width, [x.numerator * (den // x.denominator) for x in flat], den)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> Matrix:
        cols = rows if cols is None else cols
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls.diag([1] * n)

    @classmethod
    def diag(cls, values: Sequence[Scalar]) -> Matrix:
        n = len(values)
        data = [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls.from_rows(data)

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> Matrix:
        """Matrix unit E_ij (0-based indices)."""
        nums = [0] * (n * n)
        nums[i * n + j] = 1
        return cls(n, n, nums)

    # access ------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_integral(self) -> bool:
        return self.den == 1

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        return Fraction(self.nums[i * self.cols + j], self.den)

    def row_nums(self, i: int) -> tuple[int, ...]:
        return self.nums[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.den) for x in self.row_nums(i)] for i in range(self.rows)]

    def entries(self) -> list[Fraction]:
        return [Fraction(x, self.den) for x in self.nums]

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for x in self.nums)

    def trace(self) -> Fraction:
        if not self.is_square:
            raise DimensionError("trace of a non-square matrix")
        return Fraction(sum(self.nums[i * self.cols + i] for i in range(self.rows)), self.den)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> Matrix:
        """Submatrix of rows ``r0:r1`` and columns ``c0:c1``."""
        nums = [self.nums[i * self.cols + j] for i in range(r0, r1) for j in range(c0, c1)]
        return Matrix(r1 - r0, c1 - c0, nums, self.den)

    # algebra -----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols, self.den, self.nums) == (other.rows, other.cols, other.den, other.nums)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.den, self.nums))
        return self._hash

    def __matmul__(self, other: Matrix) -> Matrix:
        return mat_mul(self, other)

    def __add__(self, other: Matrix) -> Matrix:
        return self._combine(other, 1)

    def __sub__(self, other: Matrix) -> Matrix:
        return self._combine(other, -1)

    def __neg__(self) -> Matrix:
        return Matrix(self.rows, self.cols, [-x for x in self.nums], self.den)

    def _combine(self, other: Matrix, sign: int) -> Matrix:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        den = math.lcm(self.den, other.den)
        fa, fb = den // self.den, sign * (den // other.den)
        return Matrix(self.rows, self.cols, [a * fa + b * fb for a, b in zip(self.nums, other.nums)], den)

    def scale(self, factor: Scalar) -> Matrix:
        f = Fraction(factor)
        return Matrix(self.rows, self.cols, [x * f.numerator for x in self.nums], self.den * f.denominator)

    def __rmul__(self, factor: Scalar) -> Matrix:
        if isinstance(factor, (int, Fraction)) and not isinstance(factor, bool):
            return self.scale(factor)
        return NotImplemented

    @property
    def T(self) -> Matrix:
        return conj_transpose(self)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.to_rows())
        return f"Matrix([{body}])"


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """Exact product ``a @ b``."""
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    n = b.cols
    cols = [b.nums[j::n] for j in range(n)]
    out = []
    for i in range(a.rows):
        row = a.nums[i * a.cols:(i + 1) * a.cols]
        if any(row):
            out.extend(sum(map(mul, row, col)) for col in cols)
        else:
            out.extend([0] * n)
    return Matrix(a.rows, n, out, a.den * b.den)


def mat_product(factors: Sequence[Matrix]) -> Matrix:
    """Left-to-right product ``factors[0] @ factors[1] @ ...``."""
    if not factors:
        raise ValueError("empty product has no defined dimension")
    return reduce(mat_mul, factors)


def conj_transpose(a: Matrix) -> Matrix:
    """Adjoint; for rational entries this is the plain transpose."""
    nums = [a.nums[i * a.cols + j] for j in range(a.cols) for i in range(a.rows)]
    return Matrix(a.cols, a.rows, nums, a.den)


def direct_sum(*blocks: Matrix) -> Matrix:
    """Block-diagonal matrix ``blocks[0] ⊕ blocks[1] ⊕ ...``."""
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    data = [[Fraction(0)] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.to_rows()):
            data[r0 + i][c0:c0 + b.cols] = row
        r0 += b.rows
        c0 += b.cols
    return Matrix.from_rows(data)


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    if len({b.cols for b in blocks}) != 1:
        raise DimensionError("vstack needs equal column counts")
    return Matrix.from_rows([row for b in blocks for row in b.to_rows()])


def hstack(blocks: Sequence[Matrix]) -> Matrix:
    if len({b.rows for b in blocks}) != 1:
        raise DimensionError("hstack needs equal row counts")
    parts = [b.to_rows() for b in blocks]
    return Matrix.from_rows([sum((p[i] for p in parts), []) for i in range(blocks[0].rows)])


def rank(a: Matrix) -> int:
    """Exact rank by fraction-free (Bareiss) elimination on the numerators."""
    m = [list(a.row_nums(i)) for i in range(a.rows)]
    rows, cols = a.rows, a.cols
    r = 0
    prev = 1
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][c]
        for i in range(r + 1, rows):
            f = m[i][c]
            m[i] = [(p * m[i][k] - f * m[r][k]) // prev for k in range(cols)]
        prev = p
        r += 1
        if r == rows:
            break
    return r


def matrix_power(a: Matrix, k: int) -> Matrix:
    if not a.is_square:
        raise DimensionError("power of a non-square matrix")
    if k < 0:
        raise ValueError("negative exponent")
    result = Matrix.identity(a.rows)
    base = a
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def is_nilpotent(a: Matrix) -> bool:
    """True iff ``a**d == 0`` for the dimension ``d``.

    Repeated squaring reaches some ``a**(2**k)`` with ``2**k >= d``, which is
    zero exactly when ``a`` is nilpotent.
    """
    if not a.is_square:
        raise DimensionError("nilpotency needs a square matrix")
    p, power = a, 1
    while power < a.rows:
        if p.is_zero():
            return True
        p = p @ p
        power *= 2
    return p.is_zero()


def nilpotency_index(a: Matrix) -> int | None:
    """Smallest ``m >= 1`` with ``a**m == 0``, or None."""
    if not a.is_square:
        raise DimensionError("nilpotency needs a square matrix")
    p = a
    for m in range(1, a.rows + 1):
        if p.is_zero():
            return m
        p = p @ a
    return None


def four_square_decompose(n: int) -> tuple[int, int, int, int]:
    """Return ``(a, b, c, d)`` with ``a >= b >= c >= d >= 0`` and squares summing to ``n``.

    The tuple is the first one met when scanning each component downward from
    its largest admissible value. Brute force, roughly O(n**1.5) in the
    worst case, which is plenty for the small residues met in practice.
    """
    if n < 0:
        raise ValueError("four-square decomposition needs n >= 0")
    for a in range(math.isqrt(n), -1, -1):
        ra = n - a * a
        if 4 * a * a < n:
            break
        for b in range(min(a, math.isqrt(ra)), -1, -1):
            rb = ra - b * b
            if 3 * b * b < rb:
                break
            for c in range(min(b, math.isqrt(rb)), -1, -1):
                rc = rb - c * c
                if 2 * c * c < rc:
                    break
                d = math.isqrt(rc)
                if d * d == rc and d <= c:
                    return a, b, c, d
    raise AssertionError(f"no four-square decomposition found for {n}")  # unreachable by Lagrange


def ceil_two_sqrt(m: int) -> int:
    """Smallest integer ``c >= 0`` with ``c >= 2*sqrt(m)``."""
    if m < 0:
        raise ValueError("negative radicand")
    c = math.isqrt(4 * m)
    return c if c * c == 4 * m else c + 1


def lcm_of_denominators(a: Matrix) -> int:
    """Least N with N*a integral; equals the stored common denominator."""
    return a.den
