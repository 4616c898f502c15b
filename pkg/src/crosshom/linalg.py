"""Exact rational vectors, dense matrices, and rank/kernel/inverse routines.

Scalars are `fractions.Fraction` throughout: arithmetic is exact and every
value is kept in canonical reduced form (positive denominator, gcd 1) by the
standard library.  Vectors are plain tuples of Fractions; matrices are thin
immutable wrappers around a row-major tuple.  Elimination picks pivots of
smallest bit-size to limit coefficient growth; correctness does not depend on
the pivot choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, SingularMatrix

Rational = Fraction
Vector = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def rational(x) -> Fraction:
    """Coerce an int, string ("p/q" or decimal integer) or Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def parse_rational(text: str) -> Fraction:
    return rational(text)


def render_rational(q: Fraction) -> str:
    return str(q)


def vector(entries: Iterable) -> Vector:
    return tuple(rational(e) for e in entries)


def vzero(n: int) -> Vector:
    return (ZERO,) * n


def vadd(a: Vector, b: Vector) -> Vector:
    if len(a) != len(b):
        raise DimensionMismatch(f"vector lengths {len(a)} != {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vector, b: Vector) -> Vector:
    if len(a) != len(b):
        raise DimensionMismatch(f"vector lengths {len(a)} != {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Vector) -> Vector:
    return tuple(-x for x in a)


def vscale(c, a: Vector) -> Vector:
    c = rational(c)
    return tuple(c * x for x in a)


def is_zero_vector(a: Vector) -> bool:
    return all(x == 0 for x in a)


def render_vector(a: Vector) -> str:
    return "(" + ", ".join(str(x) for x in a) + ")"


@dataclass(frozen=True)
class Matrix:
    """Dense matrix of Fractions, row-major, immutable."""

    rows: int
    cols: int
    data: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.data) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.data)}"
            )

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        data = []
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch("ragged rows")
            data.extend(rational(e) for e in r)
        return Matrix(nrows, ncols, tuple(data))

    @staticmethod
    def zero(rows: int, cols: int) -> "Matrix":
        return Matrix(rows, cols, (ZERO,) * (rows * cols))

    @staticmethod
    def identity(n: int) -> "Matrix":
        data = [ZERO] * (n * n)
        for i in range(n):
            data[i * n + i] = ONE
        return Matrix(n, n, tuple(data))

    @staticmethod
    def from_columns(cols: Sequence[Vector]) -> "Matrix":
        ncols = len(cols)
        nrows = len(cols[0]) if ncols else 0
        data = []
        for i in range(nrows):
            for c in cols:
                data.append(c[i])
        return Matrix(nrows, ncols, tuple(data))

    def entry(self, i: int, j: int) -> Fraction:
        return self.data[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.data[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return tuple(self.data[i * self.cols + j] for i in range(self.rows))

    def row_lists(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols,
            self.rows,
            tuple(self.entry(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def apply(self, v: Vector) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatch(f"matrix has {self.cols} cols, vector length {len(v)}")
        out = []
        for i in range(self.rows):
            base = i * self.cols
            out.append(sum((self.data[base + j] * v[j] for j in range(self.cols)), ZERO))
        return tuple(out)

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix shapes differ")
        return Matrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.data, other.data)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix shapes differ")
        return Matrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.data, other.data)))

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(-a for a in self.data))

    def scale(self, c) -> "Matrix":
        c = rational(c)
        return Matrix(self.rows, self.cols, tuple(c * a for a in self.data))

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DimensionMismatch(
                    f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
                )
            data = []
            for i in range(self.rows):
                for j in range(other.cols):
                    s = ZERO
                    for k in range(self.cols):
                        a = self.data[i * self.cols + k]
                        if a:
                            s += a * other.data[k * other.cols + j]
                    data.append(s)
            return Matrix(self.rows, other.cols, tuple(data))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.data)

    def render_rows(self) -> list[list[str]]:
        return [[str(e) for e in self.row(i)] for i in range(self.rows)]

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(r) for r in self.render_rows()) + "]"


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; flat index of (i1, i2) is i1 * b.rows + i2."""
    data = []
    for i1 in range(a.rows):
        for i2 in range(b.rows):
            for j1 in range(a.cols):
                ae = a.entry(i1, j1)
                for j2 in range(b.cols):
                    data.append(ae * b.entry(i2, j2))
    return Matrix(a.rows * b.rows, a.cols * b.cols, tuple(data))


def _bit_size(q: Fraction) -> int:
    return abs(q.numerator).bit_length() + q.denominator.bit_length()


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form in place; returns (rows, pivot column list)."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots: list[int] = []
    pr = 0
    for pc in range(ncols):
        if pr == nrows:
            break
        best = None
        for r in range(pr, nrows):
            e = rows[r][pc]
            if e:
                key = _bit_size(e)
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:
            continue
        r = best[1]
        rows[pr], rows[r] = rows[r], rows[pr]
        inv = ONE / rows[pr][pc]
        if inv != 1:
            rows[pr] = [e * inv for e in rows[pr]]
        piv_row = rows[pr]
        for rr in range(nrows):
            if rr != pr and rows[rr][pc]:
                f = rows[rr][pc]
                rows[rr] = [a - f * b for a, b in zip(rows[rr], piv_row)]
        pivots.append(pc)
        pr += 1
    return rows, pivots


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    _, pivots = _rref(m.row_lists())
    return len(pivots)


def kernel_basis(m: Matrix) -> list[Vector]:
    """Basis of the right null space; length cols - rank, each v has m.v = 0."""
    if m.cols == 0:
        return []
    if m.rows == 0:
        return [tuple(ONE if i == j else ZERO for i in range(m.cols)) for j in range(m.cols)]
    rows, pivots = _rref(m.row_lists())
    pivot_set = set(pivots)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        v = [ZERO] * m.cols
        v[fc] = ONE
        for k, pc in enumerate(pivots):
            v[pc] = -rows[k][fc]
        basis.append(tuple(v))
    return basis


def invert(m: Matrix) -> Matrix:
    """Exact inverse; raises SingularMatrix when rank < dimension."""
    if m.rows != m.cols:
        raise DimensionMismatch("only square matrices can be inverted")
    n = m.rows
    rows = [list(m.row(i)) + [ONE if j == i else ZERO for j in range(n)] for i in range(n)]
    rows, pivots = _rref(rows)
    if pivots != list(range(n)):
        raise SingularMatrix(f"matrix of rank {len([p for p in pivots if p < n])} < {n}")
    return Matrix.from_rows([r[n:] for r in rows])
