"""Exact scalars and dense linear algebra over Q and prime fields.

Values are stored raw: ``Fraction`` over Q and ``int`` in ``[0, p)`` over
F_p.  The field descriptor travels with every container (matrices, forms),
and binary operations refuse to combine containers over different fields.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

from . import kernels


class FieldMismatch(ValueError):
    """Raised when values over two different fields meet."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """Either the rationals (``p == 0``) or the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0:
            if not (2 < self.p < 2 ** 31) or not is_prime(self.p):
                raise ValueError(f"modulus must be an odd prime below 2^31, got {self.p}")

    # -- descriptors -------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def __repr__(self) -> str:
        return "QQ" if self.p == 0 else f"GF({self.p})"

    def tag(self) -> str:
        return "q" if self.p == 0 else f"fp:{self.p}"

    # -- scalars -----------------------------------------------------------
    @property
    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def __call__(self, x):
        """Coerce an int, Fraction or ``"a/b"`` string into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator {x.denominator} vanishes mod {self.p}")
            return x.numerator * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return a + b if self.p == 0 else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p == 0 else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p == 0 else a * b % self.p

    def neg(self, a):
        return -a if self.p == 0 else (-a) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a if self.p == 0 else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def fmt(self, a) -> str:
        """Canonical text: ``a/b`` over Q (``a`` when integral), the residue over F_p."""
        if self.p == 0:
            a = Fraction(a)
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return str(a)

    def random(self, rng: random.Random, bound: int = 10):
        if self.p == 0:
            return Fraction(rng.randint(-bound, bound))
        return rng.randrange(self.p)

    def random_nonzero(self, rng: random.Random, bound: int = 10):
        while True:
            c = self.random(rng, bound)
            if c:
                return c


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


def parse_field(text: str) -> Field:
    """``q`` for the rationals, ``fp:P`` for F_P."""
    if text == "q":
        return QQ
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError:
            raise ValueError(f"bad field descriptor {text!r}") from None
        return Field(p)
    raise ValueError(f"bad field descriptor {text!r}")


def check_same(*fields: Field) -> Field:
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise FieldMismatch(f"mixing {first!r} and {f!r}")
    return first


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

class Matrix:
    """Immutable dense matrix over a :class:`Field`."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: Sequence[Sequence], cols: Optional[int] = None):
        self.field = field
        self.data = tuple(tuple(field(x) for x in row) for row in data)
        self.rows = len(self.data)
        if cols is None:
            cols = len(self.data[0]) if self.data else 0
        for row in self.data:
            if len(row) != cols:
                raise ValueError("ragged matrix")
        self.cols = cols

    @classmethod
    def _raw(cls, field, data, cols):
        m = cls.__new__(cls)
        m.field = field
        m.data = tuple(tuple(r) for r in data)
        m.rows = len(m.data)
        m.cols = cols
        return m

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls._raw(field, [[field.zero] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, field, n):
        return cls._raw(field, [[field.one if i == j else field.zero for j in range(n)]
                                for i in range(n)], n)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.cols == other.cols and self.data == other.data)

    def __hash__(self):
        return hash((self.field, self.cols, self.data))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.fmt(x) for x in row) for row in self.data)
        return f"Matrix[{self.field!r}]({self.rows}x{self.cols}: {body})"

    def transpose(self) -> "Matrix":
        return Matrix._raw(self.field, [list(col) for col in zip(*self.data)] if self.rows else
                           [[] for _ in range(self.cols)], self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        F = check_same(self.field, other.field)
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        cols_o = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = []
        for row in self.data:
            r = []
            for col in cols_o:
                s = sum(a * b for a, b in zip(row, col))
                r.append(s if F.p == 0 else s % F.p)
            out.append(r)
        return Matrix._raw(F, out, other.cols)

    def apply(self, v: Sequence) -> list:
        F = self.field
        out = []
        for row in self.data:
            s = sum(a * b for a, b in zip(row, v))
            out.append(s if F.p == 0 else s % F.p)
        return out

    def hstack(self, other: "Matrix") -> "Matrix":
        check_same(self.field, other.field)
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return Matrix._raw(self.field, [a + b for a, b in zip(self.data, other.data)],
                           self.cols + other.cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        check_same(self.field, other.field)
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return Matrix._raw(self.field, self.data + other.data, self.cols)


# ---------------------------------------------------------------------------
# elimination kernels on raw row lists
# ---------------------------------------------------------------------------

def _int_rows(rows: Iterable[Sequence[Fraction]]) -> list:
    """Scale rational rows to primitive integer rows (same row space)."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            d = x.denominator
            if d != 1:
                den = den * d // gcd(den, d)
        out.append(_primitive([int(x * den) for x in row]))
    return out


def _primitive(row: list) -> list:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def _echelon_int(rows: list, ncols: int, reduce_above: bool):
    """Fraction-free Gauss-Jordan on primitive integer rows.

    Pivots are chosen with the smallest bit length in their column.
    Returns ``(rows, pivots)``; rows beyond ``len(pivots)`` are zero.
    """
    rows = [r[:] for r in rows]
    n = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == n:
            break
        best, best_bits = -1, None
        for i in range(r, n):
            x = rows[i][c]
            if x:
                bits = abs(x).bit_length()
                if best_bits is None or bits < best_bits:
                    best, best_bits = i, bits
                    if bits == 1:
                        break
        if best < 0:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        prow = rows[r]
        pv = prow[c]
        targets = range(n) if reduce_above else range(r + 1, n)
        for i in targets:
            if i == r:
                continue
            row = rows[i]
            x = row[c]
            if x:
                g = gcd(pv, x)
                a, b = pv // g, x // g
                rows[i] = _primitive([a * u - b * v for u, v in zip(row, prow)])
        pivots.append(c)
        r += 1
    return rows, pivots


def _echelon_mod(rows: list, ncols: int, p: int, reduce_above: bool):
    rows = [[x % p for x in r] for r in rows]
    n = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == n:
            break
        piv = -1
        for i in range(r, n):
            if rows[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        prow = [x * inv % p for x in rows[r]]
        rows[r] = prow
        targets = range(n) if reduce_above else range(r + 1, n)
        for i in targets:
            if i == r:
                continue
            row = rows[i]
            x = row[c]
            if x:
                rows[i] = [(u - x * v) % p for u, v in zip(row, prow)]
        pivots.append(c)
        r += 1
    return rows, pivots


def echelon(field: Field, rows: list, ncols: int, reduce_above: bool = True):
    """Row-reduce raw rows; integer rows over Q, residues over F_p."""
    if field.p == 0:
        return _echelon_int(_int_rows(rows), ncols, reduce_above)
    return _echelon_mod(rows, ncols, field.p, reduce_above)


def rank_rows(field: Field, rows: list, ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    if field.p:
        return kernels.rank_mod_p([list(r) for r in rows], ncols, field.p)
    return len(_echelon_int(_int_rows(rows), ncols, False)[1])


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def rank(m: Matrix) -> int:
    """Rank of ``m`` over its field (0 for empty matrices)."""
    if m.rows == 0 or m.cols == 0:
        return 0
    # eliminate along the shorter side
    if m.rows > m.cols:
        m = m.transpose()
    return rank_rows(m.field, [list(r) for r in m.data], m.cols)


def kernel_rows(field: Field, rows: list, ncols: int) -> list:
    """Basis of the right null space of raw ``rows``, as raw vectors."""
    if not rows:
        return [[field.one if i == j else field.zero for i in range(ncols)] for j in range(ncols)]
    red, piv = echelon(field, [list(r) for r in rows], ncols)
    pivset = set(piv)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for r, c in enumerate(piv):
            x = red[r][f]
            if x:
                if field.p == 0:
                    v[c] = Fraction(-x, red[r][c])
                else:
                    v[c] = (-x) % field.p
        basis.append(v)
    return basis


def kernel_basis(m: Matrix) -> list:
    """Basis of the right null space; each vector v satisfies m.v = 0."""
    return kernel_rows(m.field, [list(r) for r in m.data], m.cols)


def left_kernel(m: Matrix) -> list:
    return kernel_basis(m.transpose())


def solve(m: Matrix, b: Sequence) -> Optional[list]:
    """Some x with m.x = b, or None when the system is inconsistent."""
    F = m.field
    if len(b) != m.rows:
        raise ValueError("right-hand side has wrong length")
    b = [F(x) for x in b]
    aug = [list(r) + [x] for r, x in zip(m.data, b)]
    red, piv = echelon(F, aug, m.cols + 1)
    if piv and piv[-1] == m.cols:
        return None
    x = [F.zero] * m.cols
    for r, c in enumerate(piv):
        if F.p == 0:
            x[c] = Fraction(red[r][m.cols], red[r][c])
        else:
            x[c] = red[r][m.cols]
    return x


def row_space_basis(field: Field, rows: list, ncols: int) -> list:
    """Reduced basis of the row space, as field values."""
    red, piv = echelon(field, [list(r) for r in rows], ncols)
    out = []
    for r, c in enumerate(piv):
        if field.p == 0:
            pv = red[r][c]
            out.append([Fraction(x, pv) for x in red[r]])
        else:
            out.append(list(red[r]))
    return out


def complement_basis(field: Field, vectors: list, dim: int) -> list:
    """Standard basis vectors completing the span of ``vectors`` to field^dim."""
    _, piv = echelon(field, [list(v) for v in vectors], dim) if vectors else ([], [])
    taken = set(piv)
    out = []
    for c in range(dim):
        if c not in taken:
            e = [field.zero] * dim
            e[c] = field.one
            out.append(e)
    return out


def inverse(m: Matrix) -> Optional[Matrix]:
    """Inverse of a square matrix, or None when singular."""
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    F = m.field
    aug = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(m.data)]
    red, piv = echelon(F, aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        return None
    out = []
    for i in range(n):
        if F.p == 0:
            pv = red[i][i]
            out.append([Fraction(x, pv) for x in red[i][n:]])
        else:
            out.append(red[i][n:])
    return Matrix._raw(F, out, n)


def random_matrix(field: Field, rows: int, cols: int, rng: random.Random, bound: int = 10) -> Matrix:
    return Matrix._raw(field, [[field.random(rng, bound) for _ in range(cols)] for _ in range(rows)], cols)


def random_invertible(field: Field, n: int, rng: random.Random, bound: int = 3) -> Matrix:
    while True:
        m = random_matrix(field, n, n, rng, bound)
        if rank(m) == n:
            return m


def reduce_mod(m: Matrix, p: int) -> Matrix:
    """Image of a rational matrix in F_p."""
    G = Field(p)
    return Matrix._raw(G, [[G(x) for x in row] for row in m.data], m.cols)
