"""Sums of line bundles on the plane and graded matrices between them."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .forms import Form, h0
from .linalg import QQ, Field, check_same, random_invertible


class GradingError(ValueError):
    pass


class TwistSum(tuple):
    """An ordered direct sum of line bundles O(a_1) + ... + O(a_n).

    The order is the order of the matrix rows or columns it labels.
    """

    def __new__(cls, twists: Sequence[int] = ()):
        return super().__new__(cls, (int(t) for t in twists))

    @classmethod
    def parse(cls, text: str) -> "TwistSum":
        from .document import parse_twists
        return parse_twists(text)

    def h0(self, m: int = 0) -> int:
        return sum(h0(a + m) for a in self)

    def ascending_order(self) -> List[int]:
        """Stable permutation listing summands by increasing twist."""
        return sorted(range(len(self)), key=lambda i: self[i])

    def canonical(self) -> "TwistSum":
        return TwistSum(sorted(self))

    def groups(self) -> List[Tuple[int, int]]:
        """(twist, multiplicity) runs in the present order."""
        out: List[Tuple[int, int]] = []
        for a in self:
            if out and out[-1][0] == a:
                out[-1] = (a, out[-1][1] + 1)
            else:
                out.append((a, 1))
        return out

    def __str__(self):
        parts = []
        for a, n in self.groups():
            base = "O" if a == 0 else f"O({a})"
            parts.append(base if n == 1 else f"{base}^{n}")
        return " ".join(parts) if parts else "0"

    def __repr__(self):
        return f"TwistSum({list(self)})"


@dataclass(frozen=True)
class HilbertData:
    """P(t) = r*t + chi."""

    r: int
    chi: int

    @property
    def slope(self) -> Fraction:
        return Fraction(self.chi, self.r)


class GradedMorphism:
    """Matrix of forms from ``source`` to ``target``.

    Entry (i, j) lives in degree target[i] - source[j].
    """

    __slots__ = ("source", "target", "entries", "field")

    def __init__(self, source: Sequence[int], target: Sequence[int], entries, field: Optional[Field] = None):
        self.source = TwistSum(source)
        self.target = TwistSum(target)
        rows = [list(r) for r in entries]
        if len(rows) != len(self.target) or any(len(r) != len(self.source) for r in rows):
            raise GradingError(f"matrix is not {len(self.target)}x{len(self.source)}")
        if field is None:
            found = [e.field for r in rows for e in r if isinstance(e, Form)]
            field = found[0] if found else QQ
        out = []
        for i, r in enumerate(rows):
            row = []
            for j, e in enumerate(r):
                d = self.target[i] - self.source[j]
                if not isinstance(e, Form):
                    e = Form.const(e, field) if d == 0 else (Form.zero(field, d) if not e else None)
                    if e is None:
                        raise GradingError(f"scalar entry at ({i + 1},{j + 1}) where degree {d} is required")
                check_same(field, e.field)
                if e.is_zero():
                    e = Form.zero(field, d)
                row.append(e)
            out.append(tuple(row))
        self.entries = tuple(out)
        self.field = field

    # -- shape -----------------------------------------------------------------
    @property
    def nrows(self) -> int:
        return len(self.target)

    @property
    def ncols(self) -> int:
        return len(self.source)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij) -> Form:
        return self.entries[ij[0]][ij[1]]

    def degree_at(self, i: int, j: int) -> int:
        return self.target[i] - self.source[j]

    def __eq__(self, other):
        return (isinstance(other, GradedMorphism) and self.source == other.source
                and self.target == other.target and self.entries == other.entries
                and self.field == other.field)

    def __hash__(self):
        return hash((self.source, self.target, self.entries))

    def __repr__(self):
        rows = "; ".join(", ".join(str(e) for e in r) for r in self.entries)
        return f"GradedMorphism({self.source} -> {self.target}: [{rows}])"

    # -- validation ----------------------------------------------------------
    def validate(self) -> bool:
        """Entrywise degree check; negative-degree slots must hold zero."""
        for i, r in enumerate(self.entries):
            for j, e in enumerate(r):
                d = self.target[i] - self.source[j]
                if e.is_zero():
                    continue
                if d < 0 or e.degree != d:
                    return False
        return True

    def bad_cells(self) -> List[Tuple[int, int, int, int]]:
        out = []
        for i, r in enumerate(self.entries):
            for j, e in enumerate(r):
                d = self.target[i] - self.source[j]
                if not e.is_zero() and (d < 0 or e.degree != d):
                    out.append((i, j, d, e.degree))
        return out

    def require_valid(self) -> "GradedMorphism":
        bad = self.bad_cells()
        if bad:
            i, j, d, got = bad[0]
            raise GradingError(f"entry ({i + 1},{j + 1}) has degree {got}, expected {d}")
        return self

    # -- algebra ---------------------------------------------------------------
    def transpose_entries(self):
        return [list(c) for c in zip(*self.entries)] if self.entries else [[] for _ in self.source]

    def to_field(self, field: Field) -> "GradedMorphism":
        return GradedMorphism(self.source, self.target,
                              [[e.to_field(field) for e in r] for r in self.entries], field)

    def permuted(self, row_order: Sequence[int], col_order: Sequence[int]) -> "GradedMorphism":
        return GradedMorphism([self.source[j] for j in col_order], [self.target[i] for i in row_order],
                              [[self.entries[i][j] for j in col_order] for i in row_order], self.field)

    def ascending(self) -> "GradedMorphism":
        """Stable-sort source and target by increasing twist."""
        return self.permuted(self.target.ascending_order(), self.source.ascending_order())

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "GradedMorphism":
        return GradedMorphism([self.source[j] for j in cols], [self.target[i] for i in rows],
                              [[self.entries[i][j] for j in cols] for i in rows], self.field)

    def block_forms(self, rows: Sequence[int], cols: Sequence[int]) -> List[List[Form]]:
        return [[self.entries[i][j] for j in cols] for i in rows]


def identity(twists: Sequence[int], field: Field = QQ) -> GradedMorphism:
    n = len(twists)
    return GradedMorphism(twists, twists, [[1 if i == j else 0 for j in range(n)] for i in range(n)], field)


def compose(psi: GradedMorphism, phi: GradedMorphism) -> GradedMorphism:
    """psi after phi."""
    F = check_same(psi.field, phi.field)
    if tuple(phi.target) != tuple(psi.source):
        raise GradingError(f"cannot compose: {phi.target} is not {psi.source}")
    out = []
    for i in range(psi.nrows):
        row = []
        for j in range(phi.ncols):
            d = psi.target[i] - phi.source[j]
            acc = Form.zero(F, d)
            for k in range(phi.nrows):
                a, b = psi.entries[i][k], phi.entries[k][j]
                if a.terms and b.terms:
                    acc = acc + a * b
            row.append(acc.with_degree(d) if acc.terms or d >= 0 else Form.zero(F, d))
        out.append(row)
    return GradedMorphism(phi.source, psi.target, out, F).require_valid()


def det_of_forms(rows: List[List[Form]], field: Field, degree: int) -> Form:
    """Determinant by cofactor expansion with memoised column subsets."""
    n = len(rows)
    if n == 0:
        return Form.const(1, field)
    memo = {}

    def rec(r: int, mask: int) -> Form:
        if r == n:
            return Form.const(1, field)
        key = (r, mask)
        if key in memo:
            return memo[key]
        acc = None
        sign = 1
        for j in range(n):
            if mask >> j & 1:
                continue
            e = rows[r][j]
            if e.terms:
                sub = rec(r + 1, mask | (1 << j))
                if sub.terms:
                    term = e * sub
                    if sign < 0:
                        term = -term
                    acc = term if acc is None else acc + term
            sign = -sign
        out = acc if acc is not None else Form.zero(field, 0)
        memo[key] = out
        return out

    d = rec(0, 0)
    return d if d.terms else Form.zero(field, degree)


def determinant(phi: GradedMorphism) -> Form:
    if not phi.is_square:
        raise GradingError("determinant of a non-square morphism")
    return det_of_forms([list(r) for r in phi.entries], phi.field,
                        sum(phi.target) - sum(phi.source))


def is_injective(phi: GradedMorphism) -> bool:
    """For square morphisms: injective as a sheaf map iff det != 0."""
    return not determinant(phi).is_zero()


def dual_resolution(phi: GradedMorphism, k: int, check: bool = True) -> GradedMorphism:
    """Transpose presentation of the dual sheaf twisted by k."""
    if check and (not phi.is_square or not is_injective(phi)):
        raise GradingError("dual_resolution needs an injective square morphism")
    src = [-3 + k - b for b in phi.target]
    tgt = [-3 + k - a for a in phi.source]
    return GradedMorphism(src, tgt, phi.transpose_entries(), phi.field)


def minimize(phi: GradedMorphism) -> GradedMorphism:
    """Cancel invertible constant entries until none remains.

    The pivot is the leftmost, then topmost, nonzero constant entry between
    equal twists.  Row operations clear its column; the pivot row and column
    are then dropped (the column operations clearing the row only touch the
    dropped row).
    """
    F = phi.field
    src = list(phi.source)
    tgt = list(phi.target)
    rows = [list(r) for r in phi.entries]
    while True:
        pivot = None
        for j in range(len(src)):
            for i in range(len(tgt)):
                if tgt[i] == src[j] and rows[i][j].terms:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        c = rows[i][j].leading_coefficient()
        inv = F.inv(c)
        prow = rows[i]
        for r in range(len(tgt)):
            if r == i or not rows[r][j].terms:
                continue
            u = rows[r][j].scale(inv)  # degree tgt[r] - tgt[i]
            new = []
            for s in range(len(src)):
                if s == j:
                    new.append(Form.zero(F, tgt[r] - src[s]))
                    continue
                e = rows[r][s]
                if prow[s].terms:
                    e = e - u * prow[s]
                new.append(e if e.terms else Form.zero(F, tgt[r] - src[s]))
            rows[r] = new
        del rows[i]
        del tgt[i]
        for r in rows:
            del r[j]
        del src[j]
    return GradedMorphism(src, tgt, rows, F)


def hilbert(phi: GradedMorphism) -> HilbertData:
    """Hilbert polynomial of the cokernel from the twists alone."""
    a, b = list(phi.source), list(phi.target)
    # 2 * sum C(x + t + 2, 2) = n t^2 + sum(2x + 3) t + sum(x^2 + 3x + 2)
    t2 = len(b) - len(a)
    if t2 != 0:
        raise GradingError("cokernel is not one-dimensional (t^2 coefficient does not vanish)")
    r = sum(b) - sum(a)
    twice_chi = sum(x * x + 3 * x + 2 for x in b) - sum(x * x + 3 * x + 2 for x in a)
    if r <= 0:
        raise GradingError("non-positive multiplicity")
    return HilbertData(r, twice_chi // 2)


def maximal_minors(phi: GradedMorphism, rows: Optional[Sequence[int]] = None,
                   cols: Optional[Sequence[int]] = None) -> List[Form]:
    """Signed maximal minors of a k x (k+1) or (k+1) x k block.

    For a wide block the j-th minor deletes column j and carries the sign
    (-1)^j, so the minors form a kernel vector of the block.
    """
    rows = list(range(phi.nrows)) if rows is None else list(rows)
    cols = list(range(phi.ncols)) if cols is None else list(cols)
    block = [[phi.entries[i][j] for j in cols] for i in rows]
    return minors_of(block, phi.field)


def minors_of(block: List[List[Form]], field: Field) -> List[Form]:
    """Maximal minors of a rectangular block.

    For k x (k+1) (or its transpose) these are the signed minors deleting
    one column in turn.  Other shapes give every k x k minor, k the smaller
    side, in lexicographic order of the kept columns, without signs.
    """
    k = len(block)
    w = len(block[0]) if block else 0
    if k == 0 or w == 0:
        raise GradingError("maximal minors of an empty block")
    if k > w:
        block = [list(c) for c in zip(*block)]
        k, w = w, k
    out = []
    if w == k + 1:
        for j in range(w):
            sub = [[r[c] for c in range(w) if c != j] for r in block]
            d = det_of_forms(sub, field, 0)
            out.append(d if j % 2 == 0 else -d)
    else:
        for keep in combinations(range(w), k):
            out.append(det_of_forms([[r[c] for c in keep] for r in block], field, 0))
    degs = {m.degree for m in out if m.terms}
    if len(degs) == 1:
        deg = degs.pop()
        out = [m if m.terms else Form.zero(field, deg) for m in out]
    return out


# ---------------------------------------------------------------------------
# random graded automorphisms (used to hide normal forms and in tests)
# ---------------------------------------------------------------------------

def random_automorphism(twists: Sequence[int], field: Field, rng: random.Random,
                        bound: int = 3, constants_only: bool = False) -> GradedMorphism:
    """A random automorphism of a sum of line bundles.

    Blocks between equal twists are random invertible constant matrices;
    blocks raising the twist are random forms unless ``constants_only``.
    """
    twists = list(twists)
    n = len(twists)
    ent = [[Form.zero(field, twists[i] - twists[j]) for j in range(n)] for i in range(n)]
    # invertible constant blocks on each twist class
    classes = {}
    for i, a in enumerate(twists):
        classes.setdefault(a, []).append(i)
    for idx in classes.values():
        g = random_invertible(field, len(idx), rng, bound)
        for r, i in enumerate(idx):
            for c, j in enumerate(idx):
                ent[i][j] = Form.const(g[r, c], field)
    if not constants_only:
        for i in range(n):
            for j in range(n):
                d = twists[i] - twists[j]
                if d > 0:
                    ent[i][j] = Form.random(field, d, rng, bound)
    return GradedMorphism(twists, twists, ent, field)


def random_equivalent(phi: GradedMorphism, rng: random.Random, bound: int = 3,
                      constants_only: bool = False) -> GradedMorphism:
    """h * phi * g for random graded automorphisms g, h."""
    g = random_automorphism(phi.source, phi.field, rng, bound, constants_only)
    h = random_automorphism(phi.target, phi.field, rng, bound, constants_only)
    return compose(h, compose(phi, g))
