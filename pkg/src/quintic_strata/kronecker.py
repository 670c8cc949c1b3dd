"""Kronecker modules: matrices of linear forms and their King stability.

A b x a matrix psi of linear forms is a map field^a (x) V -> field^b.  It is
semistable when every nonzero proper column subspace S satisfies
``supp(S) * a >= b * dim S``, where supp(S) is the dimension of the row
space touched by psi(S).  Over F_p this is decided exactly by scanning the
Grassmannians.  Over Q a scan of a reduction proves semistability (an
unstable rational module stays unstable modulo every prime), and exact
closed forms cover the 3 x 4 and the invertible square cases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import kernels
from .forms import Form, exact_div, gcd_list, linear_span_dim
from .graded import GradedMorphism, det_of_forms, minors_of
from .linalg import (QQ, Field, Matrix, check_same, inverse, kernel_rows, left_kernel, rank,
                     rank_rows)


class KroneckerError(ValueError):
    pass


class BudgetExceeded(KroneckerError):
    pass


DEFAULT_PRIME = 5
DEFAULT_BUDGET = 20_000_000
RATIONAL_PRIMES = (5, 7, 11, 13)


def grassmannian_size(a: int, q: int, p: int) -> int:
    """Number of F_p-points of Gr(q, a)."""
    num = den = 1
    for i in range(q):
        num *= p ** (a - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


class KroneckerModule:
    """b x a matrix of linear forms (zero entries allowed)."""

    __slots__ = ("field", "b", "a", "entries")

    def __init__(self, entries: Sequence[Sequence[Form]], field_: Optional[Field] = None):
        rows = [list(r) for r in entries]
        self.b = len(rows)
        self.a = len(rows[0]) if rows else 0
        if field_ is None:
            field_ = rows[0][0].field if rows and rows[0] else QQ
        self.field = field_
        for r in rows:
            if len(r) != self.a:
                raise KroneckerError("ragged Kronecker module")
            for e in r:
                check_same(field_, e.field)
                if e.terms and e.degree != 1:
                    raise KroneckerError("Kronecker module entries must be linear")
        self.entries = tuple(tuple(e.with_degree(1) if not e.terms else e for e in r) for r in rows)

    @classmethod
    def from_block(cls, phi: GradedMorphism, rows: Sequence[int], cols: Sequence[int]):
        return cls(phi.block_forms(rows, cols), phi.field)

    @classmethod
    def from_coefficients(cls, field_: Field, slices: Sequence[Sequence[Sequence]]):
        """Build from three b x a coefficient matrices (for X, Y, Z)."""
        b, a = len(slices[0]), len(slices[0][0])
        return cls([[Form.linear([slices[t][i][j] for t in range(3)], field_) for j in range(a)]
                    for i in range(b)], field_)

    def __repr__(self):
        return f"KroneckerModule({self.b}x{self.a}, {[[str(e) for e in r] for r in self.entries]})"

    def coefficient_slices(self) -> List[List[list]]:
        """The three b x a scalar matrices C_X, C_Y, C_Z."""
        F = self.field
        out = []
        for t in range(3):
            e = [0, 0, 0]
            e[t] = 1
            key = tuple(e)
            out.append([[self.entries[i][j].terms.get(key, F.zero) for j in range(self.a)]
                        for i in range(self.b)])
        return out

    def flat_coefficients(self) -> list:
        sl = self.coefficient_slices()
        return [int(sl[t][i][j]) for t in range(3) for i in range(self.b) for j in range(self.a)]

    def transpose(self) -> "KroneckerModule":
        return KroneckerModule([list(c) for c in zip(*self.entries)], self.field)

    def to_field(self, F: Field) -> "KroneckerModule":
        return KroneckerModule([[e.to_field(F) for e in r] for r in self.entries], F)

    def at_point(self, point: Sequence) -> list:
        """The scalar matrix psi(point) = sum_t point_t C_t."""
        F = self.field
        sl = self.coefficient_slices()
        return [[F.add(F.add(F.mul(point[0], sl[0][i][j]), F.mul(point[1], sl[1][i][j])),
                       F.mul(point[2], sl[2][i][j])) for j in range(self.a)] for i in range(self.b)]

    def determinant(self) -> Form:
        if self.a != self.b:
            raise KroneckerError("determinant of a non-square module")
        return det_of_forms([list(r) for r in self.entries], self.field, self.a)


@dataclass
class DestabilizingWitness:
    column_subspace: List[list]
    row_support_dim: int

    @property
    def dim(self) -> int:
        return len(self.column_subspace)


@dataclass
class KingVerdict:
    semistable: bool
    witness: Optional[DestabilizingWitness] = None
    primes: Tuple[int, ...] = ()
    probabilistic: bool = False
    method: str = "enumeration"

    def __iter__(self):
        # allows ``ok, witness = king_semistable(psi)``
        return iter((self.semistable, self.witness))


# ---------------------------------------------------------------------------
# row support
# ---------------------------------------------------------------------------

def row_support_dim(psi: KroneckerModule, S: Sequence[Sequence]) -> int:
    """Dimension of the row span of the coefficient vectors of psi(S)."""
    F = psi.field
    sl = psi.coefficient_slices()
    vecs = []
    for s in S:
        s = [F(x) for x in s]
        for t in range(3):
            v = []
            for i in range(psi.b):
                acc = F.zero
                for j in range(psi.a):
                    if s[j]:
                        acc = F.add(acc, F.mul(sl[t][i][j], s[j]))
                v.append(acc)
            vecs.append(v)
    if not vecs or psi.b == 0:
        return 0
    return rank_rows(F, vecs, psi.b)


def _violates(psi: KroneckerModule, dim: int, supp: int, strict: bool) -> bool:
    lhs, rhs = supp * psi.a, psi.b * dim
    return lhs < rhs if strict else lhs <= rhs


# ---------------------------------------------------------------------------
# enumeration over F_p
# ---------------------------------------------------------------------------

def _scan(psi: KroneckerModule, strict: bool, budget: int) -> Optional[DestabilizingWitness]:
    """Exhaustive search for a column subspace breaking the (semi)stability inequality."""
    p = psi.field.p
    a, b = psi.a, psi.b
    total = sum(grassmannian_size(a, q, p) for q in range(1, a))
    if total > budget:
        raise BudgetExceeded(f"{total} Grassmannian points exceed the budget {budget}")
    coef = psi.flat_coefficients()
    for q in range(1, a):
        # largest support that still violates the inequality
        if strict:
            bound = -(-b * q // a) - 1          # supp * a < b * q
        else:
            bound = (b * q) // a                # supp * a <= b * q
        if bound < 0:
            continue
        supp, basis = kernels.scan_subspaces(coef, b, a, p, q, bound)
        if supp is not None:
            return DestabilizingWitness([list(r) for r in basis], supp)
    return None


def _lift_witness(psi: KroneckerModule, w: DestabilizingWitness, p: int, strict: bool):
    """Try the symmetric lift of an F_p witness as a rational subspace."""
    basis = [[Fraction(x - p if x > p // 2 else x) for x in row] for row in w.column_subspace]
    if rank(Matrix(QQ, basis)) != len(basis):
        return None
    s = row_support_dim(psi, basis)
    if _violates(psi, len(basis), s, strict):
        return DestabilizingWitness(basis, s)
    return None


def _rational_primes(psi: KroneckerModule) -> List[int]:
    dens = 1
    for r in psi.entries:
        for e in r:
            for c in e.terms.values():
                dens = dens * c.denominator // math.gcd(dens, c.denominator)
    return [p for p in RATIONAL_PRIMES if dens % p]


def _decide(psi: KroneckerModule, strict_inequality: bool, prime: Optional[int], budget: int) -> KingVerdict:
    """Shared driver: strict_inequality=True tests semistability, False tests stability."""
    if psi.a == 0 or psi.b == 0:
        return KingVerdict(True, method="trivial")
    if not psi.field.is_rational:
        w = _scan(psi, strict_inequality, budget)
        return KingVerdict(w is None, w, (psi.field.p,))
    primes = [prime] if prime else _rational_primes(psi)
    used = []
    last = None
    for p in primes:
        red = psi.to_field(Field(p))
        try:
            w = _scan(red, strict_inequality, budget)
        except BudgetExceeded:
            break
        used.append(p)
        if w is None:
            # the reduction passes, hence so does the rational module
            return KingVerdict(True, None, tuple(used), False, "reduction")
        lifted = _lift_witness(psi, w, p, strict_inequality)
        if lifted is not None:
            return KingVerdict(False, lifted, tuple(used), False, "lifted witness")
        last = w
    if not used:
        raise BudgetExceeded("no reduction prime fits the enumeration budget")
    return KingVerdict(False, last, tuple(used), True, "reduction")


def king_semistable(psi: KroneckerModule, prime: Optional[int] = None,
                    budget: int = DEFAULT_BUDGET) -> KingVerdict:
    """King semistability with a destabilizing witness on failure.

    Over F_p the answer is exact.  Over Q exact closed forms are used for
    invertible square modules and for 3 x 4 modules; other shapes go
    through reductions modulo small primes.
    """
    if psi.field.is_rational and prime is None:
        if psi.a == psi.b and not psi.determinant().is_zero():
            return KingVerdict(True, method="determinant")
        if (psi.b, psi.a) == (3, 4):
            return KingVerdict(semistable_3x4(psi), method="closed form")
    return _decide(psi, True, prime, budget)


def king_stable(psi: KroneckerModule, prime: Optional[int] = None,
                budget: int = DEFAULT_BUDGET) -> bool:
    """All King inequalities strict."""
    if psi.field.is_rational and prime is None and psi.a == psi.b and _is_prime(psi.a):
        if not psi.determinant().is_zero():
            return not square_has_invariant_subspace(psi)
    return _decide(psi, False, prime, budget).semistable


def king_stable_verdict(psi: KroneckerModule, prime: Optional[int] = None,
                        budget: int = DEFAULT_BUDGET) -> KingVerdict:
    return _decide(psi, False, prime, budget)


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % k for k in range(2, int(n ** 0.5) + 1))


# ---------------------------------------------------------------------------
# maximal minors and the kernel of a 3 x 4 module
# ---------------------------------------------------------------------------

def minors_profile(psi) -> Tuple[int, Optional[Form]]:
    """(span dimension of the maximal minors, their common factor or None).

    The common factor is the monic gcd when it has positive degree.
    """
    ent = psi.entries if isinstance(psi, (KroneckerModule, GradedMorphism)) else psi
    F = psi.field if hasattr(psi, "field") else ent[0][0].field
    minors = minors_of([list(r) for r in ent], F)
    span = linear_span_dim(minors)
    if span == 0:
        return 0, None
    g = gcd_list(minors)
    return span, (g if g.degree >= 1 else None)


@dataclass
class KernelTwist:
    d: int
    g: Form
    eta: List[Form]
    minors: List[Form] = dc_field(default_factory=list)

    def __iter__(self):
        return iter((self.d, self.g, self.eta))


def kernel_twist(psi: KroneckerModule) -> KernelTwist:
    """Kernel O(-d) of a 3 x 4 module sitting in degrees (-2, -1)."""
    if (psi.b, psi.a) != (3, 4):
        raise KroneckerError("kernel_twist needs a 3 x 4 module")
    minors = minors_of([list(r) for r in psi.entries], psi.field)
    if all(m.is_zero() for m in minors):
        raise KroneckerError("module has generic rank below 3")
    g = gcd_list(minors)
    eta = []
    for m in minors:
        q = exact_div(m, g)
        assert q is not None
        eta.append(q)
    deg = 3 - g.degree
    for r in psi.entries:
        acc = Form.zero(psi.field, deg + 1)
        for e, h in zip(r, eta):
            if e.terms and h.terms:
                acc = acc + e * h
        if acc.terms:
            raise KroneckerError("minor vector is not in the kernel")
    return KernelTwist(2 + deg, g, eta, minors)


def semistable_3x4(psi: KroneckerModule) -> bool:
    """Closed-form King test for a 3 x 4 module, exact over any field.

    Splits on the degree of the gcd g of the maximal minors:
    0 -> semistable; 1 -> semistable iff the minors are independent;
    2 -> semistable iff eta = minors/g has coefficient rank 3 and the
    hyperplane of columns killed by the relation among the eta's touches
    all three rows; 3, or all minors zero -> unstable.
    """
    if (psi.b, psi.a) != (3, 4):
        raise KroneckerError("closed form is for 3 x 4 modules")
    F = psi.field
    minors = minors_of([list(r) for r in psi.entries], F)
    if all(m.is_zero() for m in minors):
        return False
    g = gcd_list(minors)
    k = g.degree
    if k == 0:
        return True
    if k == 1:
        return linear_span_dim(minors) == 4
    if k == 3:
        return False
    eta = [exact_div(m, g) for m in minors]
    coeff = [e.coefficients() for e in eta]            # 4 x 3
    if rank_rows(F, coeff, 3) < 3:
        return False
    rel = left_kernel(Matrix._raw(F, coeff, 3))          # one relation k . eta = 0
    kvec = rel[0]
    hyper = kernel_rows(F, [kvec], 4)                   # S = {s : k . s = 0}
    return row_support_dim(psi, hyper) == 3


# ---------------------------------------------------------------------------
# invertible square modules: proper semistability as an invariant subspace
# ---------------------------------------------------------------------------

def _points(F: Field, limit: int = 6):
    if F.p:
        # projective points of P^2(F_p) in a fixed order
        for z in range(F.p):
            for y in range(F.p):
                yield (F.one, y, z)
        for z in range(F.p):
            yield (0, F.one, z)
        yield (0, 0, F.one)
    else:
        pts = [(x, y, z) for x in range(-limit, limit + 1) for y in range(-limit, limit + 1)
               for z in range(-limit, limit + 1) if (x, y, z) != (0, 0, 0)]
        pts.sort(key=lambda v: (max(map(abs, v)), v))
        for v in pts:
            yield tuple(Fraction(c) for c in v)


def _complete_basis(F: Field, x) -> List[list]:
    for i in range(3):
        for j in range(i + 1, 3):
            e1 = [F.one if t == i else F.zero for t in range(3)]
            e2 = [F.one if t == j else F.zero for t in range(3)]
            if rank(Matrix(F, [list(x), e1, e2])) == 3:
                return [e1, e2]
    raise AssertionError("zero point")


def _algebra_basis(F: Field, gens: List[Matrix], n: int) -> List[list]:
    """Basis (as flattened matrices) of the unital algebra generated by gens."""
    def flat(m: Matrix):
        return [x for row in m.data for x in row]

    basis_rows: List[list] = []
    mats: List[Matrix] = []

    def try_add(m: Matrix) -> bool:
        v = flat(m)
        if rank_rows(F, basis_rows + [v], n * n) > len(basis_rows):
            basis_rows.append(v)
            mats.append(m)
            return True
        return False

    try_add(Matrix.identity(F, n))
    k = 0
    while k < len(mats):
        w = mats[k]
        for g in gens:
            try_add(w @ g)
            if len(basis_rows) == n * n:
                return basis_rows
        k += 1
    return basis_rows


def _minimal_polynomial(F: Field, theta: Matrix) -> list:
    """Coefficients c_0..c_k (monic) of the minimal polynomial of theta."""
    n = theta.rows
    powers = [Matrix.identity(F, n)]
    vecs = [[x for row in powers[0].data for x in row]]
    while True:
        nxt = powers[-1] @ theta
        v = [x for row in nxt.data for x in row]
        # solve sum c_i vecs_i = v
        cols = Matrix._raw(F, [list(r) for r in zip(*vecs)], len(vecs))
        from .linalg import solve
        sol = solve(cols, v)
        if sol is not None:
            return [F.neg(c) for c in sol] + [F.one]
        powers.append(nxt)
        vecs.append(v)


def _poly_mod_p_irreducible(coeffs: list, p: int) -> bool:
    """Rabin-style test for a monic polynomial over F_p (low degree first)."""
    n = len(coeffs) - 1

    def trim(a):
        while a and a[-1] % p == 0:
            a.pop()
        return a

    def pmod(a, m):
        a = trim([x % p for x in a])
        inv = pow(m[-1], -1, p)
        while len(a) >= len(m):
            c = a[-1] * inv % p
            off = len(a) - len(m)
            for i, y in enumerate(m):
                a[off + i] = (a[off + i] - c * y) % p
            a = trim(a)
        return a

    def pmul(a, b, m):
        out = [0] * (len(a) + len(b) - 1) if a and b else []
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        return pmod(out, m)

    def ppow_t(e, m):
        result, base = [1], pmod([0, 1], m)
        while e:
            if e & 1:
                result = pmul(result, base, m)
            base = pmul(base, base, m)
            e >>= 1
        return result

    def pgcd(a, b):
        a, b = trim(a[:]), trim(b[:])
        while b:
            a, b = b, pmod(a, b)
        return a

    m = [x % p for x in coeffs]
    for k in range(1, n // 2 + 1):
        h = ppow_t(p ** k, m)
        h = h + [0] * (2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(pgcd(m, trim(h))) > 1:
            return False
    # the polynomial has no factor of degree <= n/2, so it is irreducible
    return True


def _poly_q_irreducible(coeffs: list) -> bool:
    import sympy
    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * t ** i for i, c in enumerate(coeffs))
    return sympy.Poly(expr, t, domain="QQ").is_irreducible


def square_has_invariant_subspace(psi: KroneckerModule, geometric: bool = False) -> bool:
    """Proper semistability of an invertible square module of prime size.

    With A0 = psi(x) invertible at some point x, a column subspace S with
    supp(S) = dim S is the same thing as a common invariant subspace of
    A0^-1 psi(y), A0^-1 psi(z).  For prime size n the generated algebra acts
    irreducibly over the base field iff it has dimension n^2, or dimension n
    and is a field.  With ``geometric`` the question is asked over the
    algebraic closure, where only the full matrix algebra is irreducible.
    """
    n = psi.a
    if psi.b != n or not _is_prime(n):
        raise KroneckerError("invariant-subspace test needs a square module of prime size")
    F = psi.field
    a0 = None
    x = None
    for pt in _points(F):
        m = Matrix._raw(F, psi.at_point(pt), n)
        inv = inverse(m)
        if inv is not None:
            a0, x = inv, pt
            break
    if a0 is None:
        raise KroneckerError("no rational point off the determinant curve")
    gens = [a0 @ Matrix._raw(F, psi.at_point(e), n) for e in _complete_basis(F, x)]
    dim = len(_algebra_basis(F, gens, n))
    if dim == n * n:
        return False
    if geometric:
        return True
    if dim != n:
        return True
    theta = next((g for g in gens if any(g[i, j] for i in range(n) for j in range(n) if i != j)
                  or len({g[i, i] for i in range(n)}) > 1), None)
    if theta is None:
        return True
    mu = _minimal_polynomial(F, theta)
    if len(mu) - 1 < n:
        return True
    irreducible = _poly_mod_p_irreducible(mu, F.p) if F.p else _poly_q_irreducible(mu)
    return not irreducible
