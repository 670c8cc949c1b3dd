"""Homogeneous polynomials in the coordinates X, Y, Z.

A :class:`Form` keeps its degree even when it is zero, so matrix entries
always know which graded piece they live in.  Terms are kept in graded
lexicographic order with X > Y > Z.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb
from random import Random
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .linalg import QQ, Field, Matrix, check_same, kernel_rows, rank_rows, solve

Exp = Tuple[int, int, int]
VARS = ("x", "y", "z")


class FormError(ValueError):
    pass


@lru_cache(maxsize=None)
def monomials(d: int) -> Tuple[Exp, ...]:
    """Degree-d exponent triples, largest first in grlex order."""
    if d < 0:
        return ()
    return tuple((i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1))


@lru_cache(maxsize=None)
def monomial_index(d: int) -> Dict[Exp, int]:
    return {m: k for k, m in enumerate(monomials(d))}


def h0(d: int) -> int:
    """Dimension of the space of degree-d forms."""
    return comb(d + 2, 2) if d >= 0 else 0


class Form:
    __slots__ = ("field", "degree", "terms", "_hash")

    def __init__(self, field: Field, degree: int, terms: Optional[Dict[Exp, object]] = None):
        self.field = field
        self.degree = degree
        clean = {}
        if terms:
            for e, c in terms.items():
                c = field(c)
                if c:
                    if sum(e) != degree or min(e) < 0:
                        raise FormError(f"monomial {e} does not have degree {degree}")
                    clean[e] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _make(cls, field, degree, terms):
        f = cls.__new__(cls)
        f.field = field
        f.degree = degree
        f.terms = terms
        f._hash = None
        return f

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, field: Field = QQ, degree: int = 0) -> "Form":
        return cls._make(field, degree, {})

    @classmethod
    def const(cls, c, field: Field = QQ) -> "Form":
        return cls(field, 0, {(0, 0, 0): c})

    @classmethod
    def var(cls, name: str, field: Field = QQ) -> "Form":
        k = VARS.index(name.lower())
        e = [0, 0, 0]
        e[k] = 1
        return cls._make(field, 1, {tuple(e): field.one})

    @classmethod
    def linear(cls, coeffs: Sequence, field: Field = QQ) -> "Form":
        return cls(field, 1, {(1, 0, 0): coeffs[0], (0, 1, 0): coeffs[1], (0, 0, 1): coeffs[2]})

    @classmethod
    def from_vector(cls, field: Field, degree: int, vec: Sequence) -> "Form":
        return cls(field, degree, dict(zip(monomials(degree), vec)))

    @classmethod
    def random(cls, field: Field, degree: int, rng: Random, bound: int = 10) -> "Form":
        return cls(field, degree, {m: field.random(rng, bound) for m in monomials(degree)})

    # -- basic protocol ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if self.field != other.field:
            return False
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Form({self})"

    def __str__(self):
        return self.to_text()

    def sorted_terms(self) -> List[Tuple[Exp, object]]:
        idx = monomial_index(self.degree)
        return sorted(self.terms.items(), key=lambda t: idx[t[0]])

    def leading_coefficient(self):
        return self.sorted_terms()[0][1] if self.terms else self.field.zero

    def coefficients(self) -> list:
        """Coefficient vector in the grlex monomial basis of its degree."""
        z = self.field.zero
        return [self.terms.get(m, z) for m in monomials(self.degree)]

    def with_degree(self, d: int) -> "Form":
        if self.terms and d != self.degree:
            raise FormError(f"cannot regrade a nonzero form of degree {self.degree} to {d}")
        return Form._make(self.field, d, self.terms)

    def variables(self) -> set:
        return {k for e in self.terms for k in range(3) if e[k]}

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Form):
            check_same(self.field, other.field)
            return other
        return Form.const(other, self.field)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.degree != other.degree:
            raise FormError(f"adding forms of degrees {self.degree} and {other.degree}")
        F = self.field
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = F.add(t.get(e, F.zero), c)
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return Form._make(F, self.degree, t)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Form._make(F, self.degree, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Form":
        F = self.field
        c = F(c)
        if not c:
            return Form.zero(F, self.degree)
        return Form._make(F, self.degree, {e: F.mul(c, v) for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Form):
            return self.scale(other)
        F = check_same(self.field, other.field)
        d = self.degree + other.degree
        if not self.terms or not other.terms:
            return Form.zero(F, d)
        t: Dict[Exp, object] = {}
        p = F.p
        for (a, b, c), u in self.terms.items():
            for (x, y, z), v in other.terms.items():
                e = (a + x, b + y, c + z)
                t[e] = t.get(e, 0) + u * v
        if p:
            t = {e: c % p for e, c in t.items() if c % p}
        else:
            t = {e: c for e, c in t.items() if c}
        return Form._make(F, d, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Form.const(1, self.field)
        for _ in range(n):
            out = out * self
        return out

    def normalized(self) -> "Form":
        """Scale so that the grlex-leading coefficient is 1."""
        if not self.terms:
            return self
        return self.scale(self.field.inv(self.leading_coefficient()))

    def evaluate(self, point: Sequence):
        F = self.field
        s = F.zero
        for (i, j, k), c in self.terms.items():
            s = F.add(s, F.mul(c, F.mul(F.mul(pow(point[0], i), pow(point[1], j)), pow(point[2], k))))
        return s

    def substitute(self, images: Sequence["Form"]) -> "Form":
        """Replace X, Y, Z by the three given forms of a common degree."""
        F = self.field
        e = images[0].degree
        out = Form.zero(F, self.degree * e)
        powers = [[Form.const(1, F)] for _ in range(3)]
        for (i, j, k), c in self.terms.items():
            mon = Form.const(c, F)
            for v, n in enumerate((i, j, k)):
                while len(powers[v]) <= n:
                    powers[v].append(powers[v][-1] * images[v])
                mon = mon * powers[v][n]
            out = out + mon
        return out.with_degree(self.degree * e)

    def to_field(self, field: Field) -> "Form":
        """Image of a rational form in another field (e.g. reduction mod p)."""
        return Form(field, self.degree, {e: field(c) for e, c in self.terms.items()})

    # -- printing ------------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        F = self.field
        parts = []
        for (i, j, k), c in self.sorted_terms():
            mon = []
            for name, n in zip(VARS, (i, j, k)):
                if n == 1:
                    mon.append(name)
                elif n > 1:
                    mon.append(f"{name}^{n}")
            neg = F.p == 0 and c < 0
            a = -c if neg else c
            cs = F.fmt(a)
            if not mon:
                body = cs
            elif cs == "1":
                body = "*".join(mon)
            else:
                body = cs + "*" + "*".join(mon)
            if not parts:
                parts.append("-" + body if neg else body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)


# ---------------------------------------------------------------------------
# linear-algebra helpers on forms
# ---------------------------------------------------------------------------

def _mult_matrix_rows(f: Form, d: int) -> list:
    """Columns of multiplication-by-f from degree d, as rows indexed by degree-(d+deg f) monomials."""
    F = f.field
    tgt = monomial_index(d + f.degree)
    n = len(tgt)
    cols = []
    for m in monomials(d):
        col = [F.zero] * n
        for (a, b, c), v in f.terms.items():
            col[tgt[(a + m[0], b + m[1], c + m[2])]] = v
        cols.append(col)
    # transpose into row lists
    return [list(r) for r in zip(*cols)] if cols else [[] for _ in range(n)]


def exact_div(g: Form, f: Form) -> Optional[Form]:
    """h with f*h = g, or None when f does not divide g."""
    if f.is_zero():
        raise FormError("division by the zero form")
    F = check_same(f.field, g.field)
    d = g.degree - f.degree
    if g.is_zero():
        return Form.zero(F, max(d, 0))
    if d < 0:
        return None
    rows = _mult_matrix_rows(f, d)
    x = solve(Matrix._raw(F, rows, h0(d)), g.coefficients())
    if x is None:
        return None
    return Form.from_vector(F, d, x)


def reduce_mod_linear(q: Form, ell: Form) -> Form:
    """Substitute the solved variable of the linear form ``ell`` into ``q``.

    The variable is the first of X, Y, Z with a nonzero coefficient.  The
    result vanishes exactly when ``ell`` divides ``q``.
    """
    if ell.is_zero() or ell.degree != 1:
        raise FormError("reduce_mod_linear needs a nonzero linear form")
    F = check_same(q.field, ell.field)
    c = ell.coefficients()
    k = next(i for i in range(3) if c[i])
    inv = F.inv(c[k])
    images = []
    for v in range(3):
        if v == k:
            # X_k = -(sum_{i != k} c_i X_i) / c_k
            coeffs = [F.zero if i == k else F.neg(F.mul(c[i], inv)) for i in range(3)]
            images.append(Form.linear(coeffs, F))
        else:
            images.append(Form.var(VARS[v], F))
    return q.substitute(images)


def divides(f: Form, g: Form) -> bool:
    """True iff g = f*h for a homogeneous h."""
    if f.is_zero():
        raise FormError("divisibility by the zero form")
    if g.is_zero():
        return True
    if f.degree == 1:
        return reduce_mod_linear(g, f).is_zero()
    return exact_div(g, f) is not None


def gcd(f: Form, g: Form) -> Form:
    """Monic greatest common divisor of two forms.

    The degree k of the gcd is the largest k for which f*a = g*b has a
    nonzero solution with deg a = deg g - k; at that degree the solution is
    a = g/gcd up to a scalar, so the gcd is g/a.
    """
    F = check_same(f.field, g.field)
    if f.is_zero() and g.is_zero():
        raise FormError("gcd of two zero forms")
    if f.is_zero():
        return g.normalized()
    if g.is_zero():
        return f.normalized()
    if f.degree > g.degree:
        f, g = g, f
    if divides(f, g):
        return f.normalized()
    d1, d2 = f.degree, g.degree
    for k in range(d1 - 1, 0, -1):
        rows_f = _mult_matrix_rows(f, d2 - k)
        rows_g = _mult_matrix_rows(g, d1 - k)
        rows = [rf + [F.neg(x) for x in rg] for rf, rg in zip(rows_f, rows_g)]
        ker = kernel_rows(F, rows, h0(d2 - k) + h0(d1 - k))
        if ker:
            a = Form.from_vector(F, d2 - k, ker[0][:h0(d2 - k)])
            out = exact_div(g, a)
            assert out is not None
            return out.normalized()
    return Form.const(1, F)


def gcd_list(fs: Iterable[Form]) -> Form:
    out = None
    for f in fs:
        if f.is_zero():
            continue
        out = f.normalized() if out is None else gcd(out, f)
        if out.degree == 0:
            return out
    if out is None:
        raise FormError("gcd of zero forms")
    return out


def linear_span_dim(fs: Sequence[Form]) -> int:
    """Rank of the coefficient matrix of forms sharing one degree."""
    live = [f for f in fs if f.terms]
    if not live:
        return 0
    degs = {f.degree for f in live}
    if len(degs) > 1:
        raise FormError(f"mixed degrees {sorted(degs)}")
    d = degs.pop()
    F = check_same(*[f.field for f in live])
    return rank_rows(F, [f.coefficients() for f in live], h0(d))


def x_y_z(field: Field = QQ):
    return Form.var("x", field), Form.var("y", field), Form.var("z", field)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col
        self.msg = msg


class _Poly:
    """Inhomogeneous scratch polynomial used while parsing."""

    def __init__(self, field, terms):
        self.field = field
        self.terms = terms

    def add(self, other, sign=1):
        F = self.field
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = F.add(t.get(e, F.zero), c if sign > 0 else F.neg(c))
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return _Poly(F, t)

    def mul(self, other):
        F = self.field
        t = {}
        for a, u in self.terms.items():
            for b, v in other.terms.items():
                e = (a[0] + b[0], a[1] + b[1], a[2] + b[2])
                s = F.add(t.get(e, F.zero), F.mul(u, v))
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        return _Poly(F, t)


class _Parser:
    def __init__(self, text, field, line, col0):
        self.s = text
        self.i = 0
        self.field = field
        self.line = line
        self.col0 = col0

    def err(self, msg, at=None):
        at = self.i if at is None else at
        raise ParseError(msg, self.line, self.col0 + at)

    def ws(self):
        while self.i < len(self.s) and self.s[self.i] in " \t":
            self.i += 1

    def peek(self):
        self.ws()
        return self.s[self.i] if self.i < len(self.s) else ""

    def number(self):
        start = self.i
        while self.i < len(self.s) and self.s[self.i].isdigit():
            self.i += 1
        return int(self.s[start:self.i])

    def expr(self):
        node = self.term()
        while True:
            c = self.peek()
            if c in ("+", "-"):
                self.i += 1
                if self.peek() == "":
                    self.err("unexpected end of input")
                node = node.add(self.term(), 1 if c == "+" else -1)
            else:
                return node

    def term(self):
        node = self.unary()
        while self.peek() == "*":
            self.i += 1
            if self.peek() == "":
                self.err("unexpected end of input")
            node = node.mul(self.unary())
        nxt = self.peek()
        if nxt and (nxt.isalnum() or nxt == "("):
            self.err("implicit multiplication is not allowed; use '*'")
        return node

    def unary(self):
        if self.peek() == "-":
            self.i += 1
            inner = self.unary()
            return _Poly(self.field, {e: self.field.neg(c) for e, c in inner.terms.items()})
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.i += 1
            self.ws()
            if not (self.i < len(self.s) and self.s[self.i].isdigit()):
                self.err("exponent must be a natural number")
            n = self.number()
            out = _Poly(self.field, {(0, 0, 0): self.field.one})
            for _ in range(n):
                out = out.mul(base)
            return out
        return base

    def atom(self):
        c = self.peek()
        F = self.field
        if c == "":
            self.err("unexpected end of input")
        if c.isdigit():
            num = self.number()
            if self.peek() == "/":
                save = self.i
                self.i += 1
                self.ws()
                if not (self.i < len(self.s) and self.s[self.i].isdigit()):
                    self.err("expected denominator", save + 1)
                den = self.number()
                if den == 0:
                    self.err("zero denominator", save + 1)
                from fractions import Fraction
                val = F(Fraction(num, den))
            else:
                val = F(num)
            return _Poly(F, {(0, 0, 0): val} if val else {})
        if c.lower() in VARS:
            self.i += 1
            if self.i < len(self.s) and (self.s[self.i].isalnum() or self.s[self.i] == "_"):
                self.err("unknown identifier")
            e = [0, 0, 0]
            e[VARS.index(c.lower())] = 1
            return _Poly(F, {tuple(e): F.one})
        if c == "(":
            self.i += 1
            node = self.expr()
            if self.peek() != ")":
                self.err("expected ')'")
            self.i += 1
            return node
        self.err(f"unexpected character {c!r}")


def parse_form(text: str, field: Field = QQ, degree: Optional[int] = None,
               line: int = 1, col: int = 1) -> Form:
    """Parse ``x^2 - 3/2*y*z`` style text into a homogeneous form."""
    p = _Parser(text, field, line, col)
    poly = p.expr()
    if p.peek() != "":
        p.err(f"unexpected character {p.peek()!r}")
    degs = {sum(e) for e in poly.terms}
    if len(degs) > 1:
        raise ParseError("expression is not homogeneous", line, col)
    if not degs:
        return Form.zero(field, degree if degree is not None else 0)
    d = degs.pop()
    if degree is not None and d != degree:
        raise ParseError(f"expected degree {degree}, found degree {d}", line, col)
    return Form._make(field, d, poly.terms)
