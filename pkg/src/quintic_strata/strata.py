"""Strata of the moduli spaces M(5, chi) of plane sheaves.

A sheaf is handed over as a presentation phi.  ``classify`` minimizes phi,
sorts both sums by increasing twist, matches the shape against the
catalogue and runs the stratum's condition battery.  Blocks phi_ij are
numbered by twist groups in that increasing order: phi_12 is the block
from the second source group to the first target group.

Euler characteristics 0, 1, 3 are handled directly.  For 2 and 4 the
presentation is dualized into M(5,3) / M(5,1) and classified there; any
other chi is first twisted into the range 0..4.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .cohomology import CohomologySignature, signature
from .forms import Form, divides, gcd, h0, linear_span_dim, monomial_index, monomials
from .graded import (GradedMorphism, GradingError, HilbertData, determinant, dual_resolution,
                     hilbert, minimize)
from .kronecker import (KroneckerModule, kernel_twist, minors_profile, semistable_3x4,
                        square_has_invariant_subspace)
from .linalg import Field, Matrix, left_kernel, rank_rows


class StrataError(ValueError):
    pass


STRATUM_LABELS = ("X0", "X1", "X2", "X3")
OTHER_LABELS = ("NotInjective", "WrongShape", "ConditionsFailed")
SUBLABELS = ("X00", "X01", "X02", "X10", "X11", "X20", "X21", "stable", "strictly-semistable")
_SUBLABEL_ALIASES = {"X0\\X01": "X00", "X0∖X01": "X00", "X0-X01": "X00",
                     "strictly_semistable": "strictly-semistable", "semistable": "strictly-semistable"}
MODULI_DIMENSION = 26


def normalize_sublabel(s: Optional[str]) -> Optional[str]:
    if s is None:
        return None
    s = _SUBLABEL_ALIASES.get(s, s)
    if s not in SUBLABELS:
        raise StrataError(f"unknown sub-label {s!r}")
    return s


@dataclass(frozen=True)
class ModuliSpace:
    chi: int
    r: int = 5

    @property
    def slope(self) -> Fraction:
        return Fraction(self.chi, self.r)

    def __str__(self):
        return f"M({self.r},{self.chi})"

    @classmethod
    def parse(cls, text: str) -> "ModuliSpace":
        m = re.fullmatch(r"\s*[Mm]\(\s*(\d+)\s*,\s*(-?\d+)\s*\)\s*", text)
        if not m:
            raise StrataError(f"cannot read moduli space {text!r}; expected M(5,<chi>)")
        r, chi = int(m.group(1)), int(m.group(2))
        if r != 5:
            raise StrataError("only multiplicity 5 is catalogued")
        return cls(chi)


# ---------------------------------------------------------------------------
# catalogue
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Shape:
    chi: int
    label: str
    source: Tuple[int, ...]           # increasing
    target: Tuple[int, ...]
    codim: int
    row: Tuple[int, int, int]         # cohomology row of the table
    zero_blocks: Tuple[Tuple[int, int], ...] = ()

    @property
    def space(self) -> ModuliSpace:
        return ModuliSpace(self.chi)

    def source_groups(self) -> List[List[int]]:
        return _groups(self.source)

    def target_groups(self) -> List[List[int]]:
        return _groups(self.target)

    def forced_zero(self, i: int, j: int) -> bool:
        """True when cell (i, j) lies in a block the stratum sets to zero."""
        ti = _group_of(self.target, i)
        sj = _group_of(self.source, j)
        return (ti + 1, sj + 1) in self.zero_blocks

    def dim_W(self) -> int:
        n = 0
        for i, b in enumerate(self.target):
            for j, a in enumerate(self.source):
                if not self.forced_zero(i, j):
                    n += h0(b - a)
        return n

    def dim_G(self) -> int:
        end = lambda t: sum(h0(x - y) for x in t for y in t)
        return end(self.source) + end(self.target) - 1


def _groups(twists: Sequence[int]) -> List[List[int]]:
    out: List[List[int]] = []
    prev = None
    for i, t in enumerate(twists):
        if out and t == prev:
            out[-1].append(i)
        else:
            out.append([i])
        prev = t
    return out


def _group_of(twists: Sequence[int], i: int) -> int:
    return len({t for t in twists[:i + 1]}) - 1


_PRIMAL = [
    Shape(3, "X0", (-2, -2, -1), (0, 0, 0), 0, (0, 0, 1)),
    Shape(3, "X1", (-2, -2, -1, -1), (-1, 0, 0, 0), 2, (0, 0, 2), ((1, 2),)),
    Shape(3, "X2", (-2, -2, -2), (-1, -1, 1), 3, (1, 0, 3)),
    Shape(3, "X3", (-3, -1), (0, 1), 4, (1, 1, 4)),
    Shape(1, "X0", (-2, -2, -2, -2), (-1, -1, -1, 0), 0, (0, 0, 0)),
    Shape(1, "X1", (-3, -2), (0, 0), 2, (0, 1, 0)),
    Shape(1, "X2", (-3, -2, -1), (-1, 0, 0), 3, (0, 1, 1), ((1, 3),)),
    Shape(1, "X3", (-3, -3), (-2, 1), 5, (1, 2, 3)),
    Shape(0, "X0", (-2,) * 5, (-1,) * 5, 0, (0, 0, 0)),
    Shape(0, "X1", (-3, -2, -2), (-1, -1, 0), 1, (0, 1, 0)),
    Shape(0, "X2", (-3, -3, -1), (-2, 0, 0), 4, (0, 2, 1)),
    Shape(0, "X3", (-4,), (1,), 6, (1, 3, 3)),
]


def _dual_shape(s: Shape) -> Shape:
    """Transpose image under G = F^D(1): chi -> 5 - chi."""
    src = tuple(sorted(-2 - b for b in s.target))
    tgt = tuple(sorted(-2 - a for a in s.source))
    ns, nt = len(set(s.source)), len(set(s.target))
    zb = tuple(sorted((ns + 1 - j, nt + 1 - i) for i, j in s.zero_blocks))
    h0m1, h1, h0w = s.row
    # (h0(G(-1)), h1(G), h1(G x Omega(1))) by Serre duality
    return Shape(5 - s.chi, s.label, src, tgt, s.codim, (h1, h0m1, h0w), zb)


CATALOGUE: Dict[int, List[Shape]] = {}
for _s in _PRIMAL:
    CATALOGUE.setdefault(_s.chi, []).append(_s)
for _s in _PRIMAL:
    if _s.chi in (1, 3):
        CATALOGUE.setdefault(5 - _s.chi, []).append(_dual_shape(_s))


def catalogue_shape(chi: int, label: str) -> Shape:
    for s in CATALOGUE.get(chi, []):
        if s.label == label:
            return s
    raise StrataError(f"no stratum {label} in M(5,{chi})")


def primal_shapes() -> List[Shape]:
    return list(_PRIMAL)


def match_shape(chi: int, phi: GradedMorphism) -> Optional[Shape]:
    key = (tuple(sorted(phi.source)), tuple(sorted(phi.target)))
    for s in CATALOGUE.get(chi, []):
        if (s.source, s.target) == key:
            return s
    return None


# ---------------------------------------------------------------------------
# condition batteries (phi is minimal and sorted by increasing twist)
# ---------------------------------------------------------------------------

Conditions = List[Tuple[str, bool]]


def _column_kernel_quadrics(phi: GradedMorphism) -> Tuple[int, Optional[List[Form]]]:
    """For the M(5,3) X0 shape: span of the O(-1) column and, when it is 2,
    the two quadrics v.col1, v.col2 for the row vector v killing that column."""
    F = phi.field
    col = [phi[i, 2] for i in range(3)]
    coeff = [e.coefficients() for e in col]
    span = rank_rows(F, coeff, 3)
    if span != 2:
        return span, None
    v = left_kernel(Matrix._raw(F, coeff, 3))[0]
    q = []
    for j in (0, 1):
        acc = Form.zero(F, 2)
        for i in range(3):
            if v[i]:
                acc = acc + phi[i, j].scale(v[i])
        q.append(acc)
    return span, q


def _battery_3_0(phi):
    span, q = _column_kernel_quadrics(phi)
    out = [("O(-1)-column spans at least two one-forms", span >= 2)]
    if span >= 2:
        out.append(("row killing the O(-1)-column has independent quadrics",
                    span == 3 or linear_span_dim(q) == 2))
    return out


def _battery_3_1(phi):
    F = phi.field
    phi11 = [phi[0, 0], phi[0, 1]]
    phi12 = [phi[0, 2], phi[0, 3]]
    phi22 = [[phi[i, j] for j in (2, 3)] for i in (1, 2, 3)]
    return [("phi12 = 0", all(e.is_zero() for e in phi12)),
            ("phi11 has independent one-forms", linear_span_dim(phi11) == 2),
            ("phi22 has independent maximal minors", minors_profile(KroneckerModule(phi22, F))[0] == 3)]


def _battery_3_2(phi):
    psi = KroneckerModule([[phi[i, j] for j in range(3)] for i in (0, 1)], phi.field)
    return [("phi11 has independent maximal minors", minors_profile(psi)[0] == 3)]


def _battery_3_3(phi):
    l, q = phi[0, 1], phi[1, 1]
    ok = not l.is_zero()
    return [("phi12 != 0", ok),
            ("phi12 does not divide phi22", ok and not divides(l, q))]


def _battery_1_0(phi):
    psi = KroneckerModule([[phi[i, j] for j in range(4)] for i in range(3)], phi.field)
    return [("phi11 is King semistable", semistable_3x4(psi))]


def _battery_1_1(phi):
    return [("phi12, phi22 are independent two-forms", linear_span_dim([phi[0, 1], phi[1, 1]]) == 2)]


def _battery_1_2(phi):
    l, q = phi[0, 1], phi[0, 0]
    ok = not l.is_zero()
    return [("phi13 = 0", phi[0, 2].is_zero()),
            ("phi12 != 0", ok),
            ("phi12 does not divide phi11", ok and not divides(l, q)),
            ("phi23 has independent entries", linear_span_dim([phi[1, 2], phi[2, 2]]) == 2)]


def _battery_1_3(phi):
    return [("phi11 has independent one-forms", linear_span_dim([phi[0, 0], phi[0, 1]]) == 2)]


def _battery_0_0(phi):
    return []


def _battery_0_1(phi):
    psi = KroneckerModule([[phi[i, j] for j in (1, 2)] for i in (0, 1)], phi.field)
    return [("phi12 is injective", not psi.determinant().is_zero())]


def _battery_0_2(phi):
    return [("phi11 has independent entries", linear_span_dim([phi[0, 0], phi[0, 1]]) == 2),
            ("phi22 has independent entries", linear_span_dim([phi[1, 2], phi[2, 2]]) == 2)]


def _battery_0_3(phi):
    return [("phi != 0", not phi[0, 0].is_zero())]


BATTERIES: Dict[Tuple[int, str], Callable[[GradedMorphism], Conditions]] = {
    (3, "X0"): _battery_3_0, (3, "X1"): _battery_3_1, (3, "X2"): _battery_3_2, (3, "X3"): _battery_3_3,
    (1, "X0"): _battery_1_0, (1, "X1"): _battery_1_1, (1, "X2"): _battery_1_2, (1, "X3"): _battery_1_3,
    (0, "X0"): _battery_0_0, (0, "X1"): _battery_0_1, (0, "X2"): _battery_0_2, (0, "X3"): _battery_0_3,
}


def _sublabel(chi: int, label: str, phi: GradedMorphism, warnings: List[str]) -> Optional[str]:
    F = phi.field
    if (chi, label) == (3, "X0"):
        span, _ = _column_kernel_quadrics(phi)
        return "X00" if span == 3 else "X01"
    if (chi, label) == (3, "X2"):
        psi = KroneckerModule([[phi[i, j] for j in range(3)] for i in (0, 1)], F)
        return "X20" if minors_profile(psi)[1] is None else "X21"
    if (chi, label) == (1, "X0"):
        psi = KroneckerModule([[phi[i, j] for j in range(4)] for i in range(3)], F)
        d = kernel_twist(psi).d
        return {5: "X00", 4: "X01", 3: "X02"}[d]
    if (chi, label) == (1, "X1"):
        return "X11" if gcd(phi[0, 1], phi[1, 1]).degree >= 1 else "X10"
    if (chi, label) == (0, "X0"):
        psi = KroneckerModule([list(r) for r in phi.entries], F)
        geometric = square_has_invariant_subspace(psi, geometric=True)
        if geometric and not square_has_invariant_subspace(psi):
            warnings.append("stable over the base field, properly semistable over its algebraic closure")
        return "strictly-semistable" if geometric else "stable"
    return None


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class StratumReport:
    space: Optional[ModuliSpace]
    label: str
    sublabel: Optional[str] = None
    conditions: Conditions = dc_field(default_factory=list)
    signature: Optional[CohomologySignature] = None
    determinant: Optional[Form] = None
    hilbert: Optional[HilbertData] = None
    warnings: List[str] = dc_field(default_factory=list)
    normalized: Optional[GradedMorphism] = None

    @property
    def in_stratum(self) -> bool:
        return self.label in STRATUM_LABELS

    def as_dict(self) -> dict:
        hd = None
        if self.hilbert is not None:
            s = self.hilbert.slope
            hd = {"chi": self.hilbert.chi, "r": self.hilbert.r,
                  "slope": f"{s.numerator}/{s.denominator}"}
        return {
            "conditions": {name: ok for name, ok in self.conditions},
            "determinant": None if self.determinant is None else self.determinant.to_text(),
            "hilbert": hd,
            "label": self.label,
            "signature": None if self.signature is None else self.signature.as_dict(),
            "space": None if self.space is None else str(self.space),
            "sublabel": self.sublabel,
            "warnings": list(self.warnings),
        }


def shift(phi: GradedMorphism, s: int) -> GradedMorphism:
    """Presentation of coker(phi)(s)."""
    return GradedMorphism([a + s for a in phi.source], [b + s for b in phi.target],
                          phi.entries, phi.field)


def _injective_signature(phi: GradedMorphism) -> Optional[CohomologySignature]:
    try:
        return signature(phi)
    except Exception:   # cohomology of a non-torsion cokernel is not tabulated
        return None


def classify(phi: GradedMorphism, space: Optional[ModuliSpace] = None) -> StratumReport:
    """Stratum of coker(phi) in M(5, chi)."""
    phi.require_valid()
    warnings: List[str] = []
    m = minimize(phi)
    if m.nrows != phi.nrows:
        warnings.append(f"cancelled {phi.nrows - m.nrows} invertible constant pair(s)")
    m = m.ascending()
    if not m.is_square:
        return StratumReport(space, "WrongShape", warnings=warnings + ["presentation is not square"],
                             normalized=m)
    det = determinant(m)
    try:
        hd = hilbert(m)
    except GradingError as exc:
        return StratumReport(space, "WrongShape", determinant=det, warnings=warnings + [str(exc)],
                             normalized=m)
    if space is None:
        space = ModuliSpace(hd.chi)
    report = StratumReport(space, "WrongShape", determinant=det, hilbert=hd, warnings=warnings,
                           normalized=m)
    if hd.r != 5:
        warnings.append(f"multiplicity {hd.r} differs from 5")
        return report
    if space.chi != hd.chi:
        warnings.append(f"Euler characteristic of the cokernel is {hd.chi}, not {space.chi}")
        if not det.is_zero():
            report.signature = _injective_signature(m)
        return report
    c = hd.chi % 5
    s = (hd.chi - c) // 5
    if s:
        m = shift(m, -s)
        warnings.append(f"classified after twisting by {-s} into M(5,{c})")
    if c in (2, 4):
        return _classify_dual(m, c, report)
    shape = match_shape(c, m)
    if shape is None:
        if not det.is_zero():
            report.signature = _injective_signature(m)
        return report
    if det.is_zero():
        report.label = "NotInjective"
        report.conditions = [("injective", False)]
        return report
    return _finish(report, shape, m, m, dual=False)


def _finish(report: StratumReport, shape: Shape, phi_primal: GradedMorphism,
            phi_own: GradedMorphism, dual: bool) -> StratumReport:
    conds = [("injective", True)] + BATTERIES[(shape.chi, shape.label)](phi_primal)
    if dual:
        conds = [(("transposed: " + n) if n != "injective" else n, ok) for n, ok in conds]
    report.conditions = conds
    sig = signature(phi_own)
    report.signature = sig
    if not all(ok for _, ok in conds):
        report.label = "ConditionsFailed"
        return report
    row = catalogue_shape(hilbert(phi_own).chi, shape.label).row
    got = sig.dual_triple() if dual else sig.triple()
    if got != row:
        report.label = "ConditionsFailed"
        report.warnings.append(f"signature {got} differs from the table row {row}")
        return report
    report.label = shape.label
    report.sublabel = _sublabel(shape.chi, shape.label, phi_primal, report.warnings)
    return report


def _classify_dual(g: GradedMorphism, c: int, report: StratumReport) -> StratumReport:
    """chi = 2 or 4: classify F = G^D(1) in M(5, 5 - c) and transfer the label."""
    det = report.determinant
    if match_shape(c, g) is None:
        if not det.is_zero():
            report.signature = _injective_signature(g)
        return report
    if det.is_zero():
        report.label = "NotInjective"
        report.conditions = [("injective", False)]
        return report
    f = dual_resolution(g, 1).ascending()
    shape = match_shape(5 - c, f)
    assert shape is not None
    return _finish(report, shape, f, g, dual=True)


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------

def canonical_dual_twist(chi: int) -> int:
    """k with -chi + 5k in {0, 1, 2, 3, 4}, chosen so M(5,0) is self-dual."""
    c = chi % 5
    return (chi - c) // 5 + (0 if c == 0 else 1)


def dual_classify(space: ModuliSpace, phi: GradedMorphism) -> Tuple[ModuliSpace, StratumReport]:
    """Classify the dual sheaf in its own moduli space."""
    k = canonical_dual_twist(space.chi)
    g = dual_resolution(minimize(phi), k)
    dspace = ModuliSpace(-space.chi + 5 * k)
    return dspace, classify(g, dspace)


# ---------------------------------------------------------------------------
# group action: stabilizers and the dimension audit
# ---------------------------------------------------------------------------

def _end_unknowns(twists: Sequence[int]):
    """(i, j, monomial exponent) for the coefficients of a graded endomorphism."""
    out = []
    for i, x in enumerate(twists):
        for j, y in enumerate(twists):
            d = x - y
            if d >= 0:
                for mon in monomials(d):
                    out.append((i, j, mon))
    return out


def stabilizer_dimension(phi: GradedMorphism) -> int:
    """dim{(a, b) : b phi = phi a} - 1, the homotheties removed."""
    F = phi.field
    src, tgt = list(phi.source), list(phi.target)
    # equation coordinates: (i, j, monomial of degree tgt[i] - src[j])
    offsets = {}
    n = 0
    for i, b in enumerate(tgt):
        for j, a in enumerate(src):
            d = b - a
            if d >= 0:
                offsets[(i, j)] = (n, monomial_index(d))
                n += h0(d)
    columns = []

    def add_term(col, i, j, mon, form, sign):
        off, idx = offsets[(i, j)]
        for e, c in form.terms.items():
            key = off + idx[(e[0] + mon[0], e[1] + mon[1], e[2] + mon[2])]
            col[key] = F.add(col.get(key, F.zero), c if sign > 0 else F.neg(c))

    for (i, k, mon) in _end_unknowns(tgt):
        # b_ik * phi_kj contributes to (i, j)
        col: dict = {}
        for j in range(len(src)):
            e = phi[k, j]
            if e.terms and (i, j) in offsets:
                add_term(col, i, j, mon, e, +1)
        columns.append(col)
    for (k, j, mon) in _end_unknowns(src):
        # - phi_ik * a_kj contributes to (i, j)
        col = {}
        for i in range(len(tgt)):
            e = phi[i, k]
            if e.terms and (i, j) in offsets:
                add_term(col, i, j, mon, e, -1)
        columns.append(col)
    rows = [[c.get(t, F.zero) for t in range(n)] for c in columns]
    r = rank_rows(F, rows, n) if n and rows else 0
    return len(columns) - r - 1


def kronecker_moduli_dimension(n: int, a: int, b: int) -> int:
    """dim N(n, a, b) = n a b - a^2 - b^2 + 1."""
    return n * a * b - a * a - b * b + 1


@dataclass
class DimensionAudit:
    space: ModuliSpace
    label: str
    dim_W: int
    dim_G: int
    stab_dim: int
    stratum_dim: int
    expected_codim: int

    @property
    def ok(self) -> bool:
        return (self.stratum_dim == self.dim_W - self.dim_G + self.stab_dim
                and self.stratum_dim == MODULI_DIMENSION - self.expected_codim)

    def as_dict(self) -> dict:
        return {"dim_G": self.dim_G, "dim_W": self.dim_W, "expected_codim": self.expected_codim,
                "label": self.label, "ok": self.ok, "space": str(self.space),
                "stab_dim": self.stab_dim, "stratum_dim": self.stratum_dim}


def dimension_audit(space: ModuliSpace, label: str, samples: int = 20, seed: int = 0,
                    field: Optional[Field] = None) -> DimensionAudit:
    from .gallery import SamplingError, sample_stratum
    from .linalg import QQ
    shape = catalogue_shape(space.chi, label)
    rng = random.Random(seed)
    stabs = []
    for _ in range(samples):
        try:
            phi = sample_stratum(space, label, seed=rng.getrandbits(63), field=field or QQ)
        except SamplingError as exc:
            raise StrataError(f"audit of {space} {label}: {exc}") from exc
        stabs.append(stabilizer_dimension(phi))
    stab = min(stabs)
    dW, dG = shape.dim_W(), shape.dim_G()
    return DimensionAudit(space, label, dW, dG, stab, dW - dG + stab, shape.codim)


def audit_rows(space: Optional[ModuliSpace] = None) -> List[Tuple[ModuliSpace, str]]:
    return [(s.space, s.label) for s in _PRIMAL if space is None or s.chi == space.chi]


KRONECKER_CHECKS = ((3, 2, 3, 6), (3, 5, 5, MODULI_DIMENSION))


# ---------------------------------------------------------------------------
# closed-form batteries against finite-field enumeration
# ---------------------------------------------------------------------------

ORACLE_SHAPES = ((3, "X0"), (1, "X0"), (0, "X0"))


def _projective_points(F: Field, n: int):
    """Points of P^(n-1)(F_p), first nonzero coordinate 1."""
    p = F.p
    for lead in range(n):
        for tail in range(p ** (n - 1 - lead)):
            v = [0] * n
            v[lead] = 1
            k = tail
            for t in range(lead + 1, n):
                v[t] = k % p
                k //= p
            yield v


def _combine(F: Field, coeffs, forms: Sequence[Form], degree: int) -> Form:
    acc = Form.zero(F, degree)
    for c, f in zip(coeffs, forms):
        if c and f.terms:
            acc = acc + f.scale(c)
    return acc


def m53_forbidden_form(phi: GradedMorphism) -> Optional[str]:
    """Enumerate the orbit data of the two forbidden M(5,3) X0 normal forms over F_p.

    Form 1 needs a two-dimensional space of row vectors killing the O(-1)
    column.  Form 2 needs a row vector v killing that column and a column
    combination c1*col1 + c2*col2 + l*col3 killed by v; since v.col3 = 0 the
    one-form l plays no role and only (c1 : c2) is enumerated.
    """
    F = phi.field
    if not F.p:
        raise StrataError("the enumeration oracle runs over a prime field")
    cols = [[phi[i, j] for i in range(3)] for j in range(3)]
    killers = [v for v in _projective_points(F, 3) if _combine(F, v, cols[2], 1).is_zero()]
    killset = {tuple(v) for v in killers}
    # form 1: the plane {v : u.v = 0} lies inside the killers
    for u in _projective_points(F, 3):
        plane = [v for v in _projective_points(F, 3) if sum(a * b for a, b in zip(u, v)) % F.p == 0]
        if all(tuple(v) in killset for v in plane):
            return "form 1"
    for v in killers:
        q1 = _combine(F, v, cols[0], 2)
        q2 = _combine(F, v, cols[1], 2)
        for c in _projective_points(F, 2):
            if (q1.scale(c[0]) + q2.scale(c[1])).is_zero():
                return "form 2"
    return None


def battery_verdict(chi: int, label: str, phi: GradedMorphism) -> bool:
    """Closed-form answer on a sorted presentation of the given shape.

    (3, X0) and (1, X0): the forbidden-form battery passes.
    (0, X0): the module is stable over the base field.
    """
    F = phi.field
    if (chi, label) == (3, "X0"):
        return all(ok for _, ok in _battery_3_0(phi))
    if (chi, label) == (1, "X0"):
        return _battery_1_0(phi)[0][1]
    if (chi, label) == (0, "X0"):
        psi = KroneckerModule([list(r) for r in phi.entries], F)
        return not square_has_invariant_subspace(psi)
    raise StrataError(f"no closed-form battery for M(5,{chi}) {label}")


def oracle_verdict(chi: int, label: str, phi: GradedMorphism):
    """(verdict, witness) by exhaustive search over F_p."""
    from .kronecker import king_semistable, king_stable_verdict
    F = phi.field
    if (chi, label) == (3, "X0"):
        w = m53_forbidden_form(phi)
        return w is None, w
    if (chi, label) == (1, "X0"):
        psi = KroneckerModule([[phi[i, j] for j in range(4)] for i in range(3)], F)
        v = king_semistable(psi)
        return v.semistable, v.witness
    if (chi, label) == (0, "X0"):
        psi = KroneckerModule([list(r) for r in phi.entries], F)
        v = king_stable_verdict(psi)
        return v.semistable, v.witness
    raise StrataError(f"no enumeration oracle for M(5,{chi}) {label}")


def oracle_case(chi: int, label: str, F: Field, rng: random.Random) -> GradedMorphism:
    """Random presentation of the shape, with degenerate cases mixed in."""
    from .graded import random_equivalent
    shape = catalogue_shape(chi, label)
    ent = [[Form.random(F, b - a, rng) if b >= a else Form.zero(F, b - a) for a in shape.source]
           for b in shape.target]
    kind = rng.randrange(5)
    z1, z2 = Form.zero(F, 1), Form.zero(F, 2)
    if (chi, label) == (3, "X0"):
        if kind == 1:
            ent[1][2] = ent[2][2] = z1                      # form 1
        elif kind == 2:
            ent[2][1] = z2; ent[2][2] = z1                   # form 2
        elif kind == 3:
            ent[0][2] = z1                                   # col3 of span 2
            if rng.random() < 0.5:
                ent[0][1] = ent[0][0].scale(F.random(rng))   # dependent kernel quadrics
    elif (chi, label) == (1, "X0"):
        if kind == 1:
            for i in range(3):
                ent[i][3] = z1                               # zero column
        elif kind == 2:
            for i in (1, 2):
                for j in (2, 3):
                    ent[i][j] = z1                           # 2 x 2 zero block
        elif kind == 3:
            for j in (1, 2, 3):
                ent[2][j] = z1                               # 1 x 3 zero block
        elif kind == 4:
            ell = Form.random(F, 1, rng)
            for i in range(3):
                ent[i][3] = ell.scale(F.random(rng))         # column inside one line
    elif (chi, label) == (0, "X0"):
        if kind in (1, 2, 3):
            k = rng.randint(1, 4)
            for i in range(k, 5):
                for j in range(k):
                    ent[i][j] = z1
    phi = GradedMorphism(shape.source, shape.target, ent, F)
    return random_equivalent(phi, rng, bound=F.p or 3).ascending()


@dataclass
class OracleComparison:
    space: ModuliSpace
    label: str
    prime: int
    trials: int
    agree: int = 0
    positives: int = 0
    disagreements: List[dict] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements and self.agree == self.trials

    def as_dict(self) -> dict:
        return {"agree": self.agree, "disagreements": self.disagreements, "label": self.label,
                "ok": self.ok, "positives": self.positives, "prime": self.prime,
                "space": str(self.space), "trials": self.trials}


def _oracle_chunk(args):
    chi, label, p, seeds = args
    from .linalg import GF
    F = GF(p)
    out = []
    for seed in seeds:
        rng = random.Random(seed)
        while True:
            phi = oracle_case(chi, label, F, rng)
            if chi != 0 or not determinant(phi).is_zero():
                break
        closed = battery_verdict(chi, label, phi)
        enum, witness = oracle_verdict(chi, label, phi)
        out.append((seed, closed, enum, phi, witness))
    return out


def oracle_compare(space: ModuliSpace, label: str, trials: int = 1000, prime: int = 5,
                   seed: int = 0, workers: int = 1) -> OracleComparison:
    """Run the closed-form battery and the enumeration on the same F_p matrices."""
    from .linalg import is_prime
    if (space.chi, label) not in ORACLE_SHAPES:
        raise StrataError(f"no oracle comparison for {space} {label}; "
                          f"available: {', '.join(f'M(5,{c}) {l}' for c, l in ORACLE_SHAPES)}")
    if not is_prime(prime) or prime < 5:
        raise StrataError("the oracle prime must be a prime >= 5")
    rng = random.Random(seed)
    seeds = [rng.getrandbits(63) for _ in range(trials)]
    nchunks = max(1, min(trials, workers * 4))
    chunks = [(space.chi, label, prime, seeds[i::nchunks]) for i in range(nchunks)]
    results = []
    for part in parallel_map(_oracle_chunk, chunks, workers):
        results.extend(part)
    results.sort(key=lambda r: seeds.index(r[0]))
    cmp = OracleComparison(space, label, prime, trials)
    for seed, closed, enum, phi, witness in results:
        cmp.positives += bool(enum)
        if closed == enum:
            cmp.agree += 1
        else:
            cmp.disagreements.append({
                "closed_form": closed, "enumeration": enum, "seed": seed,
                "matrix": [[e.to_text() for e in r] for r in phi.entries],
                "witness": None if witness is None else str(witness)})
    return cmp


# ---------------------------------------------------------------------------
# workers
# ---------------------------------------------------------------------------

def worker_count() -> int:
    """Worker cap from QUINTIC_STRATA_THREADS, else the available parallelism."""
    import os
    raw = os.environ.get("QUINTIC_STRATA_THREADS")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise StrataError("QUINTIC_STRATA_THREADS must be a positive integer") from None
        if n < 1:
            raise StrataError("QUINTIC_STRATA_THREADS must be a positive integer")
        return n
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def parallel_map(fn, items, workers: int):
    """Ordered map, in worker processes when more than one worker is allowed."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as ex:
        return list(ex.map(fn, items))


def _audit_one(args):
    chi, label, samples, seed = args
    return dimension_audit(ModuliSpace(chi), label, samples, seed)


def audit(space: Optional[ModuliSpace] = None, samples: int = 20, seed: int = 0,
          workers: int = 1) -> List[DimensionAudit]:
    rows = audit_rows(space)
    return parallel_map(_audit_one, [(s.chi, l, samples, seed) for s, l in rows], workers)
