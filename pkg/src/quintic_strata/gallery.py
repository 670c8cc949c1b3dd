"""Named families of presentations and seeded stratum samplers."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional

from .forms import Form, exact_div, gcd_list, linear_span_dim, x_y_z
from .graded import GradedMorphism, GradingError, minimize, minors_of, random_equivalent
from .kronecker import KroneckerModule
from .linalg import QQ, Field, random_invertible
from .strata import (ModuliSpace, Shape, StrataError, catalogue_shape, classify,
                     normalize_sublabel)


class GalleryError(ValueError):
    pass


class SamplingError(GalleryError):
    pass


DEFAULT_BOUND = 10
DEFAULT_PRIME = 10007
DEFAULT_RETRIES = 20


# ---------------------------------------------------------------------------
# explicit families
# ---------------------------------------------------------------------------

def quintic_with_point(l1: Form, l2: Form, f1: Form, f2: Form) -> GradedMorphism:
    """[[l1, l2], [f1, f2]] : 2O(-3) -> O(-2) + O(1)."""
    if l1.degree != 1 or l2.degree != 1 or f1.degree != 4 or f2.degree != 4:
        raise GalleryError("need two one-forms and two quartics")
    if linear_span_dim([l1, l2]) != 2:
        raise GalleryError("the one-forms are dependent")
    if (l1 * f2 - l2 * f1).is_zero():
        raise GalleryError("l1*f2 - l2*f1 vanishes")
    return GradedMorphism([-3, -3], [-2, 1], [[l1, l2], [f1, f2]], l1.field)


def twisted_structure_sheaf(f: Form) -> GradedMorphism:
    """[f] : O(-4) -> O(1), presenting O_C(1) for the quintic C = {f = 0}."""
    if f.is_zero() or f.degree != 5:
        raise GalleryError("need a nonzero quintic")
    return GradedMorphism([-4], [1], [[f]], f.field)


def flag_section(g: Form, h: Form) -> GradedMorphism:
    """[[h1/g, X], [-h2, g]] : O(-3) + O(-1) -> O + O(1), where h = h1(Y,Z) + X*h2.

    The determinant is h.
    """
    F = g.field
    if g.is_zero() or g.degree != 2 or 0 in g.variables():
        raise GalleryError("g must be a nonzero quadratic form in Y, Z")
    if h.degree != 5:
        raise GalleryError("h must be a quintic")
    h1 = Form(F, 5, {e: c for e, c in h.terms.items() if e[0] == 0})
    rest = h - h1
    X = Form.var("x", F)
    h2 = exact_div(rest, X) if rest.terms else Form.zero(F, 4)
    q = exact_div(h1, g) if h1.terms else Form.zero(F, 3)
    if q is None:
        raise GalleryError("g does not divide the X-free part of h")
    return GradedMorphism([-3, -1], [0, 1], [[q, X], [-h2.with_degree(4), g]], F)


def extension_block(phi_sub: GradedMorphism, phi_quot: GradedMorphism,
                    delta: GradedMorphism) -> GradedMorphism:
    """[[phi_quot, 0], [delta, phi_sub]] followed by ``minimize``.

    ``delta`` maps source(phi_quot) to target(phi_sub).
    """
    F = phi_sub.field
    if phi_quot.field != F or delta.field != F:
        raise GradingError("field mismatch in extension_block")
    if tuple(delta.source) != tuple(phi_quot.source) or tuple(delta.target) != tuple(phi_sub.target):
        raise GradingError("delta must map source(phi_quot) to target(phi_sub)")
    src = list(phi_quot.source) + list(phi_sub.source)
    tgt = list(phi_quot.target) + list(phi_sub.target)
    rows = []
    for i in range(phi_quot.nrows):
        rows.append(list(phi_quot.entries[i]) + [0] * phi_sub.ncols)
    for i in range(phi_sub.nrows):
        rows.append(list(delta.entries[i]) + list(phi_sub.entries[i]))
    block = GradedMorphism(src, tgt, rows, F).require_valid()
    return minimize(block)


def linear_factor_module(F: Field, rng: random.Random, unstable: Optional[bool] = None,
                         retry_cap: int = DEFAULT_RETRIES) -> KroneckerModule:
    """A 3 x 4 module of linear forms whose maximal minors have a linear gcd.

    Two families, hidden by random coordinates and base changes:
    a pencil [Y Z] + [Y; Z] plus X times constants, whose minors are
    independent, and a 1 x 3 zero block, whose minors are the corner
    entry times the 2 x 2 minors of the remaining rows.
    """
    if unstable is None:
        unstable = rng.random() < 0.5
    X, Y, Z = x_y_z(F)
    zero = Form.zero(F, 1)
    for _ in range(retry_cap):
        if unstable:
            ent = [[Form.random(F, 1, rng) for _ in range(4)] for _ in range(2)]
            ent.append([Form.random(F, 1, rng), zero, zero, zero])
        else:
            m0 = [[zero, Y, Z, zero], [zero, zero, zero, Y], [zero, zero, zero, Z]]
            ent = [[m0[i][j] + X.scale(F.random(rng)) for j in range(4)] for i in range(3)]
        coords = _random_coordinates(F, rng)
        ent = [[e.substitute(coords) if e.terms else e for e in r] for r in ent]
        A = random_invertible(F, 3, rng, 3)
        B = random_invertible(F, 4, rng, 3)
        out = []
        for i in range(3):
            row = []
            for j in range(4):
                acc = zero
                for k in range(3):
                    for l in range(4):
                        if ent[k][l].terms:
                            acc = acc + ent[k][l].scale(F.mul(A[i, k], B[l, j]))
                row.append(acc)
            out.append(row)
        minors = minors_of(out, F)
        if any(m.terms for m in minors) and gcd_list(minors).degree == 1:
            return KroneckerModule(out, F)
    raise SamplingError("no module with a linear minor gcd")


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampleRequest:
    space: ModuliSpace
    label: str
    sublabel: Optional[str] = None
    seed: int = 0
    field: Field = QQ
    coefficient_bound: int = DEFAULT_BOUND
    retry_cap: int = DEFAULT_RETRIES

    def __post_init__(self):
        if self.retry_cap < 1:
            raise GalleryError("retry_cap must be at least 1")


def random_fill(shape: Shape, field: Field, rng: random.Random, bound: int = DEFAULT_BOUND) -> List[List[Form]]:
    """Random entries for a catalogue shape; forced-zero blocks stay zero."""
    out = []
    for i, b in enumerate(shape.target):
        row = []
        for j, a in enumerate(shape.source):
            d = b - a
            if d < 0 or shape.forced_zero(i, j):
                row.append(Form.zero(field, d))
            else:
                row.append(Form.random(field, d, rng, bound))
        out.append(row)
    return out


def _random_coordinates(F: Field, rng: random.Random):
    g = random_invertible(F, 3, rng, 3)
    return [Form.linear([g[i, 0], g[i, 1], g[i, 2]], F) for i in range(3)]


def _lin(F, rng, bound):
    return Form.random(F, 1, rng, bound)


def _special(chi: int, label: str, sub: str, F: Field, rng: random.Random, bound: int):
    """Normal forms for the positive-codimension sub-strata."""
    shape = catalogue_shape(chi, label)
    ent = random_fill(shape, F, rng, bound)
    if (chi, label, sub) == (3, "X0", "X01"):
        ent[0][2] = Form.zero(F, 1)
    elif (chi, label, sub) == (3, "X2", "X21"):
        l, a, b = (_lin(F, rng, bound) for _ in range(3))
        ent[0][:3] = [l, Form.zero(F, 1), a]
        ent[1][:3] = [Form.zero(F, 1), l, b]
    elif (chi, label, sub) == (1, "X0", "X01"):
        # on the line X = 0 the module restricts to [Y Z] + [Y; Z], of rank 2,
        # so every maximal minor is divisible by X
        X, Y, Z = x_y_z(F)
        zero = Form.zero(F, 1)
        m0 = [[zero, Y, Z, zero], [zero, zero, zero, Y], [zero, zero, zero, Z]]
        coords = _random_coordinates(F, rng)
        for i in range(3):
            for j in range(4):
                e = m0[i][j] + X.scale(F.random(rng, bound))
                ent[i][j] = e.substitute(coords) if e.terms else e
    elif (chi, label, sub) == (1, "X0", "X02"):
        X, Y, Z = x_y_z(F)
        R, S, T = (_lin(F, rng, bound) for _ in range(3))
        zero = Form.zero(F, 1)
        ent[0][:4] = [-Y, X, zero, R]
        ent[1][:4] = [-Z, zero, X, S]
        ent[2][:4] = [zero, -Z, Y, T]
    elif (chi, label, sub) == (1, "X1", "X11"):
        l, m1, m2 = (_lin(F, rng, bound) for _ in range(3))
        ent[0][1] = l * m1
        ent[1][1] = l * m2
    elif (chi, label, sub) == (0, "X0", "strictly-semistable"):
        k = rng.randint(1, 4)
        for i in range(k, 5):
            for j in range(k):
                ent[i][j] = Form.zero(F, 1)
    else:
        return None
    phi = GradedMorphism(shape.source, shape.target, ent, F)
    # hide the normal form inside its orbit
    return random_equivalent(phi, rng, bound=3)


_GENERIC_SUBLABELS = {(3, "X0"): "X00", (3, "X2"): "X20", (1, "X0"): "X00", (1, "X1"): "X10",
                      (0, "X0"): "stable"}


def sample_stratum(space, label: Optional[str] = None, sublabel: Optional[str] = None, seed: int = 0,
                   field: Field = QQ, bound: int = DEFAULT_BOUND,
                   retry_cap: int = DEFAULT_RETRIES) -> GradedMorphism:
    """A presentation whose cokernel lies in the requested (sub)stratum.

    Generic strata are filled at random and rejected until ``classify``
    agrees; positive-codimension sub-strata start from their normal form.
    For chi = 2, 4 the dual of a sample of M(5, 5 - chi) is returned.
    """
    if isinstance(space, int):
        space = ModuliSpace(space)
    if isinstance(space, SampleRequest):
        if label is not None:
            raise GalleryError("pass either a SampleRequest or a space and label")
        return sample_stratum(space.space, space.label, space.sublabel, space.seed,
                              space.field, space.coefficient_bound, space.retry_cap)
    if label is None:
        raise GalleryError("a stratum label is required")
    sub = normalize_sublabel(sublabel)
    try:
        catalogue_shape(space.chi, label)
    except StrataError as exc:
        raise SamplingError(str(exc)) from None
    if retry_cap < 1:
        raise GalleryError("retry_cap must be at least 1")
    rng = random.Random(seed)
    chi = space.chi
    if chi in (2, 4):
        from .graded import dual_resolution
        base = sample_stratum(ModuliSpace(5 - chi), label, sub, seed, field, bound, retry_cap)
        return dual_resolution(base, 1).ascending()
    shape = catalogue_shape(chi, label)
    generic = sub is None or sub == _GENERIC_SUBLABELS.get((chi, label))
    for _ in range(retry_cap):
        if generic:
            phi = GradedMorphism(shape.source, shape.target, random_fill(shape, field, rng, bound), field)
        else:
            phi = _special(chi, label, sub, field, rng, bound)
            if phi is None:
                raise SamplingError(f"no sub-label {sub} in {space} {label}")
        rep = classify(phi, space)
        if rep.label == label and (sub is None or rep.sublabel == sub):
            return phi
    raise SamplingError(f"no sample of {space} {label}{'/' + sub if sub else ''} "
                        f"after {retry_cap} attempts")
