"""Cohomology of F = coker(phi) from the section spaces of the two sums."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

from .forms import Form, h0, monomial_index, monomials
from .graded import GradedMorphism, determinant, hilbert
from .linalg import Field, Matrix, echelon, rank_rows


class CohomologyError(ValueError):
    pass


@dataclass(frozen=True)
class CohomologySignature:
    h0_minus1: int
    h1: int
    h0_omega: int
    h1_omega: int

    def triple(self):
        return (self.h0_minus1, self.h1, self.h0_omega)

    def dual_triple(self):
        """(h0(F(-1)), h1(F), h1(F x Omega(1))), the form used for dual strata."""
        return (self.h0_minus1, self.h1, self.h1_omega)

    def as_dict(self):
        return {"h0_minus1": self.h0_minus1, "h0_omega": self.h0_omega,
                "h1": self.h1, "h1_omega": self.h1_omega}


def _mult_columns(f: Form, src_deg: int, tgt_deg: int) -> List[dict]:
    """Sparse columns of multiplication by f from S_src to S_tgt."""
    idx = monomial_index(tgt_deg)
    cols = []
    for m in monomials(src_deg):
        col = {}
        for (a, b, c), v in f.terms.items():
            col[idx[(a + m[0], b + m[1], c + m[2])]] = v
        cols.append(col)
    return cols


def section_rows(phi: GradedMorphism, m: int) -> list:
    """Raw rows of H0(phi(m)) in grlex monomial bases."""
    F = phi.field
    row_off, r = [], 0
    for b in phi.target:
        row_off.append(r)
        r += h0(b + m)
    nrows = r
    col_off, c = [], 0
    for a in phi.source:
        col_off.append(c)
        c += h0(a + m)
    ncols = c
    rows = [[F.zero] * ncols for _ in range(nrows)]
    for i, b in enumerate(phi.target):
        if b + m < 0:
            continue
        for j, a in enumerate(phi.source):
            if a + m < 0:
                continue
            e = phi.entries[i][j]
            if not e.terms:
                continue
            for k, col in enumerate(_mult_columns(e, a + m, b + m)):
                for t, v in col.items():
                    rows[row_off[i] + t][col_off[j] + k] = v
    return rows, nrows, ncols


def section_matrix(phi: GradedMorphism, m: int) -> Matrix:
    """Matrix of H0(phi(m)): H0(A(m)) -> H0(B(m))."""
    rows, nrows, ncols = section_rows(phi, m)
    return Matrix._raw(phi.field, rows, ncols)


def _rank(field: Field, rows, nrows, ncols) -> int:
    if nrows == 0 or ncols == 0:
        return 0
    if nrows > ncols:
        rows = [list(c) for c in zip(*rows)]
        nrows, ncols = ncols, nrows
    return rank_rows(field, rows, ncols)


def _require_injective(phi: GradedMorphism, check: bool):
    if check:
        if not phi.is_square:
            raise CohomologyError("cohomology needs a square morphism")
        if determinant(phi).is_zero():
            raise CohomologyError("morphism is not injective")


def h0_twist(phi: GradedMorphism, m: int, check: bool = True) -> int:
    """h0(F(m)) = h0(B(m)) - h0(A(m))."""
    _require_injective(phi, check)
    return phi.target.h0(m) - phi.source.h0(m)


def serre_dual(phi: GradedMorphism) -> GradedMorphism:
    """phi transposed as a map B^v -> A^v."""
    return GradedMorphism([-b for b in phi.target], [-a for a in phi.source],
                          phi.transpose_entries(), phi.field)


def h1_twist(phi: GradedMorphism, m: int, check: bool = True) -> int:
    """h1(F(m)) as the kernel of H2(A(m)) -> H2(B(m)), read through Serre duality.

    Also asserts that this map is onto, i.e. h2(F(m)) = 0.
    """
    _require_injective(phi, check)
    rows, nrows, ncols = section_rows(serre_dual(phi), -3 - m)
    r = _rank(phi.field, rows, nrows, ncols)
    if r != ncols:
        raise CohomologyError(f"h2(F({m})) = {ncols - r} != 0; cokernel is not a torsion sheaf")
    return nrows - r


def _coordinate_images(phi: GradedMorphism, vec: list) -> list:
    """X*v, Y*v, Z*v for v in H0(B) given in monomial coordinates."""
    F = phi.field
    out = []
    for t in range(3):
        img = []
        off = 0
        for b in phi.target:
            n0, n1 = h0(b), h0(b + 1)
            part = [F.zero] * n1
            if n0:
                idx = monomial_index(b + 1)
                for k, mon in enumerate(monomials(b)):
                    v = vec[off + k]
                    if v:
                        e = list(mon)
                        e[t] += 1
                        part[idx[tuple(e)]] = v
            img.extend(part)
            off += n0
        out.append(img)
    return out


def h0_omega(phi: GradedMorphism, check: bool = True) -> int:
    """h0(F x Omega(1)) as the kernel of V x H0(F) -> H0(F(1))."""
    _require_injective(phi, check)
    F = phi.field
    rows0, n0, c0 = section_rows(phi, 0)
    # complement of the image of H0(A) in H0(B): standard vectors off the pivots
    cols0 = [list(c) for c in zip(*rows0)] if c0 else []
    piv = set(echelon(F, cols0, n0, reduce_above=False)[1]) if cols0 else set()
    comp = [c for c in range(n0) if c not in piv]
    if not comp:
        return 0
    rows1, n1, c1 = section_rows(phi, 1)
    image_cols = [list(c) for c in zip(*rows1)] if c1 else []
    r1 = rank_rows(F, image_cols, n1) if image_cols else 0
    mult = []
    for c in comp:
        e = [F.zero] * n0
        e[c] = F.one
        mult.extend(_coordinate_images(phi, e))
    r_all = rank_rows(F, image_cols + mult, n1)
    return 3 * len(comp) - (r_all - r1)


def h1_omega(phi: GradedMorphism, check: bool = True) -> int:
    """h1(F x Omega(1)) from the Euler characteristic 2*chi - r."""
    hd = hilbert(phi)
    return h0_omega(phi, check) - (2 * hd.chi - hd.r)


def signature(phi: GradedMorphism, check: bool = True) -> CohomologySignature:
    """(h0(F(-1)), h1(F), h0(F x Omega(1))) plus h1(F x Omega(1)).

    The Euler relations at twists -1 and 0 are verified on the way.
    """
    _require_injective(phi, check)
    hd = hilbert(phi)
    a = h0_twist(phi, -1, False)
    b = h1_twist(phi, 0, False)
    if a - h1_twist(phi, -1, False) != hd.chi - hd.r:
        raise CohomologyError("Euler relation fails at twist -1")
    if h0_twist(phi, 0, False) - b != hd.chi:
        raise CohomologyError("Euler relation fails at twist 0")
    w = h0_omega(phi, False)
    return CohomologySignature(a, b, w, w - (2 * hd.chi - hd.r))
