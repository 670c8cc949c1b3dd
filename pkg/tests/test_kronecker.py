import random

import pytest

from quintic_strata.forms import Form, linear_span_dim, x_y_z
from quintic_strata.kronecker import (BudgetExceeded, KroneckerError, KroneckerModule,
                                      kernel_twist, king_semistable, king_stable,
                                      king_stable_verdict, minors_profile, row_support_dim,
                                      semistable_3x4, square_has_invariant_subspace)
from quintic_strata.gallery import linear_factor_module
from quintic_strata.linalg import GF, QQ

F5 = GF(5)


def diag(forms, F):
    n = len(forms)
    return KroneckerModule([[forms[i] if i == j else Form.zero(F, 1) for j in range(n)]
                            for i in range(n)], F)


def random_module(F, b, a, rng):
    return KroneckerModule([[Form.random(F, 1, rng) for _ in range(a)] for _ in range(b)], F)


def test_row_support():
    X, _, _ = x_y_z(F5)
    psi = diag([X] * 5, F5)
    assert row_support_dim(psi, [[1, 0, 0, 0, 0]]) == 1
    zero = KroneckerModule([[Form.zero(F5, 1)] * 3] * 2, F5)
    assert row_support_dim(zero, [[1, 1, 0]]) == 0


def test_scalar_diagonal_is_strictly_semistable():
    X, _, _ = x_y_z(F5)
    psi = diag([X] * 5, F5)
    assert king_semistable(psi).semistable
    assert not king_stable(psi)


def test_zero_column_destabilizes():
    rng = random.Random(1)
    psi = random_module(F5, 3, 4, rng)
    ent = [list(r) for r in psi.entries]
    for r in ent:
        r[2] = Form.zero(F5, 1)
    v = king_semistable(KroneckerModule(ent, F5))
    assert not v.semistable
    assert v.witness.row_support_dim == 0


def test_repeated_column_not_stable():
    rng = random.Random(2)
    ent = [list(r) for r in random_module(F5, 5, 5, rng).entries]
    for r in ent:
        r[4] = r[3]
    assert not king_stable(KroneckerModule(ent, F5))


def test_generic_square_mostly_stable():
    rng = random.Random(3)
    hits = sum(king_stable(random_module(F5, 5, 5, rng)) for _ in range(40))
    assert hits >= 36


def test_kernel_twist_generic_and_koszul():
    rng = random.Random(4)
    F = GF(10007)
    kt = kernel_twist(random_module(F, 3, 4, rng))
    assert kt.d == 5 and kt.g.degree == 0
    X, Y, Z = x_y_z(QQ)
    R, S, T = (Form.random(QQ, 1, rng) for _ in range(3))
    zero = Form.zero(QQ, 1)
    psi = KroneckerModule([[-Y, X, zero, R], [-Z, zero, X, S], [zero, -Z, Y, T]], QQ)
    kt = kernel_twist(psi)
    assert kt.d == 3 and kt.g.degree == 2
    assert kt.eta[3].is_zero()


def test_kernel_twist_linear_factor():
    rng = random.Random(5)
    psi = linear_factor_module(F5, rng, unstable=False)
    kt = kernel_twist(psi)
    assert kt.d == 4
    assert linear_span_dim(kt.minors) == 4


def test_kernel_twist_needs_rank_three():
    psi = KroneckerModule([[Form.zero(QQ, 1)] * 4] * 3, QQ)
    with pytest.raises(KroneckerError):
        kernel_twist(psi)


def test_minors_profile_examples():
    X, Y, Z = x_y_z(QQ)
    zero = Form.zero(QQ, 1)
    assert minors_profile([[X], [Y], [Z]]) == (3, None)
    # minors z^2, -y*z, x*z: independent, with the common factor z
    assert minors_profile([[-Y, X], [-Z, zero], [zero, -Z]]) == (3, Z)
    rng = random.Random(6)
    ell = X + 2 * Y
    ent = [[ell * Form.random(QQ, 0, rng) for _ in range(2)] for _ in range(3)]
    assert minors_profile(ent)[1] == ell.normalized() ** 2
    ent = [[ell.scale(rng.randint(1, 9)) if i == 0 else Form.random(QQ, 1, rng) for i in range(2)]
           for _ in range(3)]
    span, g = minors_profile(ent)
    assert g == ell.normalized()


def test_closed_form_3x4_matches_enumeration():
    rng = random.Random(7)
    for _ in range(60):
        psi = linear_factor_module(F5, rng) if rng.random() < 0.5 else random_module(F5, 3, 4, rng)
        assert semistable_3x4(psi) == king_semistable(psi).semistable


def test_invariant_subspace_rational_vs_enumeration():
    rng = random.Random(8)
    for _ in range(20):
        psi = random_module(F5, 5, 5, rng)
        if psi.determinant().is_zero():
            continue
        assert square_has_invariant_subspace(psi) == (not king_stable_verdict(psi).semistable)


def test_budget_is_enforced():
    rng = random.Random(9)
    with pytest.raises(BudgetExceeded):
        king_stable_verdict(random_module(GF(10007), 5, 5, rng), budget=10)


def test_verdict_unpacks():
    rng = random.Random(10)
    ok, witness = king_semistable(random_module(F5, 3, 4, rng), prime=5)
    assert isinstance(ok, bool)
