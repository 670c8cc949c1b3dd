import random

import pytest

from quintic_strata.forms import Form, parse_form, x_y_z
from quintic_strata.gallery import quintic_with_point, sample_stratum, twisted_structure_sheaf
from quintic_strata.graded import GradedMorphism, random_equivalent
from quintic_strata.linalg import GF, QQ
from quintic_strata.strata import (CATALOGUE, ModuliSpace, StrataError, canonical_dual_twist,
                                   catalogue_shape, classify, dimension_audit, dual_classify,
                                   kronecker_moduli_dimension, normalize_sublabel, oracle_compare,
                                   shift, stabilizer_dimension, worker_count)

from frozen import AUDIT, CODIM, DUAL_SPACE, KRONECKER, MODULI_DIM, NOT_INJECTIVE, ROWS, SHAPES

X, Y, Z = x_y_z()


def test_space_parsing():
    assert ModuliSpace.parse("M(5,3)") == ModuliSpace(3)
    assert str(ModuliSpace(0)) == "M(5,0)"
    for bad in ("M(4,1)", "M5,1", ""):
        with pytest.raises(StrataError):
            ModuliSpace.parse(bad)


@pytest.mark.parametrize("key", sorted(SHAPES))
def test_catalogue_matches_frozen(key):
    s = catalogue_shape(*key)
    assert (s.source, s.target) == SHAPES[key]
    assert s.row == ROWS[key]
    assert s.codim == CODIM[key]
    w, g, _ = AUDIT[key]
    assert (s.dim_W(), s.dim_G()) == (w, g)


def test_sublabel_aliases():
    assert normalize_sublabel("X0∖X01") == "X00"
    assert normalize_sublabel("X0\\X01") == "X00"
    assert normalize_sublabel(None) is None
    with pytest.raises(StrataError):
        normalize_sublabel("X9")


@pytest.mark.parametrize("src,tgt,rows", NOT_INJECTIVE)
def test_counterexamples_not_injective(src, tgt, rows):
    phi = GradedMorphism(src, tgt, [[parse_form(c, QQ) for c in r.split(",")] for r in rows])
    rep = classify(phi)
    assert rep.label == "NotInjective"
    assert rep.determinant.is_zero()


def test_quintic_with_point_is_closed_stratum():
    rng = random.Random(0)
    f1, f2 = Form.random(QQ, 4, rng), Form.random(QQ, 4, rng)
    rep = classify(quintic_with_point(X, Y, f1, f2), ModuliSpace(1))
    assert rep.label == "X3"


def test_quintic_structure_sheaf():
    rep = classify(twisted_structure_sheaf(X ** 5 + Y ** 5 + Z ** 5), ModuliSpace(0))
    assert rep.label == "X3"


def test_diagonal_m50_is_strictly_semistable():
    zero = Form.zero(QQ, 1)
    d = [X, Y, Z, X + Y, Y + Z]
    phi = GradedMorphism([-2] * 5, [-1] * 5,
                         [[d[i] if i == j else zero for j in range(5)] for i in range(5)])
    rep = classify(phi, ModuliSpace(0))
    assert rep.label == "X0" and rep.sublabel == "strictly-semistable"


def test_wrong_shape_and_space_mismatch():
    phi = GradedMorphism([-1], [0], [[X]])
    assert classify(phi).label == "WrongShape"
    q = twisted_structure_sheaf(X ** 5 + Y ** 5 + Z ** 5)
    assert classify(q, ModuliSpace(3)).label == "WrongShape"


def test_shift_normalizes_chi():
    phi = sample_stratum(3, "X1", seed=1)
    rep = classify(shift(phi, 1))            # chi 8 -> reported in M(5,3)
    assert rep.label == "X1"
    assert rep.warnings


def test_report_dict_is_sorted_and_rational_strings():
    rep = classify(sample_stratum(1, "X2", seed=0), ModuliSpace(1))
    d = rep.as_dict()
    assert list(d) == sorted(d)
    assert d["hilbert"]["slope"] == "1/5"


@pytest.mark.parametrize("key", sorted(ROWS))
def test_classify_recovers_sampled_stratum(key):
    chi, label = key
    rng = random.Random(7)
    for seed in range(3):
        phi = random_equivalent(sample_stratum(chi, label, seed=seed), rng)
        rep = classify(phi.ascending(), ModuliSpace(chi))
        assert rep.label == label
        assert rep.signature.triple() == ROWS[key]


@pytest.mark.parametrize("chi,label,sub", [
    (3, "X0", "X01"), (3, "X2", "X21"), (1, "X0", "X01"), (1, "X0", "X02"),
    (1, "X1", "X11"), (0, "X0", "strictly-semistable"), (3, "X0", "X00"), (0, "X0", "stable")])
def test_sublabels(chi, label, sub):
    rep = classify(sample_stratum(chi, label, sub, seed=3), ModuliSpace(chi))
    assert (rep.label, rep.sublabel) == (label, sub)


@pytest.mark.parametrize("key", sorted(ROWS))
def test_duality_lands_in_dual_space(key):
    chi, label = key
    phi = sample_stratum(chi, label, seed=4)
    dspace, rep = dual_classify(ModuliSpace(chi), phi)
    assert dspace.chi == DUAL_SPACE[chi]
    assert rep.label == label


def test_canonical_dual_twist():
    assert [canonical_dual_twist(c) for c in (0, 1, 2, 3, 4)] == [0, 1, 1, 1, 1]


def test_stabilizer_dimension_generic():
    for key, (_, _, stab) in AUDIT.items():
        assert stabilizer_dimension(sample_stratum(key[0], key[1], seed=0)) == stab


@pytest.mark.parametrize("key", [(3, "X1"), (0, "X2"), (1, "X3")])
def test_dimension_audit_rows(key):
    a = dimension_audit(ModuliSpace(key[0]), key[1], samples=3)
    assert a.ok
    assert a.stratum_dim == MODULI_DIM - CODIM[key]


def test_kronecker_moduli():
    for (n, a, b), d in KRONECKER.items():
        assert kronecker_moduli_dimension(n, a, b) == d


def test_oracle_compare_small():
    res = oracle_compare(ModuliSpace(1), "X0", trials=30, prime=5, seed=1)
    assert res.ok and res.agree == 30
    with pytest.raises(StrataError):
        oracle_compare(ModuliSpace(1), "X2", trials=1)
    with pytest.raises(StrataError):
        oracle_compare(ModuliSpace(1), "X0", trials=1, prime=3)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("QUINTIC_STRATA_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("QUINTIC_STRATA_THREADS", "zero")
    with pytest.raises(StrataError):
        worker_count()
    monkeypatch.delenv("QUINTIC_STRATA_THREADS")
    assert worker_count() >= 1


def test_classify_over_finite_field():
    phi = sample_stratum(3, "X2", seed=0, field=GF(10007))
    assert classify(phi, ModuliSpace(3)).label == "X2"


def test_catalogue_covers_dual_spaces():
    assert set(CATALOGUE) >= {0, 1, 2, 3, 4}
