import random

import pytest

from quintic_strata import _kernels_py, kernels

try:
    from quintic_strata import _kernels as compiled
except ImportError:  # pragma: no cover
    compiled = None


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.skipif(compiled is None, reason="extension not built")
def test_rank_backends_agree():
    rng = random.Random(0)
    for _ in range(200):
        n, m = rng.randint(1, 8), rng.randint(1, 8)
        p = rng.choice([5, 7, 10007])
        rows = [[rng.randrange(p) for _ in range(m)] for _ in range(n)]
        assert compiled.rank_mod_p(rows, m, p) == _kernels_py.rank_mod_p(rows, m, p)


@pytest.mark.skipif(compiled is None, reason="extension not built")
def test_scan_backends_agree():
    rng = random.Random(1)
    for _ in range(30):
        b, a = rng.choice([(3, 4), (4, 3), (3, 3)])
        coef = [rng.randrange(5) for _ in range(3 * b * a)]
        for q in range(1, a):
            assert (compiled.scan_subspaces(coef, b, a, 5, q, -1)[0]
                    == _kernels_py.scan_subspaces(coef, b, a, 5, q, -1)[0])


@pytest.mark.skipif(compiled is None, reason="extension not built")
def test_short_row_is_rejected():
    with pytest.raises(ValueError):
        compiled.rank_mod_p([[1, 2]], 3, 5)


def test_python_rank():
    assert _kernels_py.rank_mod_p([[1, 2], [2, 4]], 2, 7) == 1
    assert _kernels_py.rank_mod_p([[1, 2], [3, 1]], 2, 5) == 1
