"""Time the compiled kernels against the pure-Python ones.

    python bench/bench_kernels.py [--repeat N] [--seed S]

Both backends are fed identical inputs and must return identical results;
a mismatch aborts with exit status 1.
"""
import argparse
import random
import sys
import time

from quintic_strata import _kernels_py

try:
    from quintic_strata import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def _rank_inputs(rng, count, n, p):
    return [[[rng.randrange(p) for _ in range(n)] for _ in range(n)] for _ in range(count)]


def _scan_inputs(rng, count, b, a, p):
    return [[rng.randrange(p) for _ in range(3 * b * a)] for _ in range(count)]


def _time(fn, inputs):
    t0 = time.perf_counter()
    out = [fn(x) for x in inputs]
    return time.perf_counter() - t0, out


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _kernels_c is None:
        print("compiled kernels not built; nothing to compare")
        return 0
    rng = random.Random(args.seed)
    cases = []
    for n, p in ((20, 5), (60, 10007)):
        inp = _rank_inputs(rng, args.repeat, n, p)
        cases.append((f"rank_mod_p {n}x{n} mod {p}", inp,
                      lambda m, p=p, n=n: _kernels_py.rank_mod_p(m, n, p),
                      lambda m, p=p, n=n: _kernels_c.rank_mod_p(m, n, p)))
    for b, a, q in ((3, 4, 2), (5, 5, 2), (5, 5, 3)):
        inp = _scan_inputs(rng, max(1, args.repeat // 10), b, a, 5)
        cases.append((f"scan_subspaces Gr({q},{a}) b={b} mod 5", inp,
                      lambda c, b=b, a=a, q=q: _kernels_py.scan_subspaces(c, b, a, 5, q, -1)[0],
                      lambda c, b=b, a=a, q=q: _kernels_c.scan_subspaces(c, b, a, 5, q, -1)[0]))
    print(f"{'kernel':40s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, inp, py, cy in cases:
        tp, op = _time(py, inp)
        tc, oc = _time(cy, inp)
        if op != oc:
            print(f"{name}: backends disagree", file=sys.stderr)
            return 1
        print(f"{name:40s} {tp:10.4f} {tc:10.4f} {tp / max(tc, 1e-9):8.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
