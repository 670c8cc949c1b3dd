"""Pure-Python versions of the hot kernels (used when the extension is absent)."""
from itertools import combinations


def rank_mod_p(rows, ncols, p):
    rows = [[x % p for x in r] for r in rows]
    n = len(rows)
    r = 0
    for c in range(ncols):
        if r == n:
            break
        piv = -1
        for i in range(r, n):
            if rows[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = pow(prow[c], -1, p)
        for i in range(r + 1, n):
            x = rows[i][c]
            if x:
                f = x * inv % p
                row = rows[i]
                rows[i] = [(u - f * v) % p for u, v in zip(row, prow)]
        r += 1
    return r


def _rref_points(a, q, p):
    """Yield every q-dimensional subspace of F_p^a as its RREF basis."""
    for pivots in combinations(range(a), q):
        slots = []
        for r, c in enumerate(pivots):
            for j in range(c + 1, a):
                if j not in pivots:
                    slots.append((r, j))
        nfree = len(slots)
        vals = [0] * nfree
        while True:
            basis = [[0] * a for _ in range(q)]
            for r, c in enumerate(pivots):
                basis[r][c] = 1
            for (r, j), v in zip(slots, vals):
                basis[r][j] = v
            yield basis
            k = 0
            while k < nfree:
                vals[k] += 1
                if vals[k] < p:
                    break
                vals[k] = 0
                k += 1
            if k == nfree:
                break


def support_dim(coef, b, a, p, basis):
    vecs = []
    for t in range(3):
        base = t * b * a
        for s in basis:
            vecs.append([sum(coef[base + i * a + j] * s[j] for j in range(a)) % p for i in range(b)])
    return rank_mod_p(vecs, b, p)


def scan_subspaces(coef, b, a, p, q, bound):
    """Search Gr(q, F_p^a) for a subspace whose row support is at most ``bound``.

    Returns ``(support, basis)`` for the first hit.  With ``bound < 0`` the
    whole Grassmannian is scanned and the minimum is returned.
    """
    best, witness = None, None
    for basis in _rref_points(a, q, p):
        s = support_dim(coef, b, a, p, basis)
        if best is None or s < best:
            best, witness = s, basis
            if bound >= 0 and s <= bound:
                return s, witness
    if bound >= 0:
        return None, None
    return best, witness
