# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: rank over F_p and Grassmannian support scans."""
from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t

cdef enum:
    MAXN = 32


cdef int _rank_small(int64_t* m, int nrows, int ncols, int64_t p) nogil:
    # m is row-major nrows x ncols, destroyed in place
    cdef int r = 0, c, i, j, piv
    cdef int64_t inv, f, x, e, base, t
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if m[i * ncols + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(ncols):
                t = m[r * ncols + j]
                m[r * ncols + j] = m[piv * ncols + j]
                m[piv * ncols + j] = t
        # modular inverse by exponentiation
        inv = 1
        base = m[r * ncols + c]
        e = p - 2
        while e > 0:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        for i in range(r + 1, nrows):
            x = m[i * ncols + c]
            if x != 0:
                f = x * inv % p
                for j in range(c, ncols):
                    m[i * ncols + j] = (m[i * ncols + j] - f * m[r * ncols + j]) % p
                    if m[i * ncols + j] < 0:
                        m[i * ncols + j] += p
        r += 1
    return r


def rank_mod_p(rows, int ncols, long long p):
    cdef int nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return 0
    cdef int64_t* m = <int64_t*> malloc(nrows * ncols * sizeof(int64_t))
    cdef int i, j, r
    try:
        for i in range(nrows):
            row = rows[i]
            if len(row) != ncols:
                raise ValueError("row length differs from the column count")
            for j in range(ncols):
                m[i * ncols + j] = <int64_t> (row[j] % p)
        with nogil:
            r = _rank_small(m, nrows, ncols, p)
    finally:
        free(m)
    return r


cdef int _support(int64_t* coef, int b, int a, int64_t p, int q, int* basis,
                  int64_t* scratch) nogil:
    # images of the q basis vectors under the three coordinate slices,
    # stored as 3q rows of length b, then ranked
    cdef int t, k, i, j, row = 0
    cdef int64_t s
    for t in range(3):
        for k in range(q):
            for i in range(b):
                s = 0
                for j in range(a):
                    s = (s + coef[(t * b + i) * a + j] * basis[k * a + j]) % p
                scratch[row * b + i] = s
            row += 1
    return _rank_small(scratch, 3 * q, b, p)


def scan_subspaces(coef, int b, int a, long long p, int q, int bound):
    """Search Gr(q, F_p^a) for a subspace with row support at most ``bound``.

    Same contract as the pure-Python kernel.
    """
    if a > MAXN or b > MAXN:
        raise ValueError("module too large for the compiled scan")
    cdef int64_t ccoef[3 * MAXN * MAXN]
    cdef int basis[MAXN * MAXN]
    cdef int best_basis[MAXN * MAXN]
    cdef int64_t scratch[3 * MAXN * MAXN]
    cdef int pivots[MAXN]
    cdef int slot_r[MAXN * MAXN]
    cdef int slot_j[MAXN * MAXN]
    cdef int vals[MAXN * MAXN]
    cdef int ispivot[MAXN]
    cdef int nfree, k, r, j, s, best = -1, found = 0
    cdef int i
    for i in range(3 * b * a):
        ccoef[i] = coef[i] % p
    # iterate pivot combinations in lexicographic order
    for i in range(q):
        pivots[i] = i
    while True:
        for j in range(a):
            ispivot[j] = 0
        for r in range(q):
            ispivot[pivots[r]] = 1
        nfree = 0
        for r in range(q):
            for j in range(pivots[r] + 1, a):
                if not ispivot[j]:
                    slot_r[nfree] = r
                    slot_j[nfree] = j
                    nfree += 1
        for k in range(nfree):
            vals[k] = 0
        with nogil:
            while True:
                for k in range(q * a):
                    basis[k] = 0
                for r in range(q):
                    basis[r * a + pivots[r]] = 1
                for k in range(nfree):
                    basis[slot_r[k] * a + slot_j[k]] = vals[k]
                s = _support(ccoef, b, a, p, q, basis, scratch)
                if best < 0 or s < best:
                    best = s
                    for k in range(q * a):
                        best_basis[k] = basis[k]
                    if bound >= 0 and s <= bound:
                        found = 1
                        break
                k = 0
                while k < nfree:
                    vals[k] += 1
                    if vals[k] < p:
                        break
                    vals[k] = 0
                    k += 1
                if k == nfree:
                    break
        if found:
            break
        # next combination
        i = q - 1
        while i >= 0 and pivots[i] == a - q + i:
            i -= 1
        if i < 0:
            break
        pivots[i] += 1
        for j in range(i + 1, q):
            pivots[j] = pivots[j - 1] + 1
    if bound >= 0 and not found:
        return None, None
    witness = [[best_basis[r * a + j] for j in range(a)] for r in range(q)]
    return best, witness
