# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled finite-field kernel; see _core_py for the reference semantics.

Everything runs on C int64 scratch buffers: building the block-Toeplitz
multiplication matrices, forward elimination mod p, the early exit once a
twist becomes surjective, and the multiplicity recursion. Output must
match fanostrata._core_py exactly.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef long long _inv_mod(long long a, long long p) noexcept:
    # Fermat inverse by fast exponentiation; p prime, a nonzero mod p.
    cdef long long result = 1
    cdef long long base = a % p
    cdef long long e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


cdef int _rank_mod_p(long long* mat, int rows, int cols, long long p) noexcept:
    cdef int r = 0, c, i, j, pr
    cdef long long inv, f
    cdef long long* row_r
    cdef long long* row_i
    for c in range(cols):
        pr = -1
        for i in range(r, rows):
            if mat[i * cols + c] % p != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(cols):
                f = mat[r * cols + j]
                mat[r * cols + j] = mat[pr * cols + j]
                mat[pr * cols + j] = f
        row_r = mat + r * cols
        inv = _inv_mod(row_r[c], p)
        for i in range(r + 1, rows):
            row_i = mat + i * cols
            if row_i[c] % p != 0:
                f = row_i[c] * inv % p
                for j in range(c, cols):
                    row_i[j] = (row_i[j] - f * row_r[j]) % p
                    if row_i[j] < 0:
                        row_i[j] += p
        r += 1
        if r == rows:
            break
    return r


cdef void _build_twist(const long long* coeffs, int n, int d, int i,
                       long long p, long long* mat) noexcept:
    cdef int rows = d + i + 1
    cdef int width = i + 2
    cdef int cols = width * (n - 1)
    cdef int j, s, t, col
    cdef long long v
    for t in range(rows * cols):
        mat[t] = 0
    for j in range(n - 1):
        for s in range(width):
            col = j * width + s
            for t in range(d):
                v = coeffs[j * d + t] % p
                if v < 0:
                    v += p
                mat[(s + t) * cols + col] = v


cdef int _profile_and_mults(const long long* coeffs, int n, int d, long long p,
                            long long* scratch, long long* h,
                            cnp.int16_t* mults) noexcept:
    """Fill h[0..d] and mults[0..d-1]; return 0 on success, -1 if invalid."""
    cdef int i, rows, cols, rank, k, v
    cdef bint surjective = False
    cdef long long acc, total, weighted
    for i in range(-1, d):
        rows = d + i + 1
        cols = (i + 2) * (n - 1)
        if surjective:
            h[i + 1] = cols - rows
            continue
        _build_twist(coeffs, n, d, i, p, scratch)
        rank = _rank_mod_p(scratch, rows, cols, p)
        h[i + 1] = cols - rank
        if rank == rows:
            surjective = True
    mults[0] = <cnp.int16_t> h[0]
    if d >= 2:
        mults[1] = <cnp.int16_t> (h[1] - 2 * h[0])
    for k in range(2, d):
        acc = 0
        for v in range(k):
            acc += mults[v] * (1 - v + k)
        mults[k] = <cnp.int16_t> (h[k] - acc)
    total = 0
    weighted = 0
    for k in range(d):
        if mults[k] < 0:
            return -1
        total += mults[k]
        weighted += (1 - k) * mults[k]
    if total != n - 2 or weighted != n - d - 1:
        return -1
    if h[d] != (n - 2) * d + (n - d - 1):
        return -1
    return 0


def h_profile(coeffs, int n, int d, long long p):
    """Kernel dimensions h_i for i = -1 .. d-1 of one coefficient row."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] row = \
        np.ascontiguousarray(coeffs, dtype=np.int64)
    if row.shape[0] != (n - 1) * d:
        raise ValueError("coefficient row has wrong length")
    cdef int rows_max = 2 * d
    cdef int cols_max = (d + 1) * (n - 1)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] scratch = \
        np.empty(rows_max * cols_max, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] h = np.empty(d + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int16_t, ndim=1] m = np.empty(d, dtype=np.int16)
    _profile_and_mults(<const long long*> row.data, n, d, p,
                       <long long*> scratch.data,
                       <long long*> h.data, <cnp.int16_t*> m.data)
    return [int(v) for v in h]


def batch_multiplicities(coeffs, int n, int d, long long p):
    """Splitting multiplicities per row; -1 in column 0 marks invalid rows."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2] arr = \
        np.ascontiguousarray(coeffs, dtype=np.int64)
    if arr.shape[1] != (n - 1) * d:
        raise ValueError("coefficient rows have wrong length")
    cdef Py_ssize_t trials = arr.shape[0]
    cdef int rows_max = 2 * d
    cdef int cols_max = (d + 1) * (n - 1)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] scratch = \
        np.empty(rows_max * cols_max, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] h = np.empty(d + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int16_t, ndim=2] out = np.empty((trials, d), dtype=np.int16)
    cdef Py_ssize_t t
    cdef int k, status
    cdef long long* sp = <long long*> scratch.data
    cdef long long* hp = <long long*> h.data
    for t in range(trials):
        status = _profile_and_mults(<const long long*> arr.data + t * arr.shape[1],
                                    n, d, p, sp, hp, &out[t, 0])
        if status < 0:
            out[t, 0] = -1
            for k in range(1, d):
                out[t, k] = 0
    return out
