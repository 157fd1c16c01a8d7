"""Pure-Python finite-field kernel: rank profiles of the multiplication
matrices of a tuple of binary forms, and splitting-type multiplicities in
batch. fanostrata._core is the compiled twin; the two must produce
identical output bit for bit, which the test suite checks.

The matrix in twist i has d+i+1 rows (monomials of degree d+i, indexed by
the x1 exponent) and (i+2)(n-1) columns (i+2 shifts per form); block j,
shift s has the coefficients of x0^(i+1-s) x1^s times form j. Once some
twist reaches full row rank every later twist does too, because the later
column spans contain the x0/x1 shifts of a full span, so elimination can
stop there and the remaining ranks are the row counts.
"""

from __future__ import annotations

import numpy as np


def _rank_mod_p(mat, rows, cols, p):
    """In-place forward elimination mod p on a list-of-lists; returns rank."""
    r = 0
    for c in range(cols):
        pr = -1
        for i in range(r, rows):
            if mat[i][c] % p:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            mat[r], mat[pr] = mat[pr], mat[r]
        inv = pow(mat[r][c], p - 2, p)
        row_r = mat[r]
        for i in range(r + 1, rows):
            row_i = mat[i]
            if row_i[c] % p:
                f = row_i[c] * inv % p
                for j in range(c, cols):
                    row_i[j] = (row_i[j] - f * row_r[j]) % p
        r += 1
        if r == rows:
            break
    return r


def _build_twist_matrix(coeffs, n, d, i, p):
    """Block-Toeplitz matrix of the twist-i multiplication map."""
    rows = d + i + 1
    width = i + 2
    cols = width * (n - 1)
    mat = [[0] * cols for _ in range(rows)]
    for j in range(n - 1):
        base = j * d
        for s in range(width):
            col = j * width + s
            for t in range(d):
                mat[s + t][col] = coeffs[base + t] % p
    return mat


def h_profile(coeffs, n, d, p):
    """Kernel dimensions h_i of the twist-i maps for i = -1 .. d-1.

    coeffs is the flat length-(n-1)*d coefficient list of the n-1 forms of
    degree d-1, form-major.
    """
    h = []
    surjective = False
    for i in range(-1, d):
        rows = d + i + 1
        cols = (i + 2) * (n - 1)
        if surjective:
            h.append(cols - rows)
            continue
        mat = _build_twist_matrix(coeffs, n, d, i, p)
        rank = _rank_mod_p(mat, rows, cols, p)
        h.append(cols - rank)
        if rank == rows:
            surjective = True
    return h


def multiplicities_from_profile(h, n, d):
    """Recover twist multiplicities from an h profile.

    Returns a length-d list m with m[k] the multiplicity of the value
    1 - k, or None if the profile is inconsistent (the input tuple does
    not come from a line on a hypersurface smooth along it).
    """
    m = [0] * d
    m[0] = h[0]
    if d >= 2:
        m[1] = h[1] - 2 * m[0]
    for k in range(2, d):
        acc = 0
        for v in range(k):
            # value 1 - v contributes (1 - v) + k - 1 + 1 sections
            acc += m[v] * (1 - v + k)
        m[k] = h[k] - acc
    if any(x < 0 for x in m):
        return None
    if sum(m) != n - 2:
        return None
    if sum((1 - k) * m[k] for k in range(d)) != n - d - 1:
        return None
    if h[d] != (n - 2) * d + (n - d - 1):
        return None
    return m


def batch_multiplicities(coeffs: np.ndarray, n: int, d: int, p: int) -> np.ndarray:
    """Splitting multiplicities for a batch of coefficient rows.

    coeffs: integer array of shape (trials, (n-1)*d) with entries in
    [0, p). Returns an int16 array of shape (trials, d); rows that fail
    the consistency validation are marked with -1 in column 0.
    """
    trials = coeffs.shape[0]
    out = np.empty((trials, d), dtype=np.int16)
    for t in range(trials):
        row = [int(v) for v in coeffs[t]]
        m = multiplicities_from_profile(h_profile(row, n, d, p), n, d)
        if m is None:
            out[t, 0] = -1
            out[t, 1:] = 0
        else:
            out[t] = m
    return out
