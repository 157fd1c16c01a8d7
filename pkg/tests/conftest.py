"""Shared oracles for the test suite.

These deliberately avoid the package's own linear algebra: ranks come
from sympy, intersection degrees from torus localization, and tableau
counts from direct enumeration, so golden values are frozen against
independent computations.
"""

from fractions import Fraction
from itertools import combinations

import sympy


def sympy_rank(rows) -> int:
    """Rank of a rational matrix via sympy, used as an elimination oracle."""
    if not rows or not rows[0]:
        return 0
    return sympy.Matrix([[sympy.Rational(v) for v in r] for r in rows]).rank()


def standard_tableaux_count(shape) -> int:
    """Number of standard Young tableaux by direct hook length formula."""
    rows = list(shape)
    total = sum(rows)
    if total == 0:
        return 1
    cols = [0] * (rows[0] if rows else 0)
    for r in rows:
        for c in range(r):
            cols[c] += 1
    num = 1
    for k in range(1, total + 1):
        num *= k
    den = 1
    for i, r in enumerate(rows):
        for j in range(r):
            den *= (r - j) + (cols[j] - i) - 1
    return num // den


def catalan_ballot(n: int) -> int:
    """Catalan number by counting ballot sequences of length 2n."""

    def rec(ups, downs):
        if ups == 0 and downs == 0:
            return 1
        total = 0
        if ups > 0:
            total += rec(ups - 1, downs)
        if downs > ups:
            total += rec(ups, downs - 1)
        return total

    return rec(n, n)


def bott_degree_sym_top(n: int, d: int) -> int:
    """Degree of the top Chern class of the d-th symmetric power of the
    dual subbundle on the Grassmannian of lines in projective n-space,
    by torus localization over the coordinate lines.

    Independent of any Schubert calculus: fixed points are coordinate
    lines (i, j); the bundle restricts with weights -(a w_i + b w_j) over
    a + b = d, and the tangent weights are the differences to the other
    coordinates.
    """
    w = [Fraction(3 * k + 1) for k in range(n + 1)]
    total = Fraction(0)
    for i, j in combinations(range(n + 1), 2):
        num = Fraction(1)
        for a in range(d + 1):
            num *= -(a * w[i] + (d - a) * w[j])
        den = Fraction(1)
        for k in range(n + 1):
            if k in (i, j):
                continue
            den *= (w[k] - w[i]) * (w[k] - w[j])
        total += num / den
    assert total.denominator == 1
    return int(total)


def bott_degree_sigma1_power(n: int) -> int:
    """Degree of the top self-intersection of the hyperplane-type class,
    again via localization; its value is the Catalan number."""
    w = [Fraction(3 * k + 1) for k in range(n + 1)]
    total = Fraction(0)
    e = 2 * (n - 1)
    for i, j in combinations(range(n + 1), 2):
        sigma1 = sum(w) - w[i] - w[j]
        num = sigma1 ** e
        den = Fraction(1)
        for k in range(n + 1):
            if k in (i, j):
                continue
            den *= (w[k] - w[i]) * (w[k] - w[j])
        total += num / den
    assert total.denominator == 1
    return int(total)
