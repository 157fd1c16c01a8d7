"""Chow-ring arithmetic for the Grassmannian of lines in projective n-space.

Classes are integer combinations of Schubert classes s[a,b] with
n-1 >= a >= b >= 0. Multiplication goes through the two-row Pieri rule
together with the column shift s[1,1]*s[c,e] = s[c+1,e+1]; both are
individually exact in the ring, so any evaluation order gives the exact
product. Chern classes of symmetric powers of the dual tautological
subbundle come from the splitting principle with formal roots reduced to
elementary symmetric polynomials.

The degeneracy-locus machinery computes the determinant of graded
components of a truncated series in both quotient orientations, because
the two published orientations of the stratum-class formula disagree; the
standard orientation (Chern series of the target bundle over that of the
source) is the one that comes out effective, and both are always reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError
from .strata import SplittingType


class ChowClass:
    """Finitely supported integer combination of Schubert classes."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n, coeffs=None):
        self.n = n
        clean = {}
        for (a, b), c in (coeffs or {}).items():
            if not (0 <= b <= a <= n - 1):
                raise DomainError(f"partition ({a},{b}) outside the box for n={n}")
            if c:
                clean[(a, b)] = int(c)
        self.coeffs = clean

    @classmethod
    def zero(cls, n):
        return cls(n, {})

    @classmethod
    def one(cls, n):
        return cls(n, {(0, 0): 1})

    @classmethod
    def sigma(cls, n, a, b=0, coeff=1):
        return cls(n, {(a, b): coeff})

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, ChowClass) and self.n == other.n
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.coeffs.items()))))

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            s = out.get(p, 0) + c
            if s:
                out[p] = s
            else:
                out.pop(p, None)
        return ChowClass(self.n, out)

    def __neg__(self):
        return ChowClass(self.n, {p: -c for p, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        if isinstance(k, int):
            return ChowClass(self.n, {p: k * c for p, c in self.coeffs.items()})
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return other * self
        self._check(other)
        return multiply(self, other)

    def _check(self, other):
        if self.n != other.n:
            raise DomainError("classes live on different Grassmannians")

    def graded_component(self, k):
        return ChowClass(self.n, {p: c for p, c in self.coeffs.items()
                                  if p[0] + p[1] == k})

    def is_homogeneous(self):
        return len({a + b for a, b in self.coeffs}) <= 1

    def codimension(self):
        """Codimension when homogeneous, None for 0 or mixed classes."""
        degs = {a + b for a, b in self.coeffs}
        return degs.pop() if len(degs) == 1 else None

    def top_coefficient(self):
        """Coefficient of the point class s[n-1,n-1]."""
        return self.coeffs.get((self.n - 1, self.n - 1), 0)

    def pretty(self):
        if not self.coeffs:
            return "0"
        parts = []
        for (a, b), c in sorted(self.coeffs.items()):
            parts.append(f"{c}*s[{a},{b}]")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return {"n": self.n,
                "terms": [[[a, b], str(c)]
                          for (a, b), c in sorted(self.coeffs.items())]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["n"], {tuple(p): int(c) for p, c in obj["terms"]})

    def __repr__(self):
        return f"ChowClass({self.pretty()})"


def pieri(p: int, c: ChowClass) -> ChowClass:
    """Multiply by the special class s[p]: horizontal strips in the box."""
    if p < 0:
        raise DomainError("special class index must be nonnegative")
    n = c.n
    if p == 0:
        return c
    out = {}
    for (a, b), q in c.coeffs.items():
        # s[p]*s[a,b] = sum of s[cc,e] with cc+e = a+b+p, cc >= a >= e >= b
        for e in range(b, a + 1):
            cc = a + b + p - e
            if a <= cc <= n - 1:
                out[(cc, e)] = out.get((cc, e), 0) + q
    return ChowClass(n, out)


def _shift_column(c: ChowClass, times: int) -> ChowClass:
    """Multiply by s[1,1]^times: adds full columns, drops box overflow."""
    n = c.n
    out = {}
    for (a, b), q in c.coeffs.items():
        if a + times <= n - 1:
            out[(a + times, b + times)] = out.get((a + times, b + times), 0) + q
    return ChowClass(n, out)


def multiply(c1: ChowClass, c2: ChowClass) -> ChowClass:
    """Bilinear product via s[a,b] = s[1,1]^b * s[a-b]."""
    n = c1.n
    acc = ChowClass.zero(n)
    for (a, b), q in sorted(c2.coeffs.items()):
        acc = acc + q * _shift_column(pieri(a - b, c1), b)
    return acc


@dataclass(frozen=True)
class ChernSeries:
    """Truncated total Chern class: one component per codimension."""

    n: int
    components: tuple

    @classmethod
    def from_components(cls, n, comps):
        top = 2 * (n - 1)
        comps = list(comps)[:top + 1]
        comps += [ChowClass.zero(n)] * (top + 1 - len(comps))
        return cls(n, tuple(comps))

    def component(self, k):
        if 0 <= k < len(self.components):
            return self.components[k]
        return ChowClass.zero(self.n)

    def __mul__(self, other):
        if self.n != other.n:
            raise DomainError("series live on different Grassmannians")
        top = 2 * (self.n - 1)
        comps = []
        for k in range(top + 1):
            acc = ChowClass.zero(self.n)
            for i in range(k + 1):
                a, b = self.component(i), other.component(k - i)
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            comps.append(acc)
        return ChernSeries.from_components(self.n, comps)

    def invert(self):
        """Inverse through the truncation degree; unit term required."""
        if self.component(0) != ChowClass.one(self.n):
            raise DomainError("series is not invertible (degree-0 term is not 1)")
        top = 2 * (self.n - 1)
        inv = [ChowClass.one(self.n)]
        for k in range(1, top + 1):
            acc = ChowClass.zero(self.n)
            for j in range(1, k + 1):
                sj = self.component(j)
                if not sj.is_zero() and not inv[k - j].is_zero():
                    acc = acc + sj * inv[k - j]
            inv.append(-acc)
        return ChernSeries.from_components(self.n, inv)

    def divide(self, other):
        return self * other.invert()

    def to_json(self):
        return {"n": self.n,
                "components": [c.to_json() for c in self.components]}


def chern_quotient(n: int) -> ChernSeries:
    """Total Chern class of the universal quotient bundle: 1 + s1 + s2 + ..."""
    comps = [ChowClass.one(n)]
    comps += [ChowClass.sigma(n, k) for k in range(1, n)]
    return ChernSeries.from_components(n, comps)


def _poly_mul_linear(poly, ax, by):
    """Multiply an xy-polynomial dict by (ax*x + by*y)."""
    out = {}
    for (i, j), c in poly.items():
        if ax:
            out[(i + 1, j)] = out.get((i + 1, j), 0) + ax * c
        if by:
            out[(i, j + 1)] = out.get((i, j + 1), 0) + by * c
    return {k: v for k, v in out.items() if v}


def _to_elementary(poly):
    """Rewrite a symmetric xy-polynomial as a dict (i, j) -> coeff meaning
    e1^i * e2^j; consumes the polynomial by repeatedly stripping the
    lex-leading term."""
    poly = dict(poly)
    out = {}
    while poly:
        (i, j) = max(poly)
        c = poly[(i, j)]
        if i < j:
            raise ValueError("polynomial is not symmetric")
        out[(i - j, j)] = out.get((i - j, j), 0) + c
        # subtract c * e1^(i-j) * e2^j
        expansion = {(j, j): c}
        for _ in range(i - j):
            expansion = _poly_mul_linear(expansion, 1, 1)
        for k, v in expansion.items():
            nv = poly.get(k, 0) - v
            if nv:
                poly[k] = nv
            else:
                poly.pop(k, None)
    return out


@lru_cache(maxsize=None)
def _sigma_power_table(n: int, max1: int, max11: int):
    """Powers s1^i and s[1,1]^j up to the requested exponents."""
    s1 = ChowClass.sigma(n, 1)
    s11 = ChowClass.sigma(n, 1, 1)
    pows1 = [ChowClass.one(n)]
    for _ in range(max1):
        pows1.append(pows1[-1] * s1)
    pows11 = [ChowClass.one(n)]
    for _ in range(max11):
        pows11.append(pows11[-1] * s11)
    return tuple(pows1), tuple(pows11)


def _evaluate_elementary(elem, n):
    """Evaluate a dict (i, j) -> coeff of e1^i e2^j in the Schubert basis,
    sending e1 to s1 and e2 to s[1,1]."""
    if not elem:
        return ChowClass.zero(n)
    max1 = max(i for i, _ in elem)
    max11 = max(j for _, j in elem)
    pows1, pows11 = _sigma_power_table(n, max1, max11)
    acc = ChowClass.zero(n)
    for (i, j), c in sorted(elem.items()):
        acc = acc + c * (pows1[i] * pows11[j])
    return acc


@lru_cache(maxsize=None)
def chern_sym(k: int, n: int) -> ChernSeries:
    """Total Chern class of the k-th symmetric power of the dual
    tautological subbundle.

    With formal roots x, y of the rank-two bundle (e1 = s1, e2 = s[1,1]),
    expands the product of 1 + ((k-i)x + iy) over i = 0..k, reduces each
    coefficient to elementary symmetric polynomials and evaluates in the
    Schubert basis.
    """
    if k < 0:
        raise DomainError("symmetric power must be nonnegative")
    # comps_xy[m] is the xy-polynomial coefficient of t^m
    comps_xy = [{(0, 0): 1}]
    for i in range(k + 1):
        ax, by = k - i, i
        new = [dict(c) for c in comps_xy] + [{}]
        for m in range(len(comps_xy), 0, -1):
            extra = _poly_mul_linear(comps_xy[m - 1], ax, by)
            tgt = new[m]
            for key, v in extra.items():
                nv = tgt.get(key, 0) + v
                if nv:
                    tgt[key] = nv
                else:
                    tgt.pop(key, None)
        comps_xy = new
    comps = [_evaluate_elementary(_to_elementary(c), n) for c in comps_xy]
    return ChernSeries.from_components(n, comps)


def porteous_determinant(e: int, f: int, series: ChernSeries) -> ChowClass:
    """Determinant of the e x e matrix with entry (r, c) the graded
    component f + c - r of the series; components of negative degree are
    zero. This is the degeneracy-locus determinant."""
    if e < 0 or f < 0:
        raise DomainError("determinant indices must be nonnegative")
    if e == 0:
        return ChowClass.one(series.n)
    grid = [[series.component(f + c - r) if f + c - r >= 0 else ChowClass.zero(series.n)
             for c in range(e)] for r in range(e)]
    return _det(grid, series.n)


def _det(grid, n):
    size = len(grid)
    if size == 1:
        return grid[0][0]
    acc = ChowClass.zero(n)
    sign = 1
    for r in range(size):
        minor = [row[1:] for i, row in enumerate(grid) if i != r]
        term = grid[r][0] * _det(minor, n)
        acc = acc + (sign * term if sign > 0 else -term)
        sign = -sign
    return acc


@dataclass(frozen=True)
class StratumClassReport:
    """Both orientations of the degeneracy-locus class of a stratum closure.

    `porteous` uses the standard quotient (series of the target bundle of
    the evaluation map over that of the source); `reciprocal` uses the
    flipped quotient. They genuinely differ, and only the standard
    orientation passes the effectivity check, so callers get both plus the
    ambient Fano class.
    """

    n: int
    d: int
    splitting: SplittingType
    ones: int                    # m, number of +1 entries
    drop: int                    # b = m - (n - d - 1)
    fano_class: ChowClass        # class of the whole Fano scheme
    porteous: ChowClass
    reciprocal: ChowClass

    @property
    def codim(self):
        return self.splitting.expected_codim

    def degree(self, cls: ChowClass):
        """Integer degree when the class is top-dimensional, else None."""
        if cls.is_zero():
            return 0 if self.codim + self.d + 1 >= 2 * (self.n - 1) else None
        if cls.codimension() == 2 * (self.n - 1):
            return cls.top_coefficient()
        return None

    def to_json(self):
        return {
            "n": self.n, "d": self.d, "type": self.splitting.to_json(),
            "m": self.ones, "b": self.drop, "u": self.codim,
            "fano_class": {"class": self.fano_class.to_json(),
                           "pretty": self.fano_class.pretty()},
            "orientations": {
                "porteous": {"class": self.porteous.to_json(),
                             "pretty": self.porteous.pretty(),
                             "degree": self.degree(self.porteous)},
                "reciprocal": {"class": self.reciprocal.to_json(),
                               "pretty": self.reciprocal.pretty(),
                               "degree": self.degree(self.reciprocal)},
            },
        }


def good_shape(t: SplittingType):
    """Decompose t as (balanced nonpositive part, block of ones).

    Returns (m, b) when the entries below 1 are balanced among themselves,
    None otherwise; only these shapes admit the one-step determinant
    formula.
    """
    e = t.entries
    m = sum(1 for a in e if a == 1)
    rest = e[:len(e) - m]
    if rest and rest[-1] - rest[0] > 1:
        return None
    b = m - (t.n - t.d - 1)
    return m, b


def stratum_class(t: SplittingType) -> StratumClassReport:
    """Class of the stratum closure inside the Grassmannian of lines.

    The class of the whole Fano scheme is the top Chern class of the d-th
    symmetric power of the dual subbundle; a type whose non-one part is
    balanced imposes a rank condition on the evaluation map in twist -1,
    and its stratum class is the Fano class times an m x m determinant of
    quotient-series components, reported in both orientations.
    """
    n, d = t.n, t.d
    shape = good_shape(t)
    if shape is None:
        raise DomainError(
            f"type {t.label()} does not have a balanced non-one part; "
            "no closed determinant formula applies")
    m, b = shape
    fano = chern_sym(d, n).component(d + 1)
    if m == 0 or b <= 0:
        # no rank condition; the stratum closure is the whole Fano scheme
        return StratumClassReport(n, d, t, m, b, fano, fano, fano)
    sym = chern_sym(d - 1, n)
    quo = chern_quotient(n)
    standard = porteous_determinant(m, b, sym.divide(quo))
    flipped = porteous_determinant(m, b, quo.divide(sym))
    return StratumClassReport(n, d, t, m, b, fano,
                              fano * standard, fano * flipped)
