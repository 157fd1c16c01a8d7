"""Exact scalar arithmetic, binary forms, sparse multivariate polynomials
and dense exact linear algebra.

Scalars are plain Python objects: `fractions.Fraction` over the rationals
and canonical `int` representatives in [0, p) over a prime field. The
field object carries the arithmetic, so containers (forms, polynomials,
matrices) hold raw values plus one field reference and refuse to mix
fields. Everything is immutable after construction; all operations are
pure.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import DomainError, FieldMismatchError

# ----------------------------------------------------------------------
# Coefficient fields
# ----------------------------------------------------------------------


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond any modulus used here."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class RationalField:
    """The rationals; values are Fractions in lowest terms."""

    char = 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a == 0

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def from_int(self, k):
        return Fraction(k)

    def from_fraction(self, fr):
        return Fraction(fr)

    def parse(self, text):
        return Fraction(text.strip())

    def to_str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash(("field", 0))

    def __repr__(self):
        return "QQ"


class PrimeField:
    """Integers modulo a prime p; values are canonical ints in [0, p)."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise DomainError(f"{p} is not prime")
        self.p = p
        self.char = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    zero = 0
    one = 1

    def from_int(self, k):
        return k % self.p

    def from_fraction(self, fr):
        fr = Fraction(fr)
        if fr.denominator % self.p == 0:
            raise DomainError(f"denominator of {fr} vanishes mod {self.p}")
        return fr.numerator * self.inv(fr.denominator % self.p) % self.p

    def parse(self, text):
        return self.from_fraction(Fraction(text.strip()))

    def to_str(self, a):
        return str(a % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("field", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_tag(tag: str):
    """Parse a field tag: 'q' for the rationals, 'p:41' for GF(41)."""
    tag = tag.strip().lower()
    if tag == "q":
        return QQ
    if tag.startswith("p:"):
        return PrimeField(int(tag[2:]))
    raise DomainError(f"unknown field tag {tag!r} (expected 'q' or 'p:<prime>')")


def field_tag(field) -> str:
    return "q" if field.char == 0 else f"p:{field.char}"


def check_same_field(a, b):
    if a != b:
        raise FieldMismatchError(f"cannot mix {a!r} and {b!r}")


# ----------------------------------------------------------------------
# Binary forms (homogeneous polynomials in x0, x1)
# ----------------------------------------------------------------------


class BinaryForm:
    """Homogeneous polynomial in x0, x1 of a fixed degree.

    coeffs[s] multiplies x0^(degree-s) * x1^s; the list always has exactly
    degree+1 entries, so the zero form of degree k is k+1 zeros.
    """

    __slots__ = ("field", "degree", "coeffs")

    def __init__(self, field, degree, coeffs):
        coeffs = list(coeffs)
        if degree < 0 or len(coeffs) != degree + 1:
            raise ValueError(f"need {degree + 1} coefficients, got {len(coeffs)}")
        self.field = field
        self.degree = degree
        self.coeffs = coeffs

    @classmethod
    def zero(cls, field, degree):
        return cls(field, degree, [field.zero] * (degree + 1))

    @classmethod
    def monomial(cls, field, degree, s, coeff=None):
        """coeff * x0^(degree-s) * x1^s."""
        c = [field.zero] * (degree + 1)
        c[s] = field.one if coeff is None else coeff
        return cls(field, degree, c)

    @classmethod
    def from_ints(cls, field, ints):
        return cls(field, len(ints) - 1, [field.from_int(k) for k in ints])

    def is_zero(self):
        return all(self.field.is_zero(c) for c in self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, BinaryForm) and self.field == other.field
                and self.degree == other.degree and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.degree, tuple(self.coeffs)))

    def __add__(self, other):
        check_same_field(self.field, other.field)
        if self.degree != other.degree:
            raise DomainError("cannot add forms of different degrees")
        F = self.field
        return BinaryForm(F, self.degree,
                          [F.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        F = self.field
        return BinaryForm(F, self.degree, [F.neg(c) for c in self.coeffs])

    def scale(self, c):
        F = self.field
        return BinaryForm(F, self.degree, [F.mul(c, a) for a in self.coeffs])

    def __mul__(self, other):
        return binary_form_multiply(self, other)

    def shift(self, e0: int, e1: int) -> "BinaryForm":
        """Multiply by the monomial x0^e0 * x1^e1."""
        F = self.field
        deg = self.degree + e0 + e1
        out = [F.zero] * (deg + 1)
        for s, c in enumerate(self.coeffs):
            out[s + e1] = c
        return BinaryForm(F, deg, out)

    def evaluate(self, v0, v1):
        F = self.field
        acc = F.zero
        p0 = F.one
        pows1 = [F.one]
        for _ in range(self.degree):
            pows1.append(F.mul(pows1[-1], v1))
        for s in range(self.degree, -1, -1):
            acc = F.add(acc, F.mul(self.coeffs[s], F.mul(p0, pows1[s])))
            p0 = F.mul(p0, v0)
        return acc

    def to_str(self):
        F = self.field
        parts = []
        for s, c in enumerate(self.coeffs):
            if F.is_zero(c):
                continue
            mono = []
            if self.degree - s:
                mono.append("x0" if self.degree - s == 1 else f"x0^{self.degree - s}")
            if s:
                mono.append("x1" if s == 1 else f"x1^{s}")
            head = F.to_str(c)
            parts.append("*".join([head] + mono) if mono else head)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"BinaryForm({self.to_str()})"

    def to_json(self):
        return {"degree": self.degree,
                "coeffs": [self.field.to_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj, field):
        return cls(field, obj["degree"], [field.parse(c) for c in obj["coeffs"]])


def binary_form_multiply(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Product of two binary forms; coefficients are the convolution."""
    check_same_field(f.field, g.field)
    F = f.field
    deg = f.degree + g.degree
    out = [F.zero] * (deg + 1)
    for i, a in enumerate(f.coeffs):
        if F.is_zero(a):
            continue
        for j, b in enumerate(g.coeffs):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return BinaryForm(F, deg, out)


def _univariate_gcd(u, v, field):
    """Monic gcd of coefficient lists (ascending), treating [] as zero."""
    def trim(w):
        while w and field.is_zero(w[-1]):
            w.pop()
        return w

    u, v = trim(list(u)), trim(list(v))
    while v:
        # u mod v by long division
        while len(u) >= len(v):
            k = len(u) - len(v)
            q = field.div(u[-1], v[-1])
            for i in range(len(v)):
                u[i + k] = field.sub(u[i + k], field.mul(q, v[i]))
            u = trim(u)
            if not u:
                break
        u, v = v, u
    if u:
        lead = field.inv(u[-1])
        u = [field.mul(lead, c) for c in u]
    return u


def common_projective_zero(forms) -> bool:
    """Whether the nonzero forms among `forms` share a zero on the line.

    Works over the algebraic closure: checks the point [0:1] directly and
    uses a gcd of the dehomogenizations for everything else (the point
    [1:0] corresponds to the root t = 0). All-zero input counts as having
    a common zero.
    """
    nz = [f for f in forms if not f.is_zero()]
    if not nz:
        return True
    field = nz[0].field
    if all(field.is_zero(f.coeffs[f.degree]) for f in nz):
        return True
    g = list(nz[0].coeffs)
    for f in nz[1:]:
        g = _univariate_gcd(g, f.coeffs, field)
        if len(g) == 1:
            return False
    return len(g) != 1


# ----------------------------------------------------------------------
# Sparse multivariate polynomials
# ----------------------------------------------------------------------

_TERM_PART = re.compile(r"^x(\d+)(?:\^(\d+))?$")


class MultiPoly:
    """Sparse multivariate polynomial: exponent tuple -> nonzero scalar."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars, terms=None):
        self.field = field
        self.nvars = nvars
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent vector {exps} has wrong length")
            if not field.is_zero(c):
                clean[exps] = c
        self.terms = clean

    @classmethod
    def zero(cls, field, nvars):
        return cls(field, nvars, {})

    @classmethod
    def constant(cls, field, nvars, c):
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, field, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, {tuple(e): field.one})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, MultiPoly) and self.field == other.field
                and self.nvars == other.nvars and self.terms == other.terms)

    def __add__(self, other):
        check_same_field(self.field, other.field)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = F.add(out.get(e, F.zero), c)
            if F.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return MultiPoly(F, self.nvars, out)

    def __neg__(self):
        F = self.field
        return MultiPoly(F, self.nvars, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        F = self.field
        if F.is_zero(c):
            return MultiPoly.zero(F, self.nvars)
        return MultiPoly(F, self.nvars, {e: F.mul(c, v) for e, v in self.terms.items()})

    def __mul__(self, other):
        check_same_field(self.field, other.field)
        F = self.field
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = F.add(out.get(e, F.zero), F.mul(c1, c2))
                if F.is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return MultiPoly(F, self.nvars, out)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.field, self.nvars, self.field.one)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def partial(self, i):
        """Partial derivative with respect to variable i."""
        F = self.field
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            v = F.mul(F.from_int(e[i]), c)
            if not F.is_zero(v):
                out[tuple(ne)] = v
        return MultiPoly(F, self.nvars, out)

    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def evaluate(self, point):
        if len(point) != self.nvars:
            raise ValueError("point has wrong length")
        F = self.field
        acc = F.zero
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                for _ in range(k):
                    v = F.mul(v, x)
            acc = F.add(acc, v)
        return acc

    def substitute(self, images):
        """Substitute images[i] (a MultiPoly) for variable i."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        F = self.field
        nv = images[0].nvars
        pow_cache = [{0: MultiPoly.constant(F, nv, F.one)} for _ in images]
        acc = MultiPoly.zero(F, nv)
        for e, c in self.terms.items():
            term = MultiPoly.constant(F, nv, c)
            for i, k in enumerate(e):
                if k == 0:
                    continue
                cache = pow_cache[i]
                if k not in cache:
                    top = max(cache)
                    cur = cache[top]
                    while top < k:
                        cur = cur * images[i]
                        top += 1
                        cache[top] = cur
                term = term * cache[k]
            acc = acc + term
        return acc

    def coefficients_by(self, front: int):
        """Group terms by the exponents of the first `front` variables.

        Returns a dict mapping the truncated exponent tuple to a MultiPoly
        in the remaining nvars - front variables.
        """
        F = self.field
        grouped = {}
        for e, c in self.terms.items():
            head, tail = e[:front], e[front:]
            grouped.setdefault(head, {})[tail] = c
        return {h: MultiPoly(F, self.nvars - front, t) for h, t in grouped.items()}

    # -- canonical text / JSON -------------------------------------------

    def _sorted_terms(self):
        # graded-lex, largest first
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def to_text(self):
        if not self.terms:
            return "0"
        F = self.field
        parts = []
        for e, c in self._sorted_terms():
            factors = [F.to_str(c)]
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(f"x{i}")
                elif k > 1:
                    factors.append(f"x{i}^{k}")
            parts.append("*".join(factors))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def to_json(self):
        F = self.field
        return {"nvars": self.nvars,
                "terms": [[list(e), F.to_str(c)] for e, c in self._sorted_terms()]}

    @classmethod
    def from_json(cls, obj, field):
        terms = {}
        for e, c in obj["terms"]:
            terms[tuple(e)] = field.parse(c)
        return cls(field, obj["nvars"], terms)

    @classmethod
    def parse(cls, text, field, nvars=None):
        """Parse the term grammar `c*x0^e0*...*xn^en` joined by `+`/`-`."""
        text = text.replace(" ", "")
        if not text:
            raise DomainError("empty polynomial text")
        # split into signed chunks
        chunks = []
        sign, buf = 1, []
        for ch in text:
            if ch in "+-":
                if buf:
                    chunks.append((sign, "".join(buf)))
                    buf = []
                elif chunks:
                    raise DomainError(f"misplaced sign in {text!r}")
                sign = 1 if ch == "+" else -1
            else:
                buf.append(ch)
        if buf:
            chunks.append((sign, "".join(buf)))
        if not chunks:
            raise DomainError(f"cannot parse polynomial {text!r}")

        raw = []
        max_var = -1
        for sgn, chunk in chunks:
            coeff = Fraction(sgn)
            exps = {}
            for part in chunk.split("*"):
                if not part:
                    raise DomainError(f"empty factor in term {chunk!r}")
                m = _TERM_PART.match(part)
                if m:
                    i, k = int(m.group(1)), int(m.group(2) or 1)
                    exps[i] = exps.get(i, 0) + k
                    max_var = max(max_var, i)
                else:
                    try:
                        coeff *= Fraction(part)
                    except ValueError:
                        raise DomainError(f"cannot parse factor {part!r}") from None
            raw.append((coeff, exps))

        if nvars is None:
            nvars = max_var + 1
        if max_var >= nvars:
            raise DomainError(f"variable x{max_var} out of range for {nvars} variables")
        F = field
        terms = {}
        for coeff, exps in raw:
            e = tuple(exps.get(i, 0) for i in range(nvars))
            c = F.add(terms.get(e, F.zero), F.from_fraction(coeff))
            if F.is_zero(c):
                terms.pop(e, None)
            else:
                terms[e] = c
        return cls(F, nvars, terms)

    def __repr__(self):
        return f"MultiPoly({self.to_text()})"


# ----------------------------------------------------------------------
# Dense exact matrices
# ----------------------------------------------------------------------


class ExactMatrix:
    """Dense row-major matrix over an exact field."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field, entries):
        entries = [list(r) for r in entries]
        self.field = field
        self.rows = len(entries)
        self.cols = len(entries[0]) if entries else 0
        for r in entries:
            if len(r) != self.cols:
                raise ValueError("ragged rows")
        self.entries = entries

    @classmethod
    def zero(cls, field, rows, cols):
        return cls(field, [[field.zero] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field, n):
        m = cls.zero(field, n, n)
        for i in range(n):
            m.entries[i][i] = field.one
        return m

    @classmethod
    def from_int_rows(cls, field, rows):
        return cls(field, [[field.from_int(v) for v in r] for r in rows])

    def copy_rows(self):
        return [list(r) for r in self.entries]

    def column(self, j):
        return [r[j] for r in self.entries]

    def mat_vec(self, v):
        F = self.field
        out = []
        for r in self.entries:
            acc = F.zero
            for a, b in zip(r, v):
                acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return out

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols} over {self.field!r})"


def _rref_naive(rows, field):
    """Reduced row echelon form by straight field arithmetic.

    Pivot rule: columns left to right, first nonzero entry scanning top to
    bottom. Returns (rref rows, pivot column list).
    """
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if not field.is_zero(m[i][c])), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, v) for v in m[r]]
        for i in range(nr):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return m, pivots


def _rref_rational_bareiss(rows):
    """RREF over the rationals via fraction-free forward elimination.

    Rows are first scaled to integers; the Bareiss one-step rule keeps all
    intermediate values integral, bounding coefficient swell, and the
    final normalization to RREF happens on the already-echelonized rows.
    Produces exactly the same output as naive elimination (RREF is unique).
    """
    m = []
    for row in rows:
        fracs = [Fraction(v) for v in row]
        den = 1
        for v in fracs:
            den = den * v.denominator // _gcd(den, v.denominator)
        m.append([int(v * den) for v in fracs])
    nr = len(m)
    nc = len(m[0]) if m else 0
    pivots = []
    prev = 1
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pivot = m[r][c]
        for i in range(r + 1, nr):
            mic = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c, nc):
                row_i[j] = (pivot * row_i[j] - mic * row_r[j]) // prev
        pivots.append(c)
        prev = pivot
        r += 1
        if r == nr:
            break
    # normalize the echelon rows to RREF with exact rationals
    rref = [[Fraction(v) for v in row] for row in m[:len(pivots)]]
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        inv = 1 / rref[k][c]
        rref[k] = [inv * v for v in rref[k]]
        for i in range(k):
            f = rref[i][c]
            if f:
                rref[i] = [a - f * b for a, b in zip(rref[i], rref[k])]
    rref += [[Fraction(0)] * nc for _ in range(nr - len(pivots))]
    return rref, pivots


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def rref(matrix: ExactMatrix, method: str = "auto"):
    """RREF of an ExactMatrix; returns (rref rows, pivot columns).

    method 'auto' uses fraction-free elimination over the rationals and
    plain Gaussian elimination over prime fields; 'naive' forces straight
    field arithmetic (used to cross-check the fraction-free path).
    """
    if method == "naive" or matrix.field.char != 0:
        return _rref_naive(matrix.entries, matrix.field)
    return _rref_rational_bareiss(matrix.entries)


def rank_and_kernel(matrix: ExactMatrix, method: str = "auto"):
    """Exact rank and a deterministic kernel basis.

    The kernel basis is in reduced echelon-complement form: one vector per
    free column in increasing column order, with a 1 in the free
    coordinate and the negated RREF entries in the pivot coordinates.
    """
    field = matrix.field
    rows, pivots = rref(matrix, method=method)
    rank = len(pivots)
    pivot_set = set(pivots)
    basis = []
    for f in range(matrix.cols):
        if f in pivot_set:
            continue
        v = [field.zero] * matrix.cols
        v[f] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(rows[r][f])
        basis.append(v)
    return rank, basis


def solve_in_span(targets, span: ExactMatrix):
    """Column-space membership with certificates.

    For each target vector, returns (True, v) with span @ v = target, or
    (False, y) where y is a left null vector of span with y . target != 0.
    The solution has free coordinates zero, so it is unique in reduced
    form; the certificate is the first violated row of the elimination
    transform.
    """
    field = span.field
    nr = len(span.entries)
    for t in targets:
        if len(t) != nr:
            raise DomainError("target length does not match span rows")
    aug = [list(row) + [field.one if i == j else field.zero for j in range(nr)]
           for i, row in enumerate(span.entries)]
    reduced, pivots = _rref_naive(aug, field)
    # pivots inside the identity block describe left null rows
    left_pivots = [p for p in pivots if p < span.cols]
    rank = len(left_pivots)
    results = []
    for t in targets:
        y = []
        for row in reduced:
            acc = field.zero
            for j in range(nr):
                acc = field.add(acc, field.mul(row[span.cols + j], t[j]))
            y.append(acc)
        bad = next((r for r in range(rank, nr) if not field.is_zero(y[r])), None)
        if bad is not None:
            results.append((False, [reduced[bad][span.cols + j] for j in range(nr)]))
            continue
        v = [field.zero] * span.cols
        for r, pc in enumerate(left_pivots):
            v[pc] = y[r]
        results.append((True, v))
    return results
