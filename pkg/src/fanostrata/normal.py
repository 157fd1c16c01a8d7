"""Normal-bundle analysis of explicit lines on hypersurfaces.

The pipeline: adapt coordinates so the line becomes the vanishing of the
last n-1 variables, restrict first and second partials to it, build the
block-Toeplitz multiplication matrices of the restricted partials, read
the splitting type off their rank profile, and extract minimal syzygy
generators as deterministic echelon complements. The reverse direction
constructs witness tuples with prescribed splitting type from the signed
maximal minors of a matrix of forms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import core
from .errors import (ConsistencyError, DomainError, LineNotOnSurface,
                     SingularAlongLine)
from .exactalg import (BinaryForm, ExactMatrix, MultiPoly, check_same_field,
                       common_projective_zero, rank_and_kernel)
from .strata import SplittingType


def _guard_characteristic(field, d):
    # conservative: degree-d derivatives degenerate when the
    # characteristic divides small integers up to d
    if 0 < field.char <= d:
        raise DomainError(
            f"characteristic {field.char} is too small for degree {d}; need p > d")


# ----------------------------------------------------------------------
# Lines
# ----------------------------------------------------------------------


class Line:
    """A line in projective n-space, spanned by the two rows of `points`."""

    __slots__ = ("field", "n", "points")

    def __init__(self, field, n, points):
        points = [list(r) for r in points]
        if len(points) != 2 or any(len(r) != n + 1 for r in points):
            raise DomainError("a line needs two points with n+1 coordinates")
        self.field = field
        self.n = n
        self.points = points
        m = ExactMatrix(field, points)
        if rank_and_kernel(m)[0] != 2:
            raise DomainError("the two points do not span a line")

    @classmethod
    def standard(cls, field, n):
        """The line where all coordinates past the first two vanish."""
        e0 = [field.one] + [field.zero] * n
        e1 = [field.zero, field.one] + [field.zero] * (n - 1)
        return cls(field, n, [e0, e1])

    @classmethod
    def from_chart(cls, field, n, chart):
        """Chart coordinates (a_20, a_21, ..., a_n0, a_n1) to a line."""
        if len(chart) != 2 * (n - 1):
            raise DomainError("chart needs 2(n-1) coordinates")
        p0 = [field.one, field.zero] + [chart[2 * i] for i in range(n - 1)]
        p1 = [field.zero, field.one] + [chart[2 * i + 1] for i in range(n - 1)]
        return cls(field, n, [p0, p1])

    def to_json(self):
        F = self.field
        return {"n": self.n,
                "points": [[F.to_str(c) for c in row] for row in self.points]}

    @classmethod
    def from_json(cls, obj, field):
        pts = [[field.parse(c) for c in row] for row in obj["points"]]
        return cls(field, obj["n"], pts)

    def __repr__(self):
        return f"Line(n={self.n})"


def restrict_to_pencil(poly: MultiPoly, p0, p1, degree=None) -> BinaryForm:
    """Evaluate a homogeneous polynomial along s*p0 + t*p1 as a binary form.

    `degree` pins the output degree for zero polynomials, whose degree is
    not recoverable from the term map.
    """
    F = poly.field
    deg = poly.degree() if degree is None else degree
    acc = BinaryForm.zero(F, deg)
    one = BinaryForm(F, 0, [F.one])
    for exps, c in poly.terms.items():
        term = one
        for k, e in enumerate(exps):
            if e == 0:
                continue
            lin = BinaryForm(F, 1, [p0[k], p1[k]])
            for _ in range(e):
                term = term * lin
        if term.degree != deg:
            raise DomainError("polynomial is not homogeneous of the stated degree")
        acc = acc + term.scale(c)
    return acc


# ----------------------------------------------------------------------
# Coordinate adaptation
# ----------------------------------------------------------------------


@dataclass
class LineRestriction:
    """First and second partials of the defining equation along a line,
    written in coordinates where the line is x2 = ... = xn = 0.

    forms[j] is the restricted first partial in the new variable j+2, a
    binary form of degree d-1; hessian[i][j] the restricted second
    partial, degree d-2 (identically zero when d < 2). transform holds the
    substitution matrix: old coordinates = transform . new coordinates,
    whose first two columns are the spanning points of the line.
    """

    field: object
    n: int
    d: int
    forms: list
    hessian: list
    transform: list
    line: Line

    def smooth_along_line(self) -> bool:
        return not common_projective_zero(self.forms)


def _completion_transform(line: Line):
    """Invertible matrix whose first two columns are the line's points,
    completed by standard basis vectors at non-pivot coordinates."""
    from .exactalg import rref

    F = line.field
    n = line.n
    _, pivots = rref(ExactMatrix(F, line.points), method="naive")
    transform = [[F.zero] * (n + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        transform[i][0] = line.points[0][i]
        transform[i][1] = line.points[1][i]
    j = 2
    pivot_set = set(pivots)
    for i in range(n + 1):
        if i in pivot_set:
            continue
        transform[i][j] = F.one
        j += 1
    return transform


def adapt_coordinates(f: MultiPoly, line: Line) -> LineRestriction:
    """Restrict the first and second partials of f to the line.

    Checks that f is homogeneous and vanishes along the line; the
    restricted partials are computed through the chain rule against the
    completed coordinate transform, so the full transformed polynomial is
    never expanded.
    """
    F = f.field
    check_same_field(F, line.field)
    if f.nvars != line.n + 1:
        raise DomainError("polynomial and line have different ambient dimension")
    if f.is_zero() or not f.is_homogeneous():
        raise DomainError("defining equation must be homogeneous and nonzero")
    d = f.degree()
    _guard_characteristic(F, d)
    n = line.n
    p0, p1 = line.points
    residual = restrict_to_pencil(f, p0, p1)
    if not residual.is_zero():
        raise LineNotOnSurface(residual.to_str())

    transform = _completion_transform(line)
    partials = [f.partial(k) for k in range(n + 1)]
    restricted = [restrict_to_pencil(pk, p0, p1, d - 1) for pk in partials]

    forms = []
    for i in range(2, n + 1):
        acc = BinaryForm.zero(F, d - 1)
        for k in range(n + 1):
            if not F.is_zero(transform[k][i]):
                acc = acc + restricted[k].scale(transform[k][i])
        forms.append(acc)

    hess_deg = d - 2
    hessian = [[None] * (n - 1) for _ in range(n - 1)]
    if d >= 2:
        second = {}
        for k in range(n + 1):
            for l in range(k, n + 1):
                pk = partials[k].partial(l)
                second[(k, l)] = restrict_to_pencil(pk, p0, p1, d - 2)
        for i in range(2, n + 1):
            for j in range(i, n + 1):
                acc = BinaryForm.zero(F, hess_deg)
                for k in range(n + 1):
                    cki = transform[k][i]
                    if F.is_zero(cki):
                        continue
                    for l in range(n + 1):
                        clj = transform[l][j]
                        if F.is_zero(clj):
                            continue
                        s = second[(min(k, l), max(k, l))]
                        acc = acc + s.scale(F.mul(cki, clj))
                hessian[i - 2][j - 2] = acc
                hessian[j - 2][i - 2] = acc
    else:
        zero = BinaryForm.zero(F, 0)
        hessian = [[zero] * (n - 1) for _ in range(n - 1)]

    return LineRestriction(field=F, n=n, d=d, forms=forms, hessian=hessian,
                           transform=transform, line=line)


# ----------------------------------------------------------------------
# Multiplication matrices and rank profiles
# ----------------------------------------------------------------------


def build_C(forms, i: int) -> ExactMatrix:
    """Matrix of multiplication by the form tuple in twist i.

    Maps (i+2)-dimensional coefficient blocks, one per form, to forms of
    degree d+i; block j, column s holds the coefficients of
    x0^(i+1-s) x1^s times form j. Shape (d+i+1) x (i+2)(n-1).
    """
    if not forms:
        raise DomainError("need at least one form")
    if i < -1:
        raise DomainError("twist must be at least -1")
    F = forms[0].field
    degs = {f.degree for f in forms}
    if len(degs) != 1:
        raise DomainError(f"forms have mixed degrees {sorted(degs)}")
    for f in forms[1:]:
        check_same_field(F, f.field)
    d = forms[0].degree + 1
    rows = d + i + 1
    width = i + 2
    entries = [[F.zero] * (width * len(forms)) for _ in range(rows)]
    for j, f in enumerate(forms):
        for s in range(width):
            col = j * width + s
            for t, c in enumerate(f.coeffs):
                entries[s + t][col] = c
    return ExactMatrix(F, entries)


@dataclass(frozen=True)
class RankProfile:
    """h values (kernel dimensions) of the twist-i maps for i = -1 .. d-1."""

    n: int
    d: int
    h: tuple
    ranks: tuple

    def h_at(self, i: int) -> int:
        return self.h[i + 1]

    def rank_at(self, i: int) -> int:
        return self.ranks[i + 1]

    def to_json(self):
        return {"i_start": -1, "h": list(self.h), "ranks": list(self.ranks)}


def rank_profile(forms) -> RankProfile:
    """Rank profile of the multiplication maps for i = -1 .. d-1.

    Over a prime field small enough for the compiled kernel the profile
    comes from there; otherwise from exact elimination. Either way the
    early exit applies: full row rank at one twist forces it at all later
    twists, because the later column spans contain the x0/x1 shifts of a
    full span.
    """
    n = len(forms) + 1
    d = forms[0].degree + 1
    F = forms[0].field
    if F.char > 0 and core.kernel_available(F.char):
        flat = [c for f in forms for c in f.coeffs]
        h = core.h_profile(flat, n, d, F.char)
        ranks = tuple((i + 2) * (n - 1) - h[i + 1] for i in range(-1, d))
        return RankProfile(n=n, d=d, h=tuple(h), ranks=ranks)
    h, ranks = [], []
    surjective = False
    for i in range(-1, d):
        rows = d + i + 1
        cols = (i + 2) * (n - 1)
        if surjective:
            h.append(cols - rows)
            ranks.append(rows)
            continue
        r, _ = rank_and_kernel(build_C(forms, i))
        h.append(cols - r)
        ranks.append(r)
        if r == rows:
            surjective = True
    return RankProfile(n=n, d=d, h=tuple(h), ranks=tuple(ranks))


def splitting_type(forms):
    """Splitting type of the kernel bundle of a form tuple.

    Recovers twist multiplicities from the h profile by the forward
    recursion (number of +1 twists first) and validates rank, degree and
    nonnegativity; validation failure means the tuple does not come from
    a line on a hypersurface smooth along it, e.g. the forms share a
    factor. Returns (type, profile).
    """
    if all(f.is_zero() for f in forms):
        raise DomainError("all forms are zero; the kernel bundle is degenerate")
    n = len(forms) + 1
    d = forms[0].degree + 1
    _guard_characteristic(forms[0].field, d)
    profile = rank_profile(forms)
    mults = [0] * d
    mults[0] = profile.h_at(-1)
    if d >= 2:
        mults[1] = profile.h_at(0) - 2 * mults[0]
    for k in range(2, d):
        acc = sum(mults[v] * (1 - v + k) for v in range(k))
        mults[k] = profile.h_at(k - 1) - acc
    if (any(m < 0 for m in mults) or sum(mults) != n - 2
            or sum((1 - k) * m for k, m in enumerate(mults)) != n - d - 1
            or profile.h_at(d - 1) != (n - 2) * d + (n - d - 1)):
        raise ConsistencyError(
            f"rank profile {profile.h} is not a splitting-type profile; "
            "the forms likely share a common zero")
    entries = []
    for k in range(d - 1, -1, -1):
        entries.extend([1 - k] * mults[k])
    st = SplittingType(tuple(entries), n, d)
    for i in range(-1, d):
        if st.twisted_sections(i) != profile.h_at(i):
            raise ConsistencyError("recovered type does not reproduce the profile")
    return st, profile


# ----------------------------------------------------------------------
# Syzygy generators
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SyzygyGenerator:
    """One column of the kernel-bundle inclusion: n-1 forms of the stated
    degree with sum_i forms[i] * f_i = 0."""

    degree: int
    forms: tuple

    def to_json(self):
        return {"degree": self.degree,
                "forms": [g.to_json() for g in self.forms]}


def _kernel_vectors(forms, twist):
    _, basis = rank_and_kernel(build_C(forms, twist))
    return basis


def syzygy_generators(forms, st: SplittingType):
    """Minimal generators of the syzygies of the form tuple.

    In each degree s the new generators form a deterministic reduced
    echelon complement of the x0/x1 shifts of the previous kernel inside
    the degree-s kernel; exactly as many arise as the type has entries
    with 1 - a = s. Mismatched counts raise, which signals that st is not
    the true splitting type of the tuple.
    """
    F = forms[0].field
    nf = len(forms)
    smax = 1 - st.entries[0]
    expected = {s: sum(1 for a in st.entries if 1 - a == s) for s in range(smax + 1)}
    prev = []          # kernel basis in degree s-1, as raw vectors
    gens = []
    for s in range(smax + 1):
        cur = _kernel_vectors(forms, s - 1)
        old = []
        for vec in prev:
            for by_x1 in (False, True):
                shifted = []
                for j in range(nf):
                    block = vec[j * s:(j + 1) * s]
                    blk = [F.zero] * (s + 1)
                    for t, c in enumerate(block):
                        blk[t + (1 if by_x1 else 0)] = c
                    shifted.extend(blk)
                old.append(shifted)
        new_vecs = _echelon_complement(old, cur, F)
        if len(new_vecs) != expected[s]:
            raise ConsistencyError(
                f"found {len(new_vecs)} new syzygies in degree {s}, "
                f"expected {expected[s]}; {st.label()} is not the splitting type")
        width = s + 1
        for vec in new_vecs:
            cols = tuple(BinaryForm(F, s, vec[j * width:(j + 1) * width])
                         for j in range(nf))
            gens.append(SyzygyGenerator(degree=s, forms=cols))
        prev = cur
    return gens


def _echelon_complement(old_rows, candidates, field):
    """Candidates that extend the row space of old_rows, reduced.

    Maintains a pivot-indexed echelon of the old space, then inserts the
    candidate vectors in order; a candidate surviving reduction is
    normalized, recorded, and joins the echelon. Fixed scan order makes
    the output deterministic.
    """
    echelon = {}  # pivot column -> row

    def reduce(vec):
        vec = list(vec)
        for c in range(len(vec)):
            if field.is_zero(vec[c]):
                continue
            row = echelon.get(c)
            if row is None:
                return vec, c
            f = vec[c]
            vec = [field.sub(a, field.mul(f, b)) for a, b in zip(vec, row)]
        return vec, None

    def insert(vec):
        vec, piv = reduce(vec)
        if piv is None:
            return None
        inv = field.inv(vec[piv])
        vec = [field.mul(inv, c) for c in vec]
        echelon[piv] = vec
        return vec

    for row in old_rows:
        insert(row)
    out = []
    for cand in candidates:
        vec = insert(cand)
        if vec is not None:
            out.append(vec)
    return out


# ----------------------------------------------------------------------
# Witness construction
# ----------------------------------------------------------------------


def _form_det(grid):
    """Determinant of a square matrix of binary forms, cofactor expansion."""
    size = len(grid)
    F = grid[0][0].field
    if size == 1:
        return grid[0][0]
    total_deg = sum(grid[0][j].degree for j in range(size))
    acc = BinaryForm.zero(F, total_deg)
    sign = 1
    for r in range(size):
        entry = grid[r][0]
        if not entry.is_zero():
            minor = [row[1:] for i, row in enumerate(grid) if i != r]
            term = entry * _form_det(minor)
            acc = acc + (term if sign > 0 else -term)
        sign = -sign
    return acc


def witness_from_matrix(rows):
    """Form tuple with prescribed syzygies from a matrix of binary forms.

    rows is an (n-1) x (n-2) grid whose column k has degree 1 - a_k; the
    output tuple lists the signed maximal minors, f_i = (-1)^i det of the
    matrix with row i deleted (rows 1-indexed here to keep the sign
    pattern of the alternating Laplace expansion). Every column of the
    input is then a syzygy of the output, so the splitting type of the
    output specializes to the type the column degrees encode.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    if nrows != ncols + 1:
        raise DomainError("witness matrix must be (n-1) x (n-2)")
    col_degs = []
    for j in range(ncols):
        degs = {rows[i][j].degree for i in range(nrows)}
        if len(degs) != 1:
            raise DomainError(f"column {j} mixes degrees {sorted(degs)}")
        col_degs.append(degs.pop())
    target_deg = sum(col_degs)
    forms = []
    for i in range(nrows):
        minor = [rows[r] for r in range(nrows) if r != i]
        det = _form_det(minor)
        if det.degree != target_deg:
            raise ConsistencyError("minor degree mismatch")
        forms.append(det if (i + 1) % 2 == 0 else -det)
    if all(f.is_zero() for f in forms):
        raise DomainError("all maximal minors vanish; the matrix drops rank")
    return forms


@dataclass
class WitnessResult:
    splitting: SplittingType
    matrix: list
    forms: list
    profile: RankProfile
    retries: int

    def to_json(self):
        return {
            "type": self.splitting.to_json(),
            "A": [[g.to_json() for g in row] for row in self.matrix],
            "minors": [f.to_json() for f in self.forms],
            "rank_profile": self.profile.to_json(),
            "recovered_type": self.splitting.to_json(),
            "retries": self.retries,
        }


def _random_form(field, degree, rng):
    if field.char:
        return BinaryForm(field, degree,
                          [rng.randrange(field.char) for _ in range(degree + 1)])
    span = 4 * degree + 9
    return BinaryForm(field, degree,
                      [field.from_int(rng.randrange(-span, span + 1))
                       for _ in range(degree + 1)])


def witness_attempt(st: SplittingType, field, rng):
    """One random draw: matrix, its minors, and the realized type (None
    when the minors are degenerate)."""
    n = st.n
    rows = [[_random_form(field, 1 - a, rng) for a in st.entries]
            for _ in range(n - 1)]
    try:
        forms = witness_from_matrix(rows)
        realized, profile = splitting_type(forms)
    except (DomainError, ConsistencyError):
        return rows, None, None, None
    return rows, forms, realized, profile


def random_witness(st: SplittingType, field, seed, max_retries=20) -> WitnessResult:
    """Seeded witness tuple realizing the splitting type exactly.

    Samples coefficient matrices until the minors' splitting type matches,
    which for generic draws happens immediately; the retry budget guards
    the degenerate tail. Requires more field elements than 4d so the
    failure probability per draw stays small.
    """
    if field.char and field.char <= 4 * st.d:
        raise DomainError(f"field too small: need more than {4 * st.d} elements")
    _guard_characteristic(field, st.d)
    rng = random.Random(seed)
    last = None
    for attempt in range(max_retries):
        rows, forms, realized, profile = witness_attempt(st, field, rng)
        if realized == st:
            return WitnessResult(splitting=st, matrix=rows, forms=forms,
                                 profile=profile, retries=attempt)
        last = realized
    raise DomainError(
        f"no witness for {st.label()} within {max_retries} draws; "
        f"last realized type: {last.label() if last else 'degenerate'}")


# ----------------------------------------------------------------------
# Local stratum equations in a Grassmannian chart
# ----------------------------------------------------------------------


def _poly_minors(grid, size, field, nvars):
    """All size x size minors of a grid of multivariate polynomials."""
    from itertools import combinations

    nr, nc = len(grid), len(grid[0])
    out = []
    for rsel in combinations(range(nr), size):
        for csel in combinations(range(nc), size):
            out.append(_poly_det([[grid[r][c] for c in csel] for r in rsel],
                                 field, nvars))
    return out


def _poly_det(grid, field, nvars):
    size = len(grid)
    if size == 1:
        return grid[0][0]
    acc = MultiPoly.zero(field, nvars)
    sign = 1
    for r in range(size):
        entry = grid[r][0]
        if not entry.is_zero():
            minor = [row[1:] for i, row in enumerate(grid) if i != r]
            term = entry * _poly_det(minor, field, nvars)
            acc = acc + (term if sign > 0 else -term)
        sign = -sign
    return acc


def local_equations(f: MultiPoly, st: SplittingType, line: Line | None = None,
                    force_size: bool = False):
    """Closure equations of a stratum in the chart around a base line.

    Substitutes the chart parametrization x_i = a_i0 x0 + a_i1 x1 into
    each partial of f, collects the binary-form coefficients as
    polynomials in the 2(n-1) chart variables, and returns every minor one
    past the expected rank of the twist-i matrices for i = -1 .. d-2,
    skipping twists whose expected rank is not an actual condition. The
    chart is adapted so the base line (default the standard one) becomes
    x2 = ... = xn = 0. Sizes are guarded at n <= 5, d <= 4 unless forced.
    """
    F = f.field
    n, d = st.n, st.d
    if f.nvars != n + 1:
        raise DomainError("polynomial does not match the type's ambient dimension")
    if not f.is_homogeneous() or f.degree() != d:
        raise DomainError(f"defining equation must be homogeneous of degree {d}")
    _guard_characteristic(F, d)
    if not force_size and (n > 5 or d > 4):
        raise DomainError("minor expansion guarded at n <= 5, d <= 4; "
                          "pass force_size=True to override")

    if line is not None:
        transform = _completion_transform(line)
        images = []
        for k in range(n + 1):
            img = MultiPoly.zero(F, n + 1)
            for j in range(n + 1):
                if not F.is_zero(transform[k][j]):
                    img = img + MultiPoly.variable(F, n + 1, j).scale(transform[k][j])
            images.append(img)
        f = f.substitute(images)

    # substitution x_i -> a_i0 x0 + a_i1 x1 into the combined ring
    # (x0, x1, a_20, a_21, ..., a_n0, a_n1)
    nv = 2 + 2 * (n - 1)
    images = [MultiPoly.variable(F, nv, 0), MultiPoly.variable(F, nv, 1)]
    for i in range(2, n + 1):
        a0 = MultiPoly.variable(F, nv, 2 * (i - 2) + 2)
        a1 = MultiPoly.variable(F, nv, 2 * (i - 2) + 3)
        x0 = MultiPoly.variable(F, nv, 0)
        x1 = MultiPoly.variable(F, nv, 1)
        images.append(a0 * x0 + a1 * x1)

    coeff_grid = []
    zero_chart = MultiPoly.zero(F, nv - 2)
    for i in range(2, n + 1):
        sub = f.partial(i).substitute(images)
        by_x = sub.coefficients_by(2)
        row = []
        for j in range(d):
            # coefficient of x0^(d-1-j) x1^j
            row.append(by_x.get((d - 1 - j, j), zero_chart))
        coeff_grid.append(row)

    equations = []
    for i in range(-1, d - 1):
        r = st.expected_rank(i)
        rows = d + i + 1
        cols = (i + 2) * (n - 1)
        if r >= min(rows, cols):
            continue
        # twist-i matrix with chart-polynomial entries
        grid = [[zero_chart] * cols for _ in range(rows)]
        for j in range(n - 1):
            for s in range(i + 2):
                col = j * (i + 2) + s
                for t in range(d):
                    grid[s + t][col] = coeff_grid[j][t]
        equations.extend(_poly_minors(grid, r + 1, F, nv - 2))
    return equations
