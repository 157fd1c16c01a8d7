"""Tangent spaces to the Fano scheme and to its splitting-type strata.

The tangent space to the Fano scheme at a line is the kernel of the
twist-0 multiplication matrix. A tangent vector stays inside the stratum
of the line's splitting type exactly when, for every syzygy generator of
degree 1-a, the pairing of that generator with the restricted Hessian and
the vector lands in the span of the restricted partials with coefficient
forms of that same degree. Each such membership condition is eliminated
by adjoining the span's multiplication matrix with fresh unknowns and
projecting the joint kernel back onto the tangent coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, SingularAlongLine
from .exactalg import BinaryForm, ExactMatrix, MultiPoly, rank_and_kernel
from .normal import (Line, LineRestriction, adapt_coordinates, build_C,
                     splitting_type, syzygy_generators, witness_from_matrix)
from .strata import SplittingType


@dataclass
class TangentReport:
    splitting: SplittingType
    dim_TF: int
    dim_TFa: int
    conditions_matrix: ExactMatrix
    generator_rows: list      # condition rows contributed per generator

    @property
    def codim(self):
        return self.dim_TF - self.dim_TFa

    def to_json(self):
        return {"splitting": self.splitting.to_json(),
                "dim_TF": self.dim_TF, "dim_TFa": self.dim_TFa,
                "codim": self.codim,
                "generator_rows": list(self.generator_rows)}


def tangent_dims_from_restriction(res: LineRestriction,
                                  generators=None) -> TangentReport:
    """Tangent dimensions from restricted derivative data.

    `generators` overrides the syzygy generators (any generating set of
    the same degrees gives the same dimensions; the override exists so the
    basis independence can be tested).
    """
    F = res.field
    n, d = res.n, res.d
    forms = res.forms
    if not res.smooth_along_line():
        raise SingularAlongLine(
            "the restricted partials share a zero; the hypersurface is "
            "singular at a point of the line")
    st, _ = splitting_type(forms)
    if generators is None:
        generators = syzygy_generators(forms, st)

    c0 = build_C(forms, 0)
    rank_c0, _ = rank_and_kernel(c0)
    v_dim = 2 * (n - 1)
    dim_tf = v_dim - rank_c0

    # assembled system over (v coordinates | auxiliary span coefficients)
    aux_total = sum((2 - (1 - g.degree)) * (n - 1) for g in generators)
    rows = []
    gen_rows = []

    # membership in the Fano tangent space: C(0) v = 0
    for r in range(c0.rows):
        rows.append(list(c0.entries[r]) + [F.zero] * aux_total)

    aux_offset = v_dim
    for g in generators:
        s = g.degree                       # 1 - a_k
        a_k = 1 - s
        # E(v) = sum_j (sum_i c_i H_ij) v_j, a form of degree d - a_k
        pair = []
        for j in range(n - 1):
            acc = BinaryForm.zero(F, d - 2 + s)
            for i in range(n - 1):
                acc = acc + g.forms[i] * res.hessian[i][j]
            pair.append(acc)
        span = build_C(forms, -a_k)        # image: span with degree-s coefficients
        e_rows = d - a_k + 1
        block = []
        for r in range(e_rows):
            row = [F.zero] * v_dim
            for j in range(n - 1):
                # v_j = v_j0 x0 + v_j1 x1 multiplies the paired form
                for comp in (0, 1):
                    shifted = pair[j].shift(1 - comp, comp)
                    row[2 * j + comp] = shifted.coeffs[r]
            row += [F.zero] * aux_total
            block.append(row)
        for r in range(e_rows):
            for c in range(span.cols):
                block[r][aux_offset + c] = F.neg(span.entries[r][c])
        rows.extend(block)
        gen_rows.append(e_rows)
        aux_offset += span.cols

    system = ExactMatrix(F, rows) if rows else ExactMatrix.zero(F, 0, v_dim)
    _, kernel = rank_and_kernel(system)
    # dimension of the projection of the solution space onto v coordinates
    proj = [vec[:v_dim] for vec in kernel]
    if proj:
        dim_tfa, _ = rank_and_kernel(ExactMatrix(F, proj))
    else:
        dim_tfa = 0
    return TangentReport(splitting=st, dim_TF=dim_tf, dim_TFa=dim_tfa,
                         conditions_matrix=system, generator_rows=gen_rows)


def tangent_dims(f: MultiPoly, line: Line) -> TangentReport:
    """Tangent dimensions at a line on the hypersurface f = 0."""
    return tangent_dims_from_restriction(adapt_coordinates(f, line))


# ----------------------------------------------------------------------
# Cubic normal form
# ----------------------------------------------------------------------


def cubic_tangent_matrix(f: MultiPoly, line: Line) -> ExactMatrix:
    """Hessian-coefficient matrix for a cubic in unbalanced normal form.

    Requires the restricted partials to be exactly (x0^2, x1^2, 0, ..., 0);
    then the tangent space to the unbalanced stratum is the kernel of the
    (n-3) x 2(n-3) matrix with row i and column pair j listing the x1 and
    x0 coefficients of the restricted second partial H_{ij} for i, j past
    the first two variables, and the rank of the matrix is the codimension
    of the stratum tangent space inside the Fano one.
    """
    res = adapt_coordinates(f, line)
    F, n = res.field, res.n
    if res.d != 3:
        raise DomainError("normal form analysis applies to cubics only")
    x0sq = BinaryForm.monomial(F, 2, 0)
    x1sq = BinaryForm.monomial(F, 2, 2)
    good = (res.forms[0] == x0sq and res.forms[1] == x1sq
            and all(g.is_zero() for g in res.forms[2:]))
    if not good:
        raise DomainError(
            "restricted partials are not in the normal form (x0^2, x1^2, 0, ...)")
    if n < 4:
        return ExactMatrix.zero(F, 0, 0)
    entries = []
    for i in range(2, n - 1):
        row = []
        for j in range(2, n - 1):
            h = res.hessian[i][j]   # linear form h0 x0 + h1 x1
            row.extend([h.coeffs[1], h.coeffs[0]])
        entries.append(row)
    return ExactMatrix(F, entries)


# ----------------------------------------------------------------------
# Explicit unbalanced witness with prescribed tangent codimension
# ----------------------------------------------------------------------


def unbalanced_witness_matrix(b: int, l: int, m: int, field):
    """The explicit (n-1) x (n-2) bidiagonal witness matrix for the type
    with b entries -1, l entries 0 and m entries 1 (so n = b+l+m+2 and
    d = 2b+l+1): two overlapping bidiagonal blocks in x0^2/x1^2 and x0/x1
    followed by an identity block."""
    n = b + l + m + 2
    d = 2 * b + l + 1
    F = field
    x0sq = BinaryForm.monomial(F, 2, 0)
    x1sq = BinaryForm.monomial(F, 2, 2)
    x0 = BinaryForm.monomial(F, 1, 0)
    x1 = BinaryForm.monomial(F, 1, 1)
    one = BinaryForm.monomial(F, 0, 0)
    rows = [[None] * (n - 2) for _ in range(n - 1)]
    for r in range(n - 1):
        for c in range(n - 2):
            if c < b:
                deg = 2
            elif c < b + l:
                deg = 1
            else:
                deg = 0
            rows[r][c] = BinaryForm.zero(F, deg)
    for c in range(b):
        rows[c][c] = x0sq
        rows[c + 1][c] = x1sq
    for k in range(l):
        rows[b + k][b + k] = x0
        rows[b + k + 1][b + k] = x1
    for k in range(m):
        rows[b + l + 1 + k][b + l + k] = one
    return rows


def explicit_tangent_witness(b: int, l: int, m: int, field) -> LineRestriction:
    """Restricted derivative data realizing tangent codimension b*m.

    Builds the minors of the explicit witness matrix as the restricted
    partials and fills the Hessian with the crafted entries that make
    every stratum condition an independent linear condition: each of the
    m diagonal entries past the zero block carries x1^(d-2) plus
    x0^3 x1^(d-5) (the second monomial omitted when its exponent is
    negative), and for b >= 3 the off-diagonal entries x0^(2i) x1^(d-2i-2)
    peel off one column of the zero block per condition. Needs l large
    enough to host the m*(b-2) off-diagonal conditions.
    """
    if b < 0 or l < 0 or m < 0:
        raise DomainError("block sizes must be nonnegative")
    cross = max(0, b - 2) * m
    if cross > l:
        raise DomainError(
            f"need l >= m*(b-2) = {cross} zero entries to host the "
            "off-diagonal conditions")
    n = b + l + m + 2
    d = 2 * b + l + 1
    if n < 3:
        raise DomainError("resulting ambient dimension is too small")
    F = field
    forms = witness_from_matrix(unbalanced_witness_matrix(b, l, m, field))

    hess = [[BinaryForm.zero(F, d - 2) for _ in range(n - 1)] for _ in range(n - 1)]
    for g in range(m):
        k0 = b + l + 1 + g
        diag = BinaryForm.monomial(F, d - 2, d - 2)
        if d - 5 >= 0:
            diag = diag + BinaryForm.monomial(F, d - 2, d - 5)
        hess[k0][k0] = diag
        for i in range(2, b):
            j0 = (b - 2) + i + g * (b - 2)
            cross_term = BinaryForm.monomial(F, d - 2, d - 2 * i - 2)
            hess[k0][j0] = hess[k0][j0] + cross_term
            hess[j0][k0] = hess[k0][j0]
    line = Line.standard(F, n)
    return LineRestriction(field=F, n=n, d=d, forms=forms, hessian=hess,
                           transform=[r[:] for r in
                                      ExactMatrix.identity(F, n + 1).entries],
                           line=line)
