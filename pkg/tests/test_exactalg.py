import random
from fractions import Fraction

import pytest
from conftest import sympy_rank

from fanostrata.errors import DomainError, FieldMismatchError
from fanostrata.exactalg import (GF, QQ, BinaryForm, ExactMatrix, MultiPoly,
                                 binary_form_multiply, common_projective_zero,
                                 field_from_tag, rank_and_kernel, rref,
                                 solve_in_span)


class TestFields:
    def test_prime_field_canonical(self):
        F = GF(7)
        assert F.add(5, 5) == 3
        assert F.neg(3) == 4
        assert F.mul(F.inv(3), 3) == 1
        assert F.from_int(-1) == 6

    def test_rational_lowest_terms(self):
        x = QQ.from_fraction(Fraction(4, 6))
        assert (x.numerator, x.denominator) == (2, 3)
        assert QQ.from_fraction(Fraction(1, -2)).denominator == 2

    def test_composite_modulus_rejected(self):
        with pytest.raises(DomainError):
            GF(91)

    def test_field_tags(self):
        assert field_from_tag("q") is QQ or field_from_tag("q") == QQ
        assert field_from_tag("p:41").char == 41
        with pytest.raises(DomainError):
            field_from_tag("r:5")

    def test_fraction_to_prime_field(self):
        F = GF(11)
        assert F.from_fraction(Fraction(1, 2)) == 6
        with pytest.raises(DomainError):
            F.from_fraction(Fraction(1, 11))


class TestBinaryForms:
    def test_monomial_product(self):
        x0 = BinaryForm.from_ints(QQ, [1, 0])
        x1 = BinaryForm.from_ints(QQ, [0, 1])
        prod = binary_form_multiply(x0, x1)
        assert prod.degree == 2
        assert [int(c) for c in prod.coeffs] == [0, 1, 0]

    def test_identity_product(self):
        f = BinaryForm.from_ints(QQ, [1, 0, 1])
        one = BinaryForm.from_ints(QQ, [1])
        assert binary_form_multiply(f, one) == f

    def test_binomial_cube(self):
        # oracle: binomial coefficients
        import math
        f = BinaryForm.from_ints(QQ, [1, 1])
        cube = f * f * f
        assert [int(c) for c in cube.coeffs] == [math.comb(3, k) for k in range(4)]

    def test_field_mismatch(self):
        with pytest.raises(FieldMismatchError):
            binary_form_multiply(BinaryForm.from_ints(QQ, [1]),
                                 BinaryForm.from_ints(GF(5), [1]))

    def test_shift(self):
        f = BinaryForm.from_ints(QQ, [1, 2])
        g = f.shift(1, 1)
        assert g.degree == 3
        assert [int(c) for c in g.coeffs] == [0, 1, 2, 0]

    def test_common_zero_detection(self):
        F = GF(101)
        f = BinaryForm(F, 2, [1, 100, 0])     # x0(x0 - x1), roots [0:1], [1:1]
        g = BinaryForm(F, 2, [1, 0, 100])     # (x0-x1)(x0+x1), roots [1:1], [1:-1]
        assert common_projective_zero([f, g])
        assert not common_projective_zero(
            [BinaryForm(F, 1, [1, 0]), BinaryForm(F, 1, [0, 1])])
        # zero forms vanish everywhere but do not constrain the others
        assert not common_projective_zero(
            [BinaryForm(F, 1, [1, 0]), BinaryForm(F, 1, [0, 1]),
             BinaryForm.zero(F, 1)])
        assert common_projective_zero([BinaryForm.zero(F, 2)])
        # common zero at [1:0]: both divisible by x1
        assert common_projective_zero(
            [BinaryForm(F, 2, [0, 1, 0]), BinaryForm(F, 2, [0, 0, 1])])


class TestRankAndKernel:
    def test_identity(self):
        rank, kernel = rank_and_kernel(ExactMatrix.identity(QQ, 3))
        assert rank == 3 and kernel == []

    def test_zero_matrix(self):
        rank, kernel = rank_and_kernel(ExactMatrix.zero(QQ, 2, 5))
        assert rank == 0
        assert len(kernel) == 5
        for i, vec in enumerate(kernel):
            assert [int(c) for c in vec] == [1 if j == i else 0 for j in range(5)]

    def test_hand_elimination_case(self):
        # columns (1,0,0), (0,0,1), (0,0,0)
        m = ExactMatrix.from_int_rows(QQ, [[1, 0, 0], [0, 0, 0], [0, 1, 0]])
        rank, kernel = rank_and_kernel(m)
        assert rank == 2
        assert kernel == [[Fraction(0), Fraction(0), Fraction(1)]]

    @pytest.mark.parametrize("seed", range(6))
    def test_kernel_annihilates(self, seed):
        rng = random.Random(seed)
        F = QQ
        rows = [[F.from_int(rng.randrange(-9, 10)) for _ in range(7)]
                for _ in range(4)]
        m = ExactMatrix(F, rows)
        rank, kernel = rank_and_kernel(m)
        assert rank + len(kernel) == m.cols
        for vec in kernel:
            assert all(F.is_zero(v) for v in m.mat_vec(vec))

    @pytest.mark.parametrize("seed", range(4))
    def test_rank_matches_sympy(self, seed):
        rng = random.Random(100 + seed)
        rows = [[rng.randrange(-9, 10) for _ in range(8)] for _ in range(8)]
        m = ExactMatrix.from_int_rows(QQ, rows)
        assert rank_and_kernel(m)[0] == sympy_rank(rows)

    @pytest.mark.parametrize("seed", range(4))
    def test_rational_vs_large_prime_rank(self, seed):
        # field independence for integer matrices and a large prime
        rng = random.Random(200 + seed)
        rows = [[rng.randrange(-9, 10) for _ in range(8)] for _ in range(8)]
        rank_q = rank_and_kernel(ExactMatrix.from_int_rows(QQ, rows))[0]
        F = GF(1000000007)
        rank_p = rank_and_kernel(ExactMatrix.from_int_rows(F, rows))[0]
        assert rank_q == rank_p

    def test_bareiss_equals_naive_on_100_instances(self):
        rng = random.Random(42)
        for _ in range(100):
            rows = [[Fraction(rng.randrange(-9, 10), rng.randrange(1, 5))
                     for _ in range(6)] for _ in range(6)]
            m = ExactMatrix(QQ, rows)
            assert rref(m) == rref(m, method="naive")

    def test_prime_field_kernel(self):
        F = GF(13)
        m = ExactMatrix.from_int_rows(F, [[1, 2, 3], [2, 4, 6]])
        rank, kernel = rank_and_kernel(m)
        assert rank == 1 and len(kernel) == 2
        for vec in kernel:
            assert all(F.is_zero(v) for v in m.mat_vec(vec))


class TestSolveInSpan:
    def test_zero_target(self):
        span = ExactMatrix.from_int_rows(QQ, [[1, 2], [3, 4]])
        [(ok, v)] = solve_in_span([[Fraction(0), Fraction(0)]], span)
        assert ok and all(c == 0 for c in v)

    def test_first_column(self):
        span = ExactMatrix.from_int_rows(QQ, [[1, 5], [0, 7]])
        [(ok, v)] = solve_in_span([[Fraction(1), Fraction(0)]], span)
        assert ok
        assert span.mat_vec(v) == [Fraction(1), Fraction(0)]
        assert v == [Fraction(1), Fraction(0)]

    def test_certificate(self):
        span = ExactMatrix.from_int_rows(QQ, [[1], [0]])
        [(ok, cert)] = solve_in_span([[Fraction(0), Fraction(1)]], span)
        assert not ok
        assert cert == [Fraction(0), Fraction(1)]
        # certificate is a left null vector not orthogonal to the target
        assert all(sum(c * span.entries[i][j] for i, c in enumerate(cert)) == 0
                   for j in range(span.cols))


class TestMultiPoly:
    def test_parse_print_round_trip(self):
        p = MultiPoly.parse("x0^3 + 2/3*x1*x2 - x2^3", QQ)
        again = MultiPoly.parse(p.to_text(), QQ)
        assert p == again

    def test_json_round_trip(self):
        p = MultiPoly.parse("x0^2*x1 - 5*x3", QQ)
        assert MultiPoly.from_json(p.to_json(), QQ) == p

    def test_graded_lex_printing(self):
        p = MultiPoly.parse("x1 + x0^2", QQ)
        assert p.to_text() == "1*x0^2 + 1*x1"

    def test_partial_derivative(self):
        p = MultiPoly.parse("x0^3 + x0*x1^2", QQ)
        dp = p.partial(0)
        assert dp == MultiPoly.parse("3*x0^2 + x1^2", QQ, nvars=2)

    def test_substitute(self):
        F = QQ
        p = MultiPoly.parse("x0*x1", F)
        x0 = MultiPoly.variable(F, 2, 0)
        x1 = MultiPoly.variable(F, 2, 1)
        q = p.substitute([x0 + x1, x1])
        assert q == MultiPoly.parse("x0*x1 + x1^2", F)

    def test_evaluate(self):
        p = MultiPoly.parse("x0^2 - x1", QQ)
        assert p.evaluate([Fraction(3), Fraction(4)]) == Fraction(5)

    def test_homogeneous(self):
        assert MultiPoly.parse("x0^2 + x1*x2", QQ).is_homogeneous()
        assert not MultiPoly.parse("x0^2 + x1", QQ).is_homogeneous()

    def test_parse_errors(self):
        with pytest.raises(DomainError):
            MultiPoly.parse("x0 + + x1", QQ)
        with pytest.raises(DomainError):
            MultiPoly.parse("x9", QQ, nvars=3)
