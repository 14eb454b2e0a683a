"""Annihilator degree and minimal polynomial tests."""

import random
from fractions import Fraction

from juryconv import (
    ConvMatrix,
    Poly,
    ch_check,
    ch_polynomial,
    conv_identity,
    conv_power_naive,
    minimal_polynomial,
    poly_transform,
    scale,
    tightness_witness,
)
from juryconv.cayley_hamilton import format_minimal_polynomial

from helpers import rand_fraction, rand_rational_matrix


class TestAnnihilation:
    def test_running_example(self):
        a = ConvMatrix.rational([[1, 2], [3, 4]])
        assert ch_check(a)
        shifted = a + scale(-1, conv_identity(2, 2))
        assert conv_power_naive(shifted, 3).is_zero()

    def test_random_rational_shapes(self):
        rng = random.Random(67)
        for shape in [(2, 2), (3, 3), (2, 5), (5, 5)]:
            for _ in range(25):
                assert ch_check(rand_rational_matrix(rng, *shape))

    def test_scaled_identity_annihilated_linearly(self):
        a = scale(Fraction(9, 4), conv_identity(3, 2))
        assert poly_transform(Poly.of([Fraction(-9, 4), 1]), a).is_zero()

    def test_float_backend_with_tolerance(self):
        a = ConvMatrix.floats([[0.3, 1.7], [2.1, -0.4]])
        assert ch_check(a)

    def test_annihilator_polynomial_shape(self):
        a = ConvMatrix.rational([[2, 0, 1], [0, 1, 0]])
        p = ch_polynomial(a)
        assert p.degree == 4
        assert p.coeffs[-1] == 1  # monic


class TestTightness:
    def test_witness_nonzero_powers(self):
        # all-ones minus identity stays nonzero through order M+N-2,
        # witnessed on every anti-diagonal of matching total.
        for (m, n) in [(2, 2), (3, 3), (2, 5), (5, 5)]:
            w = tightness_witness(m, n)
            for ell in range(1, m + n - 1):
                p = conv_power_naive(w, ell)
                assert not p.is_zero()
                for i in range(m):
                    j = ell - i
                    if 0 <= j < n:
                        assert p[i, j] != 0, (m, n, ell, i, j)

    def test_witness_annihilated_at_full_degree(self):
        w = tightness_witness(3, 4)
        assert conv_power_naive(w, 6).is_zero()


class TestMinimalPolynomial:
    def test_two_by_two_case_table(self):
        # the three structural branches for [[a,b],[c,d]]
        rng = random.Random(71)
        for _ in range(10):
            a = rand_fraction(rng)
            d = rand_fraction(rng, 1, 9)  # nonzero
            b = rand_fraction(rng, 1, 9)
            c = rand_fraction(rng, 1, 9)
            assert minimal_polynomial(
                ConvMatrix.rational([[a, 0], [0, 0]])).minimal_degree == 1
            assert minimal_polynomial(
                ConvMatrix.rational([[a, 0], [0, d]])).minimal_degree == 2
            assert minimal_polynomial(
                ConvMatrix.rational([[a, b], [0, 0]])).minimal_degree == 2
            assert minimal_polynomial(
                ConvMatrix.rational([[a, 0], [c, d]])).minimal_degree == 2
            assert minimal_polynomial(
                ConvMatrix.rational([[a, b], [c, d]])).minimal_degree == 3

    def test_witness_certifies_previous_power(self):
        rng = random.Random(73)
        for shape in [(2, 2), (3, 3), (2, 4)]:
            for _ in range(20):
                a = rand_rational_matrix(rng, *shape)
                report = minimal_polynomial(a)
                shifted = a + scale(-a[0, 0], conv_identity(*shape))
                assert conv_power_naive(shifted, report.minimal_degree).is_zero()
                if report.minimal_degree >= 2:
                    prev = conv_power_naive(shifted, report.minimal_degree - 1)
                    assert not prev.is_zero()
                    assert prev[report.witness] != 0
                else:
                    assert report.witness is None

    def test_report_fields(self):
        report = minimal_polynomial(ConvMatrix.rational([[5, 2], [3, 1]]))
        assert report.root == 5
        assert report.ch_degree == 3
        assert 1 <= report.minimal_degree <= report.ch_degree

    def test_division_property(self):
        # any multiple of (z - a00)^(M+N-1) annihilates
        rng = random.Random(79)
        for _ in range(10):
            a = rand_rational_matrix(rng, 2, 3)
            base = Poly.binomial_power(a[0, 0], 4)
            q = Poly.of([rand_fraction(rng) for _ in range(rng.randint(1, 4))])
            if q.degree < 0:
                continue
            assert poly_transform(base * q, a).is_zero()

    def test_float_backend(self):
        report = minimal_polynomial(ConvMatrix.floats([[0.5, 0.2], [0.1, 0.9]]))
        assert report.minimal_degree == 3

    def test_format(self):
        rep = minimal_polynomial(ConvMatrix.rational([[5, 2], [3, 1]]))
        assert format_minimal_polynomial(rep) == "(z - 5)^3"
        rep0 = minimal_polynomial(ConvMatrix.rational([[0, 2], [3, 1]]))
        assert format_minimal_polynomial(rep0) == "z^3"
