from fractions import Fraction

import pytest

from rhoq.calculus import RhoQParams, rhoq_binomial
from rhoq.integration import (
    bracket_power,
    const,
    coordinate,
    mixed_power,
    poly_in_x,
    ratio_exponential,
)
from rhoq.mahler import (
    MahlerSeries,
    difference_quotient_norm_grid,
    lipschitz_norm_grid,
    mahler_coefficients,
    mahler_evaluate,
    sup_norm_grid,
    truncation_polynomial,
)
from .oracles import finite_differences, rat_mod


def params(p=5, rho_k=1, q_k=2, prec=12):
    return RhoQParams.from_offsets(p, rho_k, q_k, prec)


class TestBasis:
    def test_triangularity(self):
        pr = params(prec=10)
        for i in list(range(0, 25)) + [40, 64]:
            assert rhoq_binomial(i, i, pr).residue(8) == 1
            if i:
                assert rhoq_binomial(i - 1, i, pr).is_exact_zero

    def test_first_basis_element_is_bracket(self):
        pr = params(prec=10)
        from rhoq.calculus import rhoq_integer

        for x in (1, 4, 11):
            assert rhoq_binomial(x, 1, pr).agrees(rhoq_integer(x, pr))


class TestCoefficients:
    def test_bracket_is_basis_vector(self):
        pr = params(prec=12)
        series = mahler_coefficients(bracket_power(1), 6, pr)
        norms = series.norms()
        assert norms[0] == 0
        assert series.coefficients[1].residue(8) == 1
        assert all(n == 0 for n in norms[2:])

    def test_constant(self):
        pr = params(prec=12)
        series = mahler_coefficients(const(7), 5, pr)
        assert series.coefficients[0].residue(10) == 7
        assert all(n == 0 for n in series.norms()[1:])

    def test_classical_square(self):
        pr = RhoQParams.classical(5, 12)
        series = mahler_coefficients(poly_in_x([0, 0, 1]), 6, pr)
        got = [c.residue(8) if not c.is_zero_residue else 0 for c in series.coefficients]
        assert got[:3] == [0, 1, 2]  # x^2 = C(x,1) + 2 C(x,2)
        assert all(g == 0 for g in got[3:])
        assert series.basis == "classical"

    def test_finite_difference_oracle_all_polynomials(self):
        pr = RhoQParams.classical(5, 14)
        for coeffs in ([1, 2], [0, 0, 1], [3, 0, 0, 1], [1, 1, 1, 1, 1, 1, 1]):
            f = poly_in_x(coeffs)
            order = 8
            series = mahler_coefficients(f, order, pr)
            values = [sum(Fraction(c) * x**i for i, c in enumerate(coeffs)) for x in range(order + 1)]
            expected = finite_differences(values)
            for c, e in zip(series.coefficients, expected):
                if c.is_zero_residue:
                    assert rat_mod(e, 5, 10) == 0
                else:
                    assert c.residue(10) == rat_mod(e, 5, 10)


class TestRoundtrip:
    @pytest.mark.parametrize(
        "f",
        [const(2), coordinate(), bracket_power(2), ratio_exponential(), mixed_power(1, 1)],
        ids=lambda f: f.describe(),
    )
    def test_solve_then_evaluate(self, f):
        pr = params(prec=12)
        order = 10
        series = mahler_coefficients(f, order, pr)
        for i in range(order + 1):
            assert mahler_evaluate(series, i).agrees(f.evaluate(i, pr, 12), 10)

    def test_empty_series_evaluates_to_zero(self):
        pr = params()
        series = MahlerSeries(pr, [])
        assert mahler_evaluate(series, 3).is_exact_zero


class TestTruncation:
    def test_full_length_equals_evaluate(self):
        pr = params(prec=12)
        series = mahler_coefficients(ratio_exponential(), 8, pr)
        f_m = truncation_polynomial(series, 8)
        for x in (0, 3, 8, 12):
            assert f_m.evaluate(x, pr, 10).agrees(mahler_evaluate(series, x, 10), 9)

    def test_order_zero_is_constant(self):
        pr = params(prec=12)
        f = ratio_exponential()
        series = mahler_coefficients(f, 6, pr)
        f_0 = truncation_polynomial(series, 0)
        v0 = f.evaluate(0, pr, 12)
        for x in (0, 2, 9):
            assert f_0.evaluate(x, pr, 12).agrees(v0, 10)

    def test_truncation_error_bounded_by_tail(self):
        # sup |f - f_m| on the grid <= sup of the dropped coefficient norms
        pr = params(prec=12)
        f = ratio_exponential()
        order = 14
        series = mahler_coefficients(f, order, pr)
        for m in (4, 8, 11):
            f_m = truncation_polynomial(series, m)
            tail = series.tail_norm(m + 1)
            worst = Fraction(0)
            for x in range(5**3):
                d = f.evaluate(x, pr, 12) - f_m.evaluate(x, pr, 12)
                from rhoq.sequences import gap_norm

                worst = max(worst, gap_norm(d))
            assert worst <= tail

    def test_tail_can_be_pushed_below_tolerance(self):
        pr = params(prec=12)
        series = mahler_coefficients(ratio_exponential(), 16, pr)
        m = next(m for m in range(17) if series.tail_norm(m) <= Fraction(1, 5**3))
        f_m = truncation_polynomial(series, min(m, series.order))
        f = ratio_exponential()
        from rhoq.sequences import gap_norm

        worst = max(
            gap_norm(f.evaluate(x, pr, 12) - f_m.evaluate(x, pr, 12)) for x in range(5**3)
        )
        assert worst <= Fraction(1, 5**3)


class TestDecay:
    @pytest.mark.parametrize(
        "f", [ratio_exponential(), mixed_power(1, 1)], ids=lambda f: f.describe()
    )
    def test_continuous_families_decay(self, f):
        pr = params(prec=14)
        series = mahler_coefficients(f, 20, pr)
        norms = series.norms()
        for n in range(10, 21):
            assert norms[n] <= Fraction(1, 5 ** (n // 5))


class TestGridNorms:
    def test_sup_norm_of_identity(self):
        pr = params(prec=10)
        assert sup_norm_grid(coordinate(), pr, 2) == 1

    def test_difference_quotient_of_identity(self):
        pr = params(prec=10)
        assert difference_quotient_norm_grid(coordinate(), pr, 2) == 1

    def test_lipschitz_norm_is_join(self):
        pr = params(prec=10)
        f = const(Fraction(1, 5))  # sup norm 5, difference quotient 0
        assert lipschitz_norm_grid(f, pr, 1) == 5
