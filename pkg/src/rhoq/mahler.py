"""Mahler expansion in the Gaussian-binomial basis, with norm diagnostics.

Coefficients are extracted by forward substitution against the values at
0..M: the basis matrix {i choose n} is lower-triangular with unit diagonal,
so the solve is definitionally exact at working precision.  Sup-norms over
Z_p are approximated by grid maxima at a configurable depth (ultrametric
continuity makes grid maxima exact for the polynomial-type functions used
here once the grid is deep enough).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from .calculus import RhoQParams, rhoq_binomial, vp_factorial
from .integration import IntegrableFunction, mahler_function
from .measures import lipschitz_estimate
from .padic import PadicNumber
from .sequences import gap_norm


@dataclass
class MahlerSeries:
    """A finite expansion sum a_n {x choose n} in the deformed binomial basis."""

    params: RhoQParams
    coefficients: list[PadicNumber]
    basis: str = "gaussian"  # "classical" when rho = q = 1

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def norms(self) -> list[Fraction]:
        """|a_n| per coefficient (zero at working precision counts as 0)."""
        return [gap_norm(c) for c in self.coefficients]

    def decay_index(self) -> int:
        """Smallest index from which the coefficient norms are non-increasing."""
        ns = self.norms()
        idx = len(ns) - 1
        while idx > 0 and ns[idx - 1] >= ns[idx]:
            idx -= 1
        return idx

    def tail_norm(self, m: int) -> Fraction:
        """sup of |a_n| over n >= m (0 when the tail is empty)."""
        tail = self.norms()[m:]
        return max(tail) if tail else Fraction(0)

    def describe(self) -> dict:
        return {
            "basis": self.basis,
            "order": self.order,
            "coefficients": [c.digit_string() for c in self.coefficients],
            "norms": [str(n) for n in self.norms()],
            "decay_index": self.decay_index(),
        }


def mahler_coefficients(
    f: IntegrableFunction,
    order: int,
    params: RhoQParams,
    *,
    digits: int | None = None,
) -> MahlerSeries:
    """Solve sum a_n {i choose n} = f(i), i = 0..order, by forward substitution."""
    if order < 0:
        raise ValueError("order must be >= 0")
    p = params.prime
    d = digits if digits is not None else params.precision
    w = d + vp_factorial(order, p) + 2
    values = [f.evaluate(i, params, w) for i in range(order + 1)]
    coeffs: list[PadicNumber] = []
    for i in range(order + 1):
        acc = values[i]
        for n_idx in range(i):
            c = coeffs[n_idx]
            if c.is_exact_zero:
                continue
            acc = acc - c * rhoq_binomial(i, n_idx, params, w)
        coeffs.append(acc)
    basis = "classical" if params.is_classical else "gaussian"
    return MahlerSeries(params, coeffs, basis)


def mahler_evaluate(series: MahlerSeries, x: int, digits: int | None = None) -> PadicNumber:
    """sum a_n {x choose n}; binomials vanish for n > x by convention."""
    if x < 0:
        raise ValueError("x must be a nonnegative integer")
    params = series.params
    p = params.prime
    d = digits if digits is not None else params.precision
    acc = PadicNumber.exact_zero(p)
    for n_idx, c in enumerate(series.coefficients):
        if c.is_exact_zero or n_idx > x:
            continue
        acc = acc + c * rhoq_binomial(x, n_idx, params, d + 1)
    return acc


def truncation_polynomial(series: MahlerSeries, m: int) -> IntegrableFunction:
    """The order-m head of the series as an integrable polynomial-type function."""
    if m > series.order:
        raise ValueError("truncation order exceeds series length")
    return mahler_function(
        tuple(series.coefficients[: m + 1]), label="mahler truncation (order %d)" % m
    )


# ---------------------------------------------------------------------------
# grid norms
# ---------------------------------------------------------------------------


def sup_norm_grid(
    f: IntegrableFunction, params: RhoQParams, level: int, *, digits: int | None = None
) -> Fraction:
    """max |f(x)| over the level-deep residue grid."""
    d = digits if digits is not None else params.precision
    best = Fraction(0)
    for x in range(params.prime**level):
        best = max(best, gap_norm(f.evaluate(x, params, d)))
    return best


def difference_quotient_norm_grid(
    f: IntegrableFunction, params: RhoQParams, level: int, *, digits: int | None = None
) -> Fraction:
    """max |f(x)-f(y)|/|x-y| over the grid (the difference-quotient sup)."""
    d = digits if digits is not None else params.precision
    return lipschitz_estimate(lambda x: f.evaluate(x, params, d), params.prime, level)


def lipschitz_norm_grid(
    f: IntegrableFunction, params: RhoQParams, level: int, *, digits: int | None = None
) -> Fraction:
    """||f||_1 = ||f||_inf  v  ||difference quotient||_inf, both on the grid."""
    return max(
        sup_norm_grid(f, params, level, digits=digits),
        difference_quotient_norm_grid(f, params, level, digits=digits),
    )
