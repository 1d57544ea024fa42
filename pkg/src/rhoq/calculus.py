"""Two-parameter deformed number system over Z_p.

Deformed integers [n] = (rho^n - q^n)/(rho - q) are always evaluated through
the summation form rho^(n-1) + rho^(n-2) q + ... + q^(n-1), never the
quotient, so rho = q is not a degenerate case and no division precision is
lost.  Powers rho^x for p-adic exponents x are defined by continuity:
the result mod p^m only depends on x mod p^m (one digit of slack against the
sharp p^(m-1) bound, which keeps the reduction rule trivial to state and
test).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

from .padic import (
    DomainError,
    PadicNumber,
    PrecisionError,
    div,
    is_odd_prime,
    vp,
)


@dataclass(frozen=True, slots=True)
class RhoQParams:
    """The deformation pair (rho, q), both restricted to 1 + pZ_p.

    The pair is stored as exact rational bases raised to p-power towers
    (value = base^(p^tower)), so lifted parameters compose exactly and any
    working precision can be re-derived on demand.  ``known_digits`` caps the
    usable precision when the parameters were given as finite digit strings
    rather than exact rationals.
    """

    prime: int
    rho_base: Fraction
    q_base: Fraction
    rho_tower: int = 0
    q_tower: int = 0
    precision: int = 12
    known_digits: int | None = None

    def __post_init__(self) -> None:
        if not is_odd_prime(self.prime):
            raise ValueError("prime must be an odd prime >= 3, got %r" % (self.prime,))
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        for name, base in (("rho", self.rho_base), ("q", self.q_base)):
            if base.denominator % self.prime == 0:
                raise DomainError("%s must be a p-adic unit" % name)
            delta = base - 1
            if delta != 0 and vp(delta.numerator, self.prime) < 1:
                raise DomainError("%s must lie in 1 + pZ_p" % name)

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_units(
        cls, p: int, rho: Fraction | int, q: Fraction | int, precision: int = 12
    ) -> "RhoQParams":
        return cls(p, Fraction(rho), Fraction(q), 0, 0, precision)

    @classmethod
    def from_offsets(cls, p: int, rho_k: int, q_k: int, precision: int = 12) -> "RhoQParams":
        """rho = 1 + rho_k * p, q = 1 + q_k * p."""
        return cls.from_units(p, 1 + rho_k * p, 1 + q_k * p, precision)

    @classmethod
    def classical(cls, p: int, precision: int = 12) -> "RhoQParams":
        """rho = q = 1: everything degenerates to the classical objects."""
        return cls.from_units(p, 1, 1, precision)

    @classmethod
    def from_residues(
        cls, p: int, rho_residue: int, q_residue: int, precision: int
    ) -> "RhoQParams":
        """Parameters known only as residues mod p^precision (digit strings)."""
        return cls(
            p,
            Fraction(rho_residue),
            Fraction(q_residue),
            0,
            0,
            precision,
            known_digits=precision,
        )

    # -- residues ------------------------------------------------------------

    def _unit_residue(self, base: Fraction, tower: int, w: int) -> int:
        if self.known_digits is not None and w > self.known_digits:
            raise PrecisionError(
                "parameters only known to %d digits; %d requested"
                % (self.known_digits, w)
            )
        mod = self.prime**w
        res = base.numerator % mod * pow(base.denominator % mod, -1, mod) % mod
        if tower:
            res = pow(res, self.prime**tower, mod)
        return res

    def rho_residue(self, w: int) -> int:
        return self._unit_residue(self.rho_base, self.rho_tower, w)

    def q_residue(self, w: int) -> int:
        return self._unit_residue(self.q_base, self.q_tower, w)

    def ratio_residue(self, w: int) -> int:
        """(q / rho) mod p^w."""
        mod = self.prime**w
        return self.q_residue(w) * pow(self.rho_residue(w), -1, mod) % mod

    @property
    def rho(self) -> PadicNumber:
        return PadicNumber(self.prime, 0, self.rho_residue(self.precision), self.precision)

    @property
    def q(self) -> PadicNumber:
        return PadicNumber(self.prime, 0, self.q_residue(self.precision), self.precision)

    @property
    def is_classical(self) -> bool:
        return self.rho_base == 1 and self.q_base == 1

    @property
    def is_symmetric_point(self) -> bool:
        """True when rho and q coincide (as exact specifications)."""
        return (
            self.rho_base == self.q_base and self.rho_tower == self.q_tower
        )

    def lifted(self, n: int) -> "RhoQParams":
        """The pair (rho^(p^n), q^(p^n)), used by the restriction identity."""
        if n < 0:
            raise ValueError("lift exponent must be >= 0")
        return replace(self, rho_tower=self.rho_tower + n, q_tower=self.q_tower + n)

    def at_precision(self, precision: int) -> "RhoQParams":
        return replace(self, precision=precision)

    def describe(self) -> dict:
        return {
            "p": self.prime,
            "rho": str(self.rho_base) + ("^(p^%d)" % self.rho_tower if self.rho_tower else ""),
            "q": str(self.q_base) + ("^(p^%d)" % self.q_tower if self.q_tower else ""),
            "precision": self.precision,
        }


# ---------------------------------------------------------------------------
# deformed integers / factorials / binomials
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _deformed_integer_residue(params: RhoQParams, n: int, w: int) -> int:
    """Sum rho^i q^(n-1-i), i = 0..n-1, as a residue mod p^w."""
    p = params.prime
    mod = p**w
    rho = params.rho_residue(w)
    q = params.q_residue(w)
    term = pow(q, n - 1, mod) if n else 0
    step = rho * pow(q, -1, mod) % mod
    acc = 0
    for _ in range(n):
        acc = (acc + term) % mod
        term = term * step % mod
    return acc


def rhoq_integer(n: int, params: RhoQParams, digits: int | None = None) -> PadicNumber:
    """[n] for a nonnegative integer n, by summation (exact at ρ = q)."""
    if n < 0:
        raise ValueError("deformed integer defined for n >= 0")
    p = params.prime
    w = digits if digits is not None else params.precision
    if n == 0:
        return PadicNumber.exact_zero(p)
    res = _deformed_integer_residue(params, n, w)
    return PadicNumber.from_integer(res, p, w) if res else PadicNumber.bounded_zero(p, w)


@lru_cache(maxsize=None)
def _p_power_bracket_residue(params: RhoQParams, N: int, w: int) -> int:
    if N == 0:
        return 1
    head = _deformed_integer_residue(params.lifted(N - 1), params.prime, w)
    return head * _p_power_bracket_residue(params, N - 1, w) % params.prime**w


def p_power_bracket(params: RhoQParams, N: int, digits: int | None = None) -> PadicNumber:
    """[p^N] via the tower product of single-level brackets at lifted parameters.

    Equal to rhoq_integer(p**N, ...) but O(N*p) instead of O(p^N); the two
    paths are cross-validated in the test suite.
    """
    p = params.prime
    w = digits if digits is not None else params.precision
    if N == 0:
        return PadicNumber.one(p, w)
    res = _p_power_bracket_residue(params, N, w)
    return PadicNumber.from_integer(res, p, w) if res else PadicNumber.bounded_zero(p, w)


@lru_cache(maxsize=None)
def _factorial_cached(params: RhoQParams, n: int, w: int) -> PadicNumber:
    if n == 0:
        return PadicNumber.one(params.prime, w)
    return _factorial_cached(params, n - 1, w) * rhoq_integer(n, params, w)


def rhoq_factorial(n: int, params: RhoQParams, digits: int | None = None) -> PadicNumber:
    """[n]! = [n][n-1]...[1]; memoized (Mahler solves query these repeatedly)."""
    if n < 0:
        raise ValueError("factorial defined for n >= 0")
    w = digits if digits is not None else params.precision
    return _factorial_cached(params, n, w)


def vp_factorial(n: int, p: int) -> int:
    """ν_p(n!) (Legendre); equals ν_p([n]!) for parameters in 1 + pZ_p."""
    v, q = 0, p
    while q <= n:
        v += n // q
        q *= p
    return v


def rhoq_binomial(n: int, k: int, params: RhoQParams, digits: int | None = None) -> PadicNumber:
    """Gaussian binomial [n]! / ([n-k]! [k]!); zero for k > n (Mahler truncation).

    Computed as a falling product over [k]! with enough head-room that the
    factorial division costs no digits against the requested precision.
    """
    p = params.prime
    target = digits if digits is not None else params.precision
    if k < 0 or k > n:
        return PadicNumber.exact_zero(p)
    if k == 0 or k == n:
        return PadicNumber.one(p, target)
    loss = vp_factorial(k, p)
    head = max((vp(n - j, p) for j in range(k) if n != j), default=0)
    w = target + loss + head
    if params.known_digits is not None:
        w = min(w, params.known_digits)
    num = PadicNumber.one(p, w)
    for j in range(k):
        num = num * rhoq_integer(n - j, params, w)
    return div(num, rhoq_factorial(k, params, w), budget=None)


def q_number(x: PadicNumber | int, q: PadicNumber) -> PadicNumber:
    """[x]_q = (1 - q^x)/(1 - q); equals x itself in the q -> 1 limit."""
    p = q.prime
    one = PadicNumber.one(p, q.digits)
    qm1 = q - one
    if qm1.is_zero_residue:
        if isinstance(x, int):
            return PadicNumber.from_integer(x, p, q.digits)
        return x
    if isinstance(x, int) and x >= 0:
        # summation form: 1 + q + ... + q^(x-1)
        w = q.digits
        mod = p**w
        qr = q.residue(w)
        acc, term = 0, 1
        for _ in range(x):
            acc = (acc + term) % mod
            term = term * qr % mod
        return PadicNumber.from_integer(acc, p, w) if acc else (
            PadicNumber.exact_zero(p) if x == 0 else PadicNumber.bounded_zero(p, w)
        )
    qx = rhoq_power(q, x)
    return div(one - qx, one - q)


def rhoq_number(x: PadicNumber | int, params: RhoQParams, digits: int | None = None) -> PadicNumber:
    """[x] for a general p-adic x: (rho^x - q^x)/(rho - q).

    Rejected at rho = q with a non-integer exponent (the quotient form is the
    only continuous extension we provide; integer arguments go through
    rhoq_integer instead).
    """
    if isinstance(x, int) and x >= 0:
        return rhoq_integer(x, params, digits)
    w = digits if digits is not None else params.precision
    p = params.prime
    rho = PadicNumber(p, 0, params.rho_residue(w), w)
    q = PadicNumber(p, 0, params.q_residue(w), w)
    denom = rho - q
    if denom.is_zero_residue:
        raise DomainError("rho = q with a non-integer exponent is not supported")
    return div(rhoq_power(rho, x, w) - rhoq_power(q, x, w), denom)


def rhoq_power(
    base: PadicNumber, exponent: PadicNumber | int, abs_prec: int | None = None
) -> PadicNumber:
    """base^exponent for base in 1 + pZ_p and a p-adic integer exponent.

    Defined by continuity: since base^(p^M) ≡ 1 (mod p^(M+1)), the result
    mod p^m depends only on the exponent mod p^m, so the exponent is reduced
    there and the power is taken by square-and-multiply.
    """
    p = base.prime
    if base.is_zero_residue or base.val != 0 or base.unit % p != 1:
        raise DomainError("rhoq_power requires base in 1 + pZ_p")
    m = base.digits if abs_prec is None else min(abs_prec, base.digits)
    if isinstance(exponent, PadicNumber):
        if exponent.is_exact_zero:
            return PadicNumber.one(p, m)
        if exponent.val is not None and exponent.val < 0:
            raise DomainError("exponent must lie in Z_p")
        m = min(m, int(exponent.abs_precision))
        e = exponent.residue(m)
    else:
        e = exponent % p**m
    mod = p**m
    return PadicNumber(p, 0, pow(base.residue(m), e, mod), m)
