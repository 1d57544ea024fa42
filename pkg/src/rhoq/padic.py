"""Finite-precision arithmetic in Q_p.

A value is stored as p^v * u where the unit u is known modulo p^r; the
absolute precision (the power of p modulo which the *value* is known) is
v + r.  All reductions are by powers of p on plain integers; nothing here
touches floating point.

Zero comes in two flavours.  An *exact* zero is a distinguished value (the
limits in this library genuinely hit 0).  A *bounded* zero O(p^a) is what a
subtraction produces when everything cancels at working precision: all we
know is that the value is divisible by p^a.
"""

from __future__ import annotations

from contextvars import ContextVar
from dataclasses import dataclass, field
from fractions import Fraction
from math import inf


class PadicError(Exception):
    """Base class for p-adic arithmetic errors."""


class DomainError(PadicError):
    """Operand outside the mathematical domain of an operation."""


class PrecisionError(PadicError):
    """The precision budget is exhausted: a result would carry no digits."""


def is_odd_prime(p: int) -> bool:
    if not isinstance(p, int) or p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def vp(n: int, p: int) -> int:
    """Exponent of p in a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of integer 0 is undefined; use the exact zero")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# Precision budget
# ---------------------------------------------------------------------------

_ACTIVE_BUDGET: ContextVar["PrecisionBudget | None"] = ContextVar(
    "rhoq_active_precision_budget", default=None
)


@dataclass
class PrecisionBudget:
    """Per-computation ledger of precision losses.

    Every division through this context logs ν_p(divisor) lost digits, so
    ``target_abs_precision - total_loss`` is the precision a straight-line
    chain of unit-preserving operations still guarantees.  Use as a context
    manager; budgets are per-context (contextvar), not global.
    """

    target_abs_precision: int
    loss_log: list[tuple[str, int]] = field(default_factory=list)

    def record(self, operation: str, digits_lost: int) -> None:
        if digits_lost > 0:
            self.loss_log.append((operation, digits_lost))

    @property
    def total_loss(self) -> int:
        return sum(d for _, d in self.loss_log)

    @property
    def achieved_precision(self) -> int:
        return self.target_abs_precision - self.total_loss

    def __enter__(self) -> "PrecisionBudget":
        self._token = _ACTIVE_BUDGET.set(self)
        return self

    def __exit__(self, *exc) -> None:
        _ACTIVE_BUDGET.reset(self._token)


def active_budget() -> PrecisionBudget | None:
    return _ACTIVE_BUDGET.get()


# ---------------------------------------------------------------------------
# PadicNumber
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PadicNumber:
    """An element of Q_p at finite precision.

    Nonzero: value = prime^val * unit with gcd(unit, prime) = 1 and
    0 < unit < prime^digits; the value is known modulo prime^(val+digits).
    Bounded zero: unit == 0, digits == 0, val = a, meaning value ≡ 0 (mod p^a).
    Exact zero: unit == 0, digits == 0, val is None.

    Instances are immutable; all operations are pure.
    """

    prime: int
    val: int | None
    unit: int
    digits: int

    # -- constructors -------------------------------------------------------

    @classmethod
    def exact_zero(cls, p: int) -> "PadicNumber":
        _check_prime(p)
        return cls(p, None, 0, 0)

    @classmethod
    def bounded_zero(cls, p: int, abs_prec: int) -> "PadicNumber":
        """The ball O(p^abs_prec): a value known only to vanish mod p^abs_prec."""
        _check_prime(p)
        if abs_prec <= 0:
            raise PrecisionError("bounded zero O(p^%d) carries no information" % abs_prec)
        return cls(p, abs_prec, 0, 0)

    @classmethod
    def from_integer(cls, n: int, p: int, abs_prec: int) -> "PadicNumber":
        """Canonical (valuation, unit) form of an integer, known mod p^abs_prec."""
        _check_prime(p)
        if abs_prec < 1:
            raise ValueError("absolute precision must be >= 1, got %d" % abs_prec)
        if n == 0:
            return cls.exact_zero(p)
        v = vp(n, p)
        if v >= abs_prec:
            return cls.bounded_zero(p, abs_prec)
        r = abs_prec - v
        u = (n // p**v) % p**r
        return cls(p, v, u, r)

    @classmethod
    def from_fraction(cls, x: Fraction | int, p: int, abs_prec: int) -> "PadicNumber":
        """A rational reduced into Q_p at absolute precision abs_prec."""
        if isinstance(x, int):
            return cls.from_integer(x, p, abs_prec)
        _check_prime(p)
        if abs_prec < 1:
            raise ValueError("absolute precision must be >= 1, got %d" % abs_prec)
        if x == 0:
            return cls.exact_zero(p)
        vn = vp(x.numerator, p)
        vd = vp(x.denominator, p)
        v = vn - vd
        if v >= abs_prec:
            return cls.bounded_zero(p, abs_prec)
        r = abs_prec - v
        mod = p**r
        num_unit = (x.numerator // p**vn) % mod
        den_unit = (x.denominator // p**vd) % mod
        u = num_unit * pow(den_unit, -1, mod) % mod
        return cls(p, v, u, r)

    @classmethod
    def one(cls, p: int, digits: int) -> "PadicNumber":
        return cls.from_integer(1, p, digits)

    # -- predicates / accessors ---------------------------------------------

    @property
    def is_exact_zero(self) -> bool:
        return self.unit == 0 and self.val is None

    @property
    def is_zero_residue(self) -> bool:
        """True for both zero flavours: nothing distinguishes this value from 0."""
        return self.unit == 0

    @property
    def abs_precision(self) -> int | float:
        """The value is known modulo prime^abs_precision (inf for exact zero)."""
        if self.is_exact_zero:
            return inf
        return self.val + self.digits

    @property
    def valuation(self) -> int | float:
        """ν_p of the value; +inf for the exact zero.

        For a bounded zero O(p^a) only the lower bound a is known and that
        bound is returned: callers compare norms, and p^-a is the honest
        worst case at working precision.
        """
        if self.is_exact_zero:
            return inf
        return self.val

    def norm(self) -> Fraction:
        """|x|_p = p^-ν_p(x); 0 for the exact zero (upper bound for a bounded zero)."""
        if self.is_exact_zero:
            return Fraction(0)
        v = self.val
        return Fraction(1, self.prime**v) if v >= 0 else Fraction(self.prime ** (-v))

    def residue(self, abs_prec: int) -> int:
        """The value mod p^abs_prec as a plain integer (requires valuation >= 0).

        Raises PrecisionError when more digits are requested than are known.
        """
        if self.is_exact_zero:
            return 0
        if abs_prec > self.abs_precision:
            raise PrecisionError(
                "residue mod %d^%d requested but value only known mod %d^%s"
                % (self.prime, abs_prec, self.prime, self.abs_precision)
            )
        if self.unit == 0:
            return 0
        if self.val < 0:
            raise DomainError("residue of a value with negative valuation")
        return self.unit * self.prime**self.val % self.prime**abs_prec

    def agrees(self, other: "PadicNumber", abs_prec: int | None = None) -> bool:
        """True when x ≡ y modulo p^t, t = min of the known precisions (and abs_prec).

        Comparison is vacuously true when no digit of either value is known
        modulo p (t <= 0).
        """
        p = _common_prime(self, other)
        t = min(self.abs_precision, other.abs_precision)
        if abs_prec is not None:
            t = min(t, abs_prec)
        if t == inf:  # both exact zeros
            return True
        t = int(t)
        if t <= 0:
            return True
        vals = [z.val for z in (self, other) if z.unit != 0]
        if not vals:
            return True  # both vanish mod p^t
        v0 = min(min(vals), t)
        k = t - v0
        mod = p**k

        def scaled(z: "PadicNumber") -> int:
            if z.unit == 0:
                return 0
            return z.unit * p ** (z.val - v0) % mod

        return scaled(self) == scaled(other)

    # -- canonicalization ----------------------------------------------------

    def canonical(self) -> "PadicNumber":
        """Re-normalize; idempotent (returns an equal value)."""
        if self.unit == 0:
            return self
        mod = self.prime**self.digits
        u = self.unit % mod
        if u % self.prime == 0:
            raise DomainError("unit residue divisible by p; malformed value")
        return PadicNumber(self.prime, self.val, u, self.digits)

    def reduce_abs(self, abs_prec: int) -> "PadicNumber":
        """Forget digits: the same value known only mod p^abs_prec."""
        if self.is_exact_zero:
            return self
        if abs_prec >= self.abs_precision:
            return self
        if self.unit == 0 or self.val >= abs_prec:
            return PadicNumber.bounded_zero(self.prime, abs_prec)
        r = abs_prec - self.val
        return PadicNumber(self.prime, self.val, self.unit % self.prime**r, r)

    # -- arithmetic ----------------------------------------------------------

    def __neg__(self) -> "PadicNumber":
        if self.unit == 0:
            return self
        mod = self.prime**self.digits
        return PadicNumber(self.prime, self.val, (-self.unit) % mod, self.digits)

    def __add__(self, other: "PadicNumber") -> "PadicNumber":
        p = _common_prime(self, other)
        if self.is_exact_zero:
            return other
        if other.is_exact_zero:
            return self
        a = min(self.abs_precision, other.abs_precision)
        if self.unit == 0 and other.unit == 0:
            return PadicNumber.bounded_zero(p, int(a))
        if self.unit == 0:
            return other.reduce_abs(int(a))
        if other.unit == 0:
            return self.reduce_abs(int(a))
        a = int(a)
        v0 = min(self.val, other.val)
        k = a - v0  # >= 1 whenever both operands are nonzero
        mod = p**k
        s = (self.unit * p ** (self.val - v0) + other.unit * p ** (other.val - v0)) % mod
        if s == 0:
            return PadicNumber.bounded_zero(p, a)
        w = vp(s, p)
        r = k - w
        return PadicNumber(p, v0 + w, (s // p**w) % p**r, r)

    def __sub__(self, other: "PadicNumber") -> "PadicNumber":
        return self + (-other)

    def __mul__(self, other: "PadicNumber") -> "PadicNumber":
        p = _common_prime(self, other)
        if self.is_exact_zero or other.is_exact_zero:
            return PadicNumber.exact_zero(p)
        if self.unit == 0 or other.unit == 0:
            return PadicNumber.bounded_zero(p, self.val + other.val)
        r = min(self.digits, other.digits)
        mod = p**r
        return PadicNumber(p, self.val + other.val, self.unit * other.unit % mod, r)

    def __truediv__(self, other: "PadicNumber") -> "PadicNumber":
        return div(self, other)

    def __pow__(self, n: int) -> "PadicNumber":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return div(PadicNumber.one(self.prime, self.digits or 1), self) ** (-n)
        if n == 0:
            return PadicNumber.one(self.prime, self.digits or 1)
        if self.is_exact_zero:
            return self
        if self.unit == 0:
            return PadicNumber.bounded_zero(self.prime, self.val * n)
        mod = self.prime**self.digits
        return PadicNumber(self.prime, self.val * n, pow(self.unit, n, mod), self.digits)

    # -- rendering -----------------------------------------------------------

    def digit_string(self) -> str:
        """Canonical text form (documented, bit-exact; used in JSON output).

        exact zero           -> "0"
        bounded zero O(p^a)  -> "O(p^a): 0"
        unit value           -> "O(p^A): d0 + d1*p + d2*p^2 + ..."
        shifted value        -> "O(p^A): p^v * (d0 + d1*p + ...)"

        A is the absolute precision, digits run least-significant first and
        zero digits are written out.
        """
        p = self.prime
        if self.is_exact_zero:
            return "0"
        if self.unit == 0:
            return "O(%d^%d): 0" % (p, self.val)
        parts = []
        u = self.unit
        for k in range(self.digits):
            u, d = divmod(u, p)
            if k == 0:
                parts.append(str(d))
            elif k == 1:
                parts.append("%d*%d" % (d, p))
            else:
                parts.append("%d*%d^%d" % (d, p, k))
        body = " + ".join(parts)
        head = "O(%d^%d): " % (p, self.abs_precision)
        if self.val == 0:
            return head + body
        return head + "%d^%d * (%s)" % (p, self.val, body)

    def __str__(self) -> str:
        return self.digit_string()

    def __repr__(self) -> str:
        if self.is_exact_zero:
            return "PadicNumber(p=%d, 0 exact)" % self.prime
        return "PadicNumber(p=%d, val=%s, unit=%d, digits=%d)" % (
            self.prime,
            self.val,
            self.unit,
            self.digits,
        )


def _check_prime(p: int) -> None:
    if not is_odd_prime(p):
        raise ValueError("prime must be an odd prime >= 3, got %r" % (p,))


def _common_prime(x: PadicNumber, y: PadicNumber) -> int:
    if x.prime != y.prime:
        raise DomainError("prime mismatch: %d vs %d" % (x.prime, y.prime))
    return x.prime


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def padic_from_integer(n: int, p: int, abs_prec: int) -> PadicNumber:
    return PadicNumber.from_integer(n, p, abs_prec)


def padic_from_fraction(x: Fraction | int, p: int, abs_prec: int) -> PadicNumber:
    return PadicNumber.from_fraction(x, p, abs_prec)


def valuation(x: PadicNumber) -> int | float:
    return x.valuation


def norm(x: PadicNumber) -> Fraction:
    return x.norm()


def div(x: PadicNumber, y: PadicNumber, budget: PrecisionBudget | None = None) -> PadicNumber:
    """x / y.  Logs ν_p(y) lost digits to the given (or context-active) budget."""
    p = _common_prime(x, y)
    if y.is_exact_zero:
        raise ZeroDivisionError("division by exact p-adic zero")
    if y.unit == 0:
        raise PrecisionError(
            "divisor is indistinguishable from zero at working precision O(%d^%d)"
            % (p, y.val)
        )
    budget = budget if budget is not None else active_budget()
    if budget is not None:
        budget.record("div", y.val)
    if x.is_exact_zero:
        return x
    if x.unit == 0:
        a = x.val - y.val
        if a <= 0:
            raise PrecisionError("quotient of bounded zero carries no digits")
        return PadicNumber.bounded_zero(p, a)
    r = min(x.digits, y.digits)
    mod = p**r
    u = x.unit * pow(y.unit % mod, -1, mod) % mod
    return PadicNumber(p, x.val - y.val, u, r)


def padic_log(x: PadicNumber) -> PadicNumber:
    """log on 1 + pZ_p via the alternating series in (x - 1).

    The series is truncated once every remaining term is 0 modulo the input's
    absolute precision; the result has valuation >= 1.
    """
    p = x.prime
    if not x.is_zero_residue and x.val == 0 and x.unit == 1:
        # residue exactly 1 is read as the constant 1: log hits exact zero
        return PadicNumber.exact_zero(p)
    one = PadicNumber.one(p, max(x.digits, 1))
    t = x - one
    if t.is_exact_zero:
        return PadicNumber.exact_zero(p)
    if t.unit == 0:
        return PadicNumber.bounded_zero(p, t.val)
    if t.val < 1:
        raise DomainError("padic_log requires x in 1 + pZ_p")
    target = int(t.abs_precision)
    vt = t.val
    # Term n has valuation n*vt - ν_p(n) >= n*vt - floor(log_p n), a bound
    # nondecreasing in n for vt >= 1; stop at the first n where it clears the
    # target, since every later term then also vanishes mod p^target.
    acc = PadicNumber.exact_zero(p)
    power = t
    n = 1
    while n * vt - _max_vp_at_most(n, p) < target:
        denom = PadicNumber.from_integer(n, p, target + vp(n, p))
        term = div(power, denom)
        acc = acc + (-term if n % 2 == 0 else term)
        n += 1
        power = power * t
    return acc.reduce_abs(target)


def _max_vp_at_most(n: int, p: int) -> int:
    """floor(log_p n): an upper bound for ν_p(k) over k <= n."""
    b = 0
    while p ** (b + 1) <= n:
        b += 1
    return b
