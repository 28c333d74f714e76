"""Exact rationals, powers of q at triangular exponents, and q-series at x=1.

Exact quantities are plain :class:`fractions.Fraction` objects, which are
already kept in lowest terms with a positive denominator.  Floating output
only appears through :class:`HighPrecisionValue`.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

DEFAULT_DIGITS = 34  # ~113-bit significand


def as_rational(value: RationalLike) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Accepts Fractions, ints and strings such as ``"1/2"`` or ``"0.25"``.
    Floats are refused because they would silently bring in binary
    rounding error.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def as_probability(value: RationalLike) -> Fraction:
    p = as_rational(value)
    if not 0 <= p <= 1:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    return p


def format_rational(x: Fraction) -> str:
    """``"num/den"``, with the denominator dropped when it is 1."""
    return str(x)


def q_triangular_power(q: RationalLike, k: int) -> Fraction:
    """Return ``q ** (k*(k-1)/2)`` exactly (with ``0**0 == 1``)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return as_rational(q) ** (k * (k - 1) // 2)


class QPowers:
    """Cached ``q**C(k,2)`` and ``q**C(k+1,2)`` for one fixed q.

    Entries are built incrementally from ``q**C(k+1,2) = q**C(k,2) * q**k``.
    The cache only grows, and every entry is an immutable Fraction, so sharing
    an instance between threads is harmless (at worst an entry is computed
    twice).
    """

    def __init__(self, q: RationalLike):
        q = as_rational(q)
        if not 0 <= q < 1:
            raise ValueError(f"q must lie in [0, 1), got {q}")
        self.q = q
        self._tri = [Fraction(1)]  # _tri[k] = q**C(k,2)
        self._qk = [Fraction(1)]  # _qk[k] = q**k

    def _extend(self, k: int) -> None:
        tri, qk = self._tri, self._qk
        while len(tri) <= k + 1:
            m = len(tri) - 1
            tri.append(tri[m] * qk[m])
            qk.append(qk[m] * self.q)

    def triangular(self, k: int) -> Fraction:
        """``q**C(k,2)``, the k-th coefficient of A_p."""
        if k < 0:
            raise ValueError("k must be non-negative")
        self._extend(k)
        return self._tri[k]

    def shifted(self, k: int) -> Fraction:
        """``q**C(k+1,2)``, the k-th coefficient of B_p."""
        if k < 0:
            raise ValueError("k must be non-negative")
        self._extend(k + 1)
        return self._tri[k + 1]

    def transition(self, i: int) -> Fraction:
        """``q**C(i,2) - q**C(i+1,2)``: probability that the first unit edge lands on node i+1."""
        return self.triangular(i) - self.shifted(i)


@dataclass(frozen=True)
class HighPrecisionValue:
    """A decimal approximation together with an absolute error bound."""

    value: decimal.Decimal
    error_bound: float

    def __post_init__(self):
        if not self.error_bound >= 0:
            raise ValueError("error_bound must be non-negative")

    def __float__(self) -> float:
        return float(self.value)

    def significant_digits(self) -> int:
        """Number of significant digits the error bound supports."""
        if self.value == 0:
            return 0 if self.error_bound > 0 else 1
        if self.error_bound == 0:
            return len(self.value.as_tuple().digits)
        mag = abs(self.value)
        digits = math.floor(math.log10(float(mag)) - math.log10(self.error_bound))
        return max(0, min(digits, len(self.value.as_tuple().digits)))

    def digits(self) -> str:
        """The value rounded to the digits justified by ``error_bound``."""
        sig = self.significant_digits()
        if sig == 0:
            return "0"
        if self.value == 0:
            return "0"
        exp = self.value.adjusted()
        quantum = decimal.Decimal(1).scaleb(exp - sig + 1)
        return format(self.value.quantize(quantum, rounding=decimal.ROUND_HALF_EVEN), "f")

    def __str__(self) -> str:
        return f"{self.digits()}±{self.error_bound:.3g}"

    def to_dict(self) -> dict:
        return {"value": self.digits(), "error_bound": repr(self.error_bound)}


def _ceil_float(x: Fraction) -> float:
    """Smallest float that is >= x."""
    f = float(x)
    if Fraction(f) < x:
        f = math.nextafter(f, math.inf)
    return f


def _falling(n: int, d: int) -> int:
    out = 1
    for k in range(d):
        out *= n - k
    return out


def b_series_at_one(
    q: RationalLike, derivative_order: int = 0, tol: float = 1e-15, digits: int = DEFAULT_DIGITS
) -> HighPrecisionValue:
    """Evaluate the ``derivative_order``-th derivative of B_p(x) at x = 1.

    That is ``sum_n n(n-1)...(n-d+1) * q**C(n+1,2)``.  Terms are summed
    exactly until the first term below ``tol``.  That term is dropped and
    ``term/(1-q)`` bounds the tail.  Summation continues past ``tol`` while
    the term ratio still exceeds q, which can only happen for d >= 1 and q
    near 1, where the geometric bound would otherwise be invalid.
    """
    q = as_rational(q)
    if not 0 <= q < 1:
        raise ValueError(f"q must lie in [0, 1), got {q}")
    if derivative_order not in (0, 1, 2):
        raise ValueError("derivative_order must be 0, 1 or 2")
    if not tol > 0:
        raise ValueError("tol must be positive")
    d = derivative_order
    ftol = Fraction(tol)
    total = Fraction(0)
    qpow = Fraction(1)  # q**C(n+1,2)
    n = 0
    while True:
        term = _falling(n, d) * qpow
        if n >= max(d, 1) and term < ftol:
            # term ratio t_{n+1}/t_n, decreasing in n
            ratio = Fraction(n + 1, n + 1 - d) * q ** (n + 1)
            if ratio <= q:
                tail = term / (1 - q)
                break
        total += term
        n += 1
        qpow *= q**n
    ctx = decimal.Context(prec=digits)
    value = ctx.divide(decimal.Decimal(total.numerator), decimal.Decimal(total.denominator))
    rounding = Fraction(abs(value)) * Fraction(10) ** (1 - digits) if value else Fraction(0)
    return HighPrecisionValue(value, _ceil_float(tail + rounding))
