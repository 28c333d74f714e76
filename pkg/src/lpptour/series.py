"""Truncated power series over the rationals.

Realizes A_p(x) = sum q**C(n,2) x**n, B_p(x) = sum q**C(n+1,2) x**n, the
expected-weight generating function G_p(x) = 1 + x / ((1-x)**2 B_p(x)),
its reciprocal factor H_p = 1/B_p, and the bivariate series Z(x, t) whose
x**n coefficient is the PGF of X_n.  The composition-sum formulas for
``[x**n] H_p`` and ``g(n) = 1 + E[X_n]`` live here as independent checks.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .numerics import QPowers, RationalLike, as_rational, format_rational
from .recurrence import PolyInT

COMPOSITION_LIMIT = 24


@dataclass(frozen=True)
class TruncatedSeries:
    """``coeffs[j] = [x**j]`` for ``j = 0..order``; higher terms are unknown."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a truncated series needs at least one coefficient")

    @classmethod
    def of(cls, coeffs: Sequence[Fraction | int | str]) -> "TruncatedSeries":
        return cls(tuple(as_rational(c) for c in coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, j: int) -> Fraction:
        return self.coeffs[j]

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs[: order + 1])

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(len(self), len(other))
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(len(self), len(other))
        return TruncatedSeries(tuple(a - b for a, b in zip(self.coeffs[:n], other.coeffs[:n])))

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-a for a in self.coeffs))

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(tuple(a * other for a in self.coeffs))
        n = min(len(self), len(other))
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n):
            acc = Fraction(0)
            for i in range(k + 1):
                if a[i] and b[k - i]:
                    acc += a[i] * b[k - i]
            out.append(acc)
        return TruncatedSeries(tuple(out))

    __rmul__ = __mul__

    def shift(self) -> "TruncatedSeries":
        """Multiply by x.  The known order grows by one."""
        return TruncatedSeries((Fraction(0),) + self.coeffs)

    def to_json(self) -> str:
        return json.dumps({"order": self.order, "coeffs": [format_rational(c) for c in self.coeffs]})

    @classmethod
    def from_json(cls, text: str) -> "TruncatedSeries":
        data = json.loads(text)
        s = cls.of(data["coeffs"])
        if s.order != data["order"]:
            raise ValueError("order field does not match coefficient count")
        return s


def one(order: int) -> TruncatedSeries:
    return TruncatedSeries((Fraction(1),) + (Fraction(0),) * order)


def series_A(q: RationalLike, order: int) -> TruncatedSeries:
    qp = QPowers(q)
    return TruncatedSeries(tuple(qp.triangular(n) for n in range(order + 1)))


def series_B(q: RationalLike, order: int) -> TruncatedSeries:
    qp = QPowers(q)
    return TruncatedSeries(tuple(qp.shifted(n) for n in range(order + 1)))


def reciprocal(s: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse up to the same order."""
    c0 = s[0]
    if c0 == 0:
        raise ZeroDivisionError("series with zero constant term has no reciprocal")
    inv0 = 1 / c0
    out = [inv0]
    for n in range(1, len(s)):
        acc = Fraction(0)
        for k in range(1, n + 1):
            if s[k]:
                acc += s[k] * out[n - k]
        out.append(-acc * inv0)
    return TruncatedSeries(tuple(out))


def series_H(q: RationalLike, order: int) -> TruncatedSeries:
    return reciprocal(series_B(q, order))


def series_G(q: RationalLike, order: int) -> TruncatedSeries:
    """Coefficients ``g(n) = 1 + E[X_n]`` for ``n = 0..order``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    h = series_H(q, order)
    # x/(1-x)**2 = sum_{j>=1} j x**j, so [x**n] = sum_{j=1}^{n} j h[n-j]
    out = [Fraction(1)]
    for n in range(1, order + 1):
        out.append(sum((j * h[n - j] for j in range(1, n + 1)), Fraction(0)))
    return TruncatedSeries(tuple(out))


@dataclass(frozen=True)
class BivariateSeries:
    """``coeffs[n]`` is ``[x**n] Z(x, t)`` as a polynomial in t."""

    coeffs: tuple[PolyInT, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> PolyInT:
        return self.coeffs[n]


def series_Z(q: RationalLike, order: int) -> BivariateSeries:
    """Expand ``Z = 1 + x B / (1 - t D)`` with ``D = A - B``.

    ``1/(1 - tD) = sum_k t**k D**k``.  D has no constant term, so ``D**k``
    starts at ``x**k`` and only ``k < order`` contributes below the
    truncation.  The t-degree of ``[x**n] Z`` is therefore at most n-1.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    A, B = series_A(q, order), series_B(q, order)
    D = A - B
    # u[m] = [x**m] 1/(1 - tD) as a polynomial in t
    u_coeffs: list[list[Fraction]] = [[Fraction(0)] * order for _ in range(order + 1)]
    power = one(order)
    for k in range(order):
        for m in range(k, order + 1):
            if power[m]:
                u_coeffs[m][k] = power[m]
        power = power * D
    u = [PolyInT(c) for c in u_coeffs]
    out = [PolyInT([1])]
    for n in range(1, order + 1):
        acc = PolyInT()
        for m in range(n):
            b = B[n - 1 - m]
            if b and u[m].coeffs:
                acc = acc + u[m] * b
        out.append(acc)
    return BivariateSeries(tuple(out))


def compositions(n: int) -> Iterator[tuple[int, ...]]:
    """Yield every composition of n (ordered positive parts summing to n).

    Each of the n-1 gaps between n unit cells is either a cut or not, so
    there are ``2**(n-1)`` compositions for n >= 1.  ``n = 0`` yields the
    empty composition once.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        yield ()
        return
    for mask in range(1 << (n - 1)):
        parts = []
        run = 1
        for gap in range(n - 1):
            if mask >> gap & 1:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        yield tuple(parts)


def _check_limit(n: int, limit: int) -> None:
    if n > limit:
        raise ValueError(f"composition enumeration for n={n} exceeds the limit {limit} (2**{n - 1} terms)")


@lru_cache(maxsize=None)
def _signed_exponent_counts(n: int) -> tuple[tuple[int, int], ...]:
    """``(exponent, signed count)`` pairs with ``[x**n] 1/B = sum count * q**exponent``."""
    counts: Counter[int] = Counter()
    for a in compositions(n):
        e = sum(k * (k + 1) // 2 for k in a)
        counts[e] += -1 if len(a) % 2 else 1
    return tuple(sorted((e, c) for e, c in counts.items() if c))


def h_by_compositions(n: int, q: RationalLike, limit: int = COMPOSITION_LIMIT) -> Fraction:
    """``[x**n] 1/B_p`` as a signed sum over compositions of n.

    A composition with parts ``a_1..a_j`` contributes
    ``(-1)**j * q**sum(C(a_i+1, 2))``.
    """
    _check_limit(n, limit)
    q = as_rational(q)
    return sum((c * q**e for e, c in _signed_exponent_counts(n)), Fraction(0))


def g_by_compositions(n: int, q: RationalLike, limit: int = COMPOSITION_LIMIT) -> Fraction:
    """``g(n) = sum_{m=0}^{n-1} (n-m) h_m`` with each h_m from compositions.

    ``g(0) = 1`` by convention.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return Fraction(1)
    _check_limit(n - 1, limit)
    return sum(((n - m) * h_by_compositions(m, q, limit) for m in range(n)), Fraction(0))


def g_by_triangular_sum(n: int, q: RationalLike, limit: int = COMPOSITION_LIMIT) -> Fraction:
    """``g(n) = sum_{m<n} sum_{j<=m} sum_{k<=j} (-1)**k sum_{a in C(j,k)} q**...``.

    Same quantity as :func:`g_by_compositions`, grouped by part count k
    and summed over a triangle instead of weighted by ``n - m``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return Fraction(1)
    _check_limit(n - 1, limit)
    q = as_rational(q)
    by_parts: dict[tuple[int, int], Fraction] = {}
    for j in range(n):
        for a in compositions(j):
            key = (j, len(a))
            by_parts[key] = by_parts.get(key, Fraction(0)) + q ** sum(k * (k + 1) // 2 for k in a)
    total = Fraction(0)
    for m in range(n):
        for j in range(m + 1):
            for k in range(j + 1):
                total += (-1) ** k * by_parts.get((j, k), Fraction(0))
    return total
