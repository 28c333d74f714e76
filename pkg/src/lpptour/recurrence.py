"""Exact law and moments of X_n, the heaviest-path weight on n nodes.

Everything rests on one decomposition.  Let i+1 be the first node that the
heaviest path from node 1 can reach with weight 1.  Then nodes 1..i carry
no unit edge among themselves, some edge into node i+1 has weight 1, and
given that event X_n is distributed as 1 + X_{n-i}.  The event has
probability ``c_i = q**C(i,2) - q**C(i+1,2)``, and with probability
``q**C(n,2)`` no unit edge exists at all.  Hence

    E[t**X_n] = t * sum_{i=1}^{n-1} c_i E[t**X_{n-i}] + q**C(n,2).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .numerics import QPowers, RationalLike, as_probability, format_rational

EXACT_THRESHOLD = 64


class PolyInT:
    """Polynomial in the PGF indeterminate t with exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Fraction | int] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, PolyInT):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == PolyInT([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "PolyInT") -> "PolyInT":
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyInT([self[k] + other[k] for k in range(n)])

    def __mul__(self, other) -> "PolyInT":
        if isinstance(other, (int, Fraction)):
            return PolyInT([c * other for c in self.coeffs])
        out = [Fraction(0)] * max(len(self.coeffs) + len(other.coeffs) - 1, 0)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolyInT(out)

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> "PolyInT":
        """Multiply by t**k."""
        if not self.coeffs:
            return self
        return PolyInT([Fraction(0)] * k + list(self.coeffs))

    def __call__(self, t):
        acc = 0 * t
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self) -> "PolyInT":
        return PolyInT([k * c for k, c in enumerate(self.coeffs)][1:])

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(format_rational(c) if k == 0 else f"({format_rational(c)})t^{k}")
        return "PolyInT(" + (" + ".join(terms) or "0") + ")"


@dataclass(frozen=True)
class WeightDistribution:
    """Exact law of X_n: ``probs[w] = P(X_n = w)`` for ``w = 0..n-1``."""

    n: int
    probs: tuple[Fraction, ...]

    def check(self, p: RationalLike | None = None) -> None:
        """Raise ``ValueError`` if an invariant is violated."""
        if self.n < 1 or len(self.probs) != self.n:
            raise ValueError("support must be {0, ..., n-1}")
        if any(x < 0 for x in self.probs):
            raise ValueError("negative probability")
        if sum(self.probs) != 1:
            raise ValueError("probabilities do not sum to 1")
        if p is not None:
            p = as_probability(p)
            q = 1 - p
            if self.probs[0] != q ** (self.n * (self.n - 1) // 2):
                raise ValueError("P(X_n = 0) must equal q**C(n,2)")
            if self.probs[-1] != p ** (self.n - 1):
                raise ValueError("P(X_n = n-1) must equal p**(n-1)")

    def mean(self) -> Fraction:
        return sum((k * x for k, x in enumerate(self.probs)), Fraction(0))

    def second_moment(self) -> Fraction:
        return sum((k * k * x for k, x in enumerate(self.probs)), Fraction(0))

    def variance(self) -> Fraction:
        return self.second_moment() - self.mean() ** 2

    def to_dict(self) -> dict:
        return {"n": self.n, "probs": [format_rational(x) for x in self.probs]}

    @classmethod
    def from_dict(cls, data: dict) -> "WeightDistribution":
        return cls(int(data["n"]), tuple(Fraction(s) for s in data["probs"]))


@dataclass(frozen=True)
class MomentTable:
    """``m1[n] = E[X_n]`` and ``m2[n] = E[X_n**2]`` for ``n = 0..n_max``."""

    n_max: int
    m1: tuple[Fraction, ...]
    m2: tuple[Fraction, ...]

    def variance(self, n: int) -> Fraction:
        return self.m2[n] - self.m1[n] ** 2


class _Tables:
    """Per-p memo of moment and PGF prefixes.  Published tuples are never mutated."""

    def __init__(self, p: Fraction):
        self.p = p
        self.qp = QPowers(1 - p) if p > 0 else None
        self.m1: tuple[Fraction, ...] = (Fraction(0), Fraction(0))
        self.m2: tuple[Fraction, ...] = (Fraction(0), Fraction(0))
        self.pgfs: tuple[PolyInT, ...] = (PolyInT([1]), PolyInT([1]))
        self.lock = threading.Lock()

    def transitions(self, n: int) -> list[Fraction]:
        # c[i] for i = 0..n; c[0] is unused
        if self.qp is None:  # p == 0, q == 1: no unit edges ever
            return [Fraction(0)] * (n + 1)
        return [Fraction(0)] + [self.qp.transition(i) for i in range(1, n + 1)]

    def no_unit_edge(self, n: int) -> Fraction:
        return Fraction(1) if self.qp is None else self.qp.triangular(n)

    def moments(self, n_max: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        with self.lock:
            if len(self.m1) <= n_max:
                c = self.transitions(n_max)
                m1, m2 = list(self.m1), list(self.m2)
                for n in range(len(m1), n_max + 1):
                    s1 = s2 = Fraction(0)
                    for i in range(1, n):
                        ci = c[i]
                        if ci:
                            a, b = m1[n - i], m2[n - i]
                            s1 += ci * (a + 1)
                            s2 += ci * (b + 2 * a + 1)
                    m1.append(s1)
                    m2.append(s2)
                self.m1, self.m2 = tuple(m1), tuple(m2)
            return self.m1, self.m2

    def pgf(self, n: int) -> PolyInT:
        with self.lock:
            if len(self.pgfs) <= n:
                c = self.transitions(n)
                ys = list(self.pgfs)
                for m in range(len(ys), n + 1):
                    acc = PolyInT()
                    for i in range(1, m):
                        if c[i]:
                            acc = acc + ys[m - i] * c[i]
                    ys.append(acc.shift(1) + PolyInT([self.no_unit_edge(m)]))
                self.pgfs = tuple(ys)
            return self.pgfs[n]


_TABLES: dict[Fraction, _Tables] = {}
_TABLES_LOCK = threading.Lock()


def _tables(p: RationalLike) -> _Tables:
    p = as_probability(p)
    with _TABLES_LOCK:
        tab = _TABLES.get(p)
        if tab is None:
            tab = _TABLES[p] = _Tables(p)
    return tab


def expected_weight(n: int, p: RationalLike) -> Fraction:
    """Exact ``E[X_n]``, with ``E[X_0] = E[X_1] = 0``.

    >>> expected_weight(3, "1/2")
    Fraction(9, 8)
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    m1, _ = _tables(p).moments(n)
    return m1[n]


def moments(n_max: int, p: RationalLike) -> MomentTable:
    """Exact first and second moments of X_n for every ``n <= n_max``.

    Conditioning on the first unit edge gives ``X_n = 1 + X_{n-i}`` with
    probability ``c_i``, so both moments follow from O(n_max**2) rational
    operations without expanding any polynomial.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    m1, m2 = _tables(p).moments(n_max)
    return MomentTable(n_max, m1[: n_max + 1], m2[: n_max + 1])


def pgf(n: int, p: RationalLike) -> PolyInT:
    """Exact probability generating function ``E[t**X_n]``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return _tables(p).pgf(n)


def distribution(n: int, p: RationalLike) -> WeightDistribution:
    g = pgf(n, p)
    return WeightDistribution(n, tuple(g[k] for k in range(n)))


def transition_floats(p: RationalLike, n_max: int) -> np.ndarray:
    """``c_i`` as floats for ``i = 0..n_max`` (``c_0 = 0``), truncated where they underflow."""
    p = as_probability(p)
    c = np.zeros(n_max + 1)
    if p == 0:
        return c
    qp = QPowers(1 - p)
    for i in range(1, n_max + 1):
        ci = float(qp.transition(i))
        if ci == 0.0 and qp.triangular(i) < Fraction(1, 2**1100):
            break
        c[i] = ci
    return c


def moments_float(n_max: int, p: RationalLike) -> tuple[np.ndarray, np.ndarray]:
    """Float versions of ``m1`` and ``m2`` for ``n = 0..n_max``.

    Same recurrence as :func:`moments`.  The sum over i only runs while
    ``c_i`` is representable, so the cost is O(n_max * K), where K is
    roughly ``sqrt(2*1075/log2(1/q))``.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    c = transition_floats(p, n_max)
    nz = np.flatnonzero(c)
    k_max = int(nz[-1]) if nz.size else 0
    m1 = np.zeros(n_max + 1)
    m2 = np.zeros(n_max + 1)
    for n in range(2, n_max + 1):
        k = min(n - 1, k_max)
        if k == 0:
            continue
        ci = c[1 : k + 1]
        a = m1[n - 1 : n - k - 1 : -1]  # m1[n-i] for i = 1..k; k < n keeps the stop >= 0
        b = m2[n - 1 : n - k - 1 : -1]
        m1[n] = ci @ (a + 1.0)
        m2[n] = ci @ (b + 2.0 * a + 1.0)
    return m1, m2


def clear_cache() -> None:
    """Drop every memoized table (used to time cold runs)."""
    with _TABLES_LOCK:
        _TABLES.clear()
