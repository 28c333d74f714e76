"""Limit constants for X_n and the diagnostics that tie them to data.

``B, B', B''`` below are B_p and its derivatives at x = 1, computed by
:func:`lpptour.numerics.b_series_at_one`.

Three closed forms for the variance slope ``lim var(X_n)/(n-1)`` are
exposed via ``formula=``:

``"theorem"``  ``B**-2 (1 + 6B'/B - B)``, the default CLT scaling constant.
``"lemma"``    ``B**-2 (1 - 2B'/B**3)``, an alternative closed form.
``"derived"``  ``B**-2 (1 + 2B'/B - B)``, obtained by redoing the pole
               expansion of ``E[X_n**2]``; this is the one the exact
               variances converge to (see :func:`compare_variance_constants`).
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import stats

from .numerics import DEFAULT_DIGITS, HighPrecisionValue, RationalLike, as_probability, b_series_at_one, format_rational
from .percolation import sample_values, two_window_values
from .recurrence import EXACT_THRESHOLD, moments, moments_float

FORMULAS = ("theorem", "lemma", "derived")
DEFAULT_TOL = 1e-15


def _ctx(digits: int = DEFAULT_DIGITS) -> decimal.Context:
    return decimal.Context(prec=digits)


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


def _rounding(v: decimal.Decimal, digits: int = DEFAULT_DIGITS) -> float:
    return float(abs(v)) * 10.0 ** (1 - digits)


@dataclass(frozen=True)
class LimitConstants:
    """Limit constants for one p, each with an absolute error bound.

    ``c2, c1`` and ``d3, d2, d1`` are the leading Laurent coefficients at
    x = 1 of ``1/((1-x)**2 B)`` and ``1/((1-x)**3 B**2)``.
    """

    p: Fraction
    beta: HighPrecisionValue
    sigma_w: HighPrecisionValue
    b1: HighPrecisionValue
    b1_prime: HighPrecisionValue
    b1_second: HighPrecisionValue
    c2: HighPrecisionValue
    c1: HighPrecisionValue
    d3: HighPrecisionValue
    d2: HighPrecisionValue
    d1: HighPrecisionValue
    sigma_formula: str = "theorem"

    def to_dict(self) -> dict:
        out = {"p": format_rational(self.p), "sigma_formula": self.sigma_formula}
        for name in ("beta", "sigma_w", "b1", "b1_prime", "b1_second", "c2", "c1", "d3", "d2", "d1"):
            out[name] = getattr(self, name).to_dict()
        return out


def _b_values(p: Fraction, tol: float):
    q = 1 - p
    return tuple(b_series_at_one(q, d, tol) for d in (0, 1, 2))


def _linear(value: decimal.Decimal, partials: list[float], errs: list[float]) -> HighPrecisionValue:
    """First-order error propagation plus rounding of the final value."""
    err = sum(abs(g) * e for g, e in zip(partials, errs))
    return HighPrecisionValue(value, _up(err + _rounding(value)))


def _check_p(p: RationalLike) -> Fraction:
    p = as_probability(p)
    if p == 0:
        raise ValueError("p = 0 makes B_p(1) diverge (beta would be 0)")
    return p


def beta_tr(p: RationalLike, tol: float = DEFAULT_TOL) -> HighPrecisionValue:
    """Limit of ``E[X_n]/(n-1)``: ``1 / B_p(1) = 1 / sum_{n>=1} q**C(n,2)``."""
    p = _check_p(p)
    b = b_series_at_one(1 - p, 0, tol)
    ctx = _ctx()
    value = ctx.divide(1, b.value)
    bf = float(b.value)
    err = b.error_bound / (bf * (bf - b.error_bound))
    return HighPrecisionValue(value, _up(err + _rounding(value)))


def _radicand(formula: str, B: decimal.Decimal, Bp: decimal.Decimal, ctx) -> tuple[decimal.Decimal, float, float]:
    """Radicand R and its partials dR/dB, dR/dB' for the chosen formula."""
    b, bp = float(B), float(Bp)
    if formula == "theorem":
        r = ctx.add(ctx.subtract(1, B), ctx.divide(ctx.multiply(6, Bp), B))
        return r, -6 * bp / b**2 - 1, 6 / b
    if formula == "derived":
        r = ctx.add(ctx.subtract(1, B), ctx.divide(ctx.multiply(2, Bp), B))
        return r, -2 * bp / b**2 - 1, 2 / b
    if formula == "lemma":
        r = ctx.subtract(1, ctx.divide(ctx.multiply(2, Bp), ctx.power(B, 3)))
        return r, 6 * bp / b**4, -2 / b**3
    raise ValueError(f"unknown formula {formula!r}; choose from {FORMULAS}")


def sigma_w(p: RationalLike, tol: float = DEFAULT_TOL, formula: str = "theorem") -> HighPrecisionValue:
    """CLT scaling constant ``B**-1 * sqrt(R)``, with the radicand R set by ``formula``.

    Raises ``ValueError`` if R is negative by more than its error bound.
    """
    p = _check_p(p)
    b0, b1, _ = _b_values(p, tol)
    ctx = _ctx()
    r, dr_db, dr_dbp = _radicand(formula, b0.value, b1.value, ctx)
    r_err = abs(dr_db) * b0.error_bound + abs(dr_dbp) * b1.error_bound + _rounding(r)
    rf = float(r)
    if rf < -r_err:
        raise ValueError(f"negative radicand {rf:.6g} for formula {formula!r} at p={p}")
    root = ctx.sqrt(max(r, decimal.Decimal(0)))
    # sqrt is not Lipschitz at 0, so bound it on the interval [r - err, r + err]
    root_err = math.sqrt(max(rf, 0.0) + r_err) - math.sqrt(max(rf - r_err, 0.0))
    value = ctx.divide(root, b0.value)
    bf = float(b0.value)
    err = root_err / bf + float(root) * b0.error_bound / (bf * (bf - b0.error_bound))
    return HighPrecisionValue(value, _up(err + _rounding(value)))


def variance_constant(p: RationalLike, tol: float = DEFAULT_TOL, formula: str = "theorem") -> HighPrecisionValue:
    """``sigma_w**2``, i.e. ``B**-2 * R``."""
    p = _check_p(p)
    b0, b1, _ = _b_values(p, tol)
    ctx = _ctx()
    r, dr_db, dr_dbp = _radicand(formula, b0.value, b1.value, ctx)
    value = ctx.divide(r, ctx.multiply(b0.value, b0.value))
    b, rf = float(b0.value), float(r)
    return _linear(value, [dr_db / b**2 - 2 * rf / b**3, dr_dbp / b**2], [b0.error_bound, b1.error_bound])


def limit_constants(p: RationalLike, tol: float = DEFAULT_TOL, formula: str = "theorem") -> LimitConstants:
    p = _check_p(p)
    b0, b1, b2 = _b_values(p, tol)
    ctx = _ctx()
    B, Bp, Bpp = b0.value, b1.value, b2.value
    b, bp, bpp = float(B), float(Bp), float(Bpp)
    e = [b0.error_bound, b1.error_bound, b2.error_bound]
    c2 = _linear(ctx.divide(1, B), [1 / b**2], e[:1])
    c1 = _linear(ctx.minus(ctx.divide(Bp, ctx.power(B, 2))), [2 * bp / b**3, 1 / b**2], e[:2])
    d3 = _linear(ctx.minus(ctx.divide(1, ctx.power(B, 2))), [2 / b**3], e[:1])
    d2 = _linear(ctx.divide(ctx.multiply(2, Bp), ctx.power(B, 3)), [6 * bp / b**4, 2 / b**3], e[:2])
    d1_val = ctx.subtract(ctx.divide(Bpp, ctx.power(B, 3)), ctx.divide(ctx.multiply(3, ctx.multiply(Bp, Bp)), ctx.power(B, 4)))
    d1 = _linear(d1_val, [12 * bp**2 / b**5 - 3 * bpp / b**4, 6 * bp / b**4, 1 / b**3], e)
    return LimitConstants(
        p=p,
        beta=beta_tr(p, tol),
        sigma_w=sigma_w(p, tol, formula),
        b1=b0,
        b1_prime=b1,
        b1_second=b2,
        c2=c2,
        c1=c1,
        d3=d3,
        d2=d2,
        d1=d1,
        sigma_formula=formula,
    )


def variance_slope(n: int, p: RationalLike) -> float:
    """``var(X_n) / (n-1)`` from exact moments (n <= 64) or the float recurrence."""
    if n < 2:
        raise ValueError("n must be at least 2")
    p = as_probability(p)
    if n <= EXACT_THRESHOLD:
        return float(moments(n, p).variance(n) / (n - 1))
    m1, m2 = moments_float(n, p)
    return float((m2[n] - m1[n] ** 2) / (n - 1))


def compare_variance_constants(n: int, p: RationalLike, tol: float = DEFAULT_TOL) -> dict:
    """Relative gap between ``variance_slope(n, p)`` and each closed form."""
    slope = variance_slope(n, p)
    out = {"n": n, "p": format_rational(as_probability(p)), "variance_slope": slope}
    for f in FORMULAS:
        try:
            v = float(variance_constant(p, tol, f).value)
        except ValueError:
            v = math.nan
        out[f] = {"value": v, "relative_gap": abs(slope - v) / abs(v) if v else math.inf}
    return out


@dataclass(frozen=True)
class CLTSummary:
    n: int
    p: Fraction
    sample_count: int
    seed: int
    formula: str
    beta: float
    sigma_w: float
    mean: float
    variance: float
    skewness: float
    ks_statistic: float
    window_correlation: float | None = None

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["p"] = format_rational(self.p)
        return d


def standardize(values: np.ndarray, n: int, beta: float, sigma: float) -> np.ndarray:
    """``(X_n - beta (n-1)) / (sigma sqrt(n-1))``."""
    return (values - beta * (n - 1)) / (sigma * math.sqrt(n - 1))


def clt_diagnostic(
    n: int,
    p: RationalLike,
    count: int,
    seed: int,
    workers: int = 1,
    formula: str = "theorem",
    windows: bool = False,
) -> CLTSummary:
    """Standardize ``count`` samples of X_n and compare them with N(0, 1).

    The Kolmogorov statistic is ``sup |F_emp - Phi|`` over the standardized
    sample.  With ``windows=True`` the summary also carries the sample
    correlation of ``w[1, m]`` and ``w[m, n]`` for ``m = (n+1)//2``, taken
    from separate draws.  It is close to zero when the increments are nearly
    independent.
    """
    p = as_probability(p)
    if p in (0, 1):
        raise ValueError("X_n is deterministic for p in {0, 1}; nothing to standardize")
    if n < 2:
        raise ValueError("n must be at least 2")
    beta = float(beta_tr(p).value)
    sigma = float(sigma_w(p, formula=formula).value)
    values = sample_values(n, p, count, seed, workers)
    z = standardize(values.astype(float), n, beta, sigma)
    corr = None
    if windows:
        pairs = two_window_values(n, p, count, seed + 1).astype(float)
        corr = float(np.corrcoef(pairs[:, 0], pairs[:, 1])[0, 1])
    return CLTSummary(
        n=n,
        p=p,
        sample_count=count,
        seed=seed,
        formula=formula,
        beta=beta,
        sigma_w=sigma,
        mean=float(z.mean()),
        variance=float(z.var(ddof=1)) if count > 1 else 0.0,
        skewness=float(stats.skew(z)),
        ks_statistic=float(stats.kstest(z, "norm").statistic),
        window_correlation=corr,
    )
