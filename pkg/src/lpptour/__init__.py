"""Exact and Monte Carlo tools for the heaviest path on Bernoulli-weighted transitive tournaments."""

from .asymptotics import beta_tr, clt_diagnostic, compare_variance_constants, limit_constants, sigma_w, variance_slope
from .numerics import HighPrecisionValue, QPowers, Rational, as_probability, b_series_at_one, q_triangular_power
from .percolation import (
    SampleReport,
    WeightAssignment,
    brute_force_distribution,
    coupled_increment_check,
    heaviest_path,
    sample,
)
from .recurrence import MomentTable, PolyInT, WeightDistribution, distribution, expected_weight, moments, moments_float, pgf
from .series import (
    BivariateSeries,
    TruncatedSeries,
    compositions,
    g_by_compositions,
    h_by_compositions,
    reciprocal,
    series_A,
    series_B,
    series_G,
    series_Z,
)

__version__ = "0.1.0"
