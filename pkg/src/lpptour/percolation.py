"""Heaviest paths on randomly weighted transitive tournaments.

This module is the probabilistic ground truth the exact layers are checked
against: a single-assignment DP, an exhaustive enumeration over all weight
assignments for small n, and a reproducible Monte Carlo sampler.

Monte Carlo streams
-------------------
``sample(n, p, count, seed, workers)`` splits ``count`` so that worker k
gets ``count // workers`` samples, plus one more when ``k < count % workers``.
Worker k draws from ``Philox(SeedSequence(seed, spawn_key=(k,)))`` in
batches of at most ``BATCH`` samples.  Edge (i, j) of a sample is 1 iff a
uniform integer in ``[0, b)`` is below ``a``, where ``p = a/b``.  Results
are exact integer sums combined after all workers finish, so the report
depends only on ``(n, p, count, seed, workers)``.
"""

from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from .numerics import RationalLike, as_probability, format_rational
from .recurrence import WeightDistribution

BATCH = 1024
BRUTE_FORCE_MAX_N = 8


def edge_count(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(n: int, i: int, j: int) -> int:
    """Position of edge (i, j), 1 <= i < j <= n, in row-major order.

    Row i holds edges (i, i+1), ..., (i, n); rows are laid out i = 1, 2, ...
    """
    if not 1 <= i < j <= n:
        raise IndexError(f"no edge ({i}, {j}) in a tournament on {n} nodes")
    return (i - 1) * (2 * n - i) // 2 + (j - i - 1)


class WeightAssignment:
    """0/1 weights on the edges of the transitive tournament on nodes 1..n."""

    def __init__(self, n: int, bits: np.ndarray):
        if n < 1:
            raise ValueError("n must be at least 1")
        m = edge_count(n)
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.shape != (math.ceil(m / 8),):
            raise ValueError(f"expected {math.ceil(m / 8)} packed bytes for {m} edges")
        self.n = n
        self.bits = bits

    @classmethod
    def from_weights(cls, n: int, weights) -> "WeightAssignment":
        w = np.asarray(weights, dtype=np.uint8).ravel()
        if w.shape != (edge_count(n),) or np.any(w > 1):
            raise ValueError(f"need {edge_count(n)} weights in {{0, 1}}")
        return cls(n, np.packbits(w, bitorder="little"))

    @classmethod
    def from_function(cls, n: int, weight: Callable[[int, int], int]) -> "WeightAssignment":
        return cls.from_weights(n, [weight(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])

    @classmethod
    def random(cls, n: int, p: RationalLike, rng: np.random.Generator) -> "WeightAssignment":
        p = as_probability(p)
        w = rng.integers(0, p.denominator, size=edge_count(n)) < p.numerator
        return cls.from_weights(n, w)

    def weights(self) -> np.ndarray:
        return np.unpackbits(self.bits, count=edge_count(self.n), bitorder="little")

    def weight(self, i: int, j: int) -> int:
        k = edge_index(self.n, i, j)
        return int(self.bits[k >> 3] >> (k & 7) & 1)

    def matrix(self) -> np.ndarray:
        """Dense upper-triangular matrix with ``M[i-1, j-1] = w(i, j)``."""
        m = np.zeros((self.n, self.n), dtype=np.uint8)
        m[np.triu_indices(self.n, 1)] = self.weights()  # triu_indices is row-major too
        return m


def heaviest_path(w: WeightAssignment, start: int = 1, end: int | None = None) -> int:
    """Weight ``w[start, end]`` of the heaviest path; defaults to ``X_n = w[1, n]``."""
    end = w.n if end is None else end
    if not 1 <= start <= end <= w.n:
        raise ValueError("need 1 <= start <= end <= n")
    m = w.matrix().astype(np.int64)
    best = np.zeros(end - start + 1, dtype=np.int64)
    for j in range(1, end - start + 1):
        best[j] = np.max(best[:j] + m[start - 1 : start - 1 + j, start - 1 + j])
    return int(best[-1])


def _batched_paths(n: int, columns: Callable[[int], np.ndarray], batch: int) -> np.ndarray:
    """Run the DP on ``batch`` tournaments at once.

    ``columns(j)`` returns the weights of edges (i, j+1) for i = 1..j (one
    row per tournament).  Returns ``best`` with ``best[:, k] = w[1, k+1]``.
    """
    best = np.zeros((batch, n), dtype=np.int16 if n < 30000 else np.int32)
    for j in range(1, n):
        col = columns(j)
        best[:, j] = (best[:, :j] + col).max(axis=1)
    return best


@lru_cache(maxsize=None)
def _enumerate_counts(n: int) -> np.ndarray:
    """``counts[k, s]``: assignments with ``X_n = k`` and exactly s unit edges."""
    m = edge_count(n)
    counts = np.zeros((n, m + 1), dtype=np.int64)
    if m == 0:
        counts[0, 0] = 1
        return counts
    # column j gathers edge indices (i, j+1), i = 1..j, in 0-based node numbering
    col_edges = [np.array([edge_index(n, i + 1, j + 1) for i in range(j)]) for j in range(n)]
    chunk = 1 << min(m, 20)
    for start in range(0, 1 << m, chunk):
        codes = np.arange(start, start + chunk, dtype=np.int64)
        best = _batched_paths(
            n, lambda j: ((codes[:, None] >> col_edges[j][None, :]) & 1).astype(np.int16), chunk
        )
        ones = np.bitwise_count(codes)
        flat = best[:, -1].astype(np.int64) * (m + 1) + ones
        counts += np.bincount(flat, minlength=n * (m + 1)).reshape(n, m + 1)
    return counts


def brute_force_distribution(n: int, p: RationalLike) -> WeightDistribution:
    """Exact law of X_n by enumerating all ``2**C(n,2)`` weight assignments.

    One enumeration per n records how many assignments have each pair
    (X_n, number of unit edges).  Any rational p then gives the probabilities
    exactly.
    """
    p = as_probability(p)
    if not 1 <= n <= BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force supports 1 <= n <= {BRUTE_FORCE_MAX_N}")
    if n == BRUTE_FORCE_MAX_N:
        warnings.warn("enumerating 2**28 assignments; this takes a while", stacklevel=2)
    counts = _enumerate_counts(n)
    m = edge_count(n)
    q = 1 - p
    weight = [p**s * q ** (m - s) for s in range(m + 1)]
    probs = tuple(sum((int(counts[k, s]) * weight[s] for s in range(m + 1) if counts[k, s]), Fraction(0)) for k in range(n))
    return WeightDistribution(n, probs)


@dataclass(frozen=True)
class SampleReport:
    n: int
    p: Fraction
    sample_count: int
    seed: int
    worker_count: int
    mean: float
    variance: float
    stderr: float
    normalized_mean: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["p"] = format_rational(self.p)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _draw_dtype(b: int):
    for dt in (np.uint8, np.uint16, np.uint32, np.uint64):
        if b - 1 <= np.iinfo(dt).max:
            return dt
    raise ValueError("denominator of p too large for exact sampling")


def _worker_values(n: int, p: Fraction, count: int, seed: int, k: int, window: int | None = None):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(k,))))
    a, b = p.numerator, p.denominator
    dt = _draw_dtype(b)
    out = []
    done = 0
    while done < count:
        size = min(BATCH, count - done)

        def columns(j, size=size):
            return (rng.integers(0, b, size=(size, j), dtype=dt) < a).astype(np.int16)

        if window is None:
            out.append(_batched_paths(n, columns, size)[:, -1].astype(np.int64))
        else:
            out.append(_two_window_batch(n, window, columns, size))
        done += size
    if not out:
        return np.zeros((0,) if window is None else (0, 2), dtype=np.int64)
    return np.concatenate(out)


def partition(count: int, workers: int) -> list[int]:
    """Per-worker sample counts: the first ``count % workers`` workers take one extra."""
    base, extra = divmod(count, workers)
    return [base + (k < extra) for k in range(workers)]


def new_seed() -> int:
    return int(np.random.SeedSequence().entropy % 2**63)


def sample_values(n: int, p: RationalLike, count: int, seed: int, workers: int = 1) -> np.ndarray:
    """Per-sample X_n values, concatenated in worker order."""
    p = as_probability(p)
    if n < 1:
        raise ValueError("n must be at least 1")
    if count < 1:
        raise ValueError("count must be at least 1")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    sizes = partition(count, workers)
    if workers == 1:
        return _worker_values(n, p, count, seed, 0)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda k: _worker_values(n, p, sizes[k], seed, k), range(workers)))
    return np.concatenate(parts)


def summarize(n: int, p: Fraction, values: np.ndarray, seed: int, workers: int) -> SampleReport:
    count = len(values)
    total = int(values.sum())
    total_sq = int((values.astype(np.int64) ** 2).sum())
    mean = Fraction(total, count)
    var = (Fraction(total_sq) - total * mean) / (count - 1) if count > 1 else Fraction(0)
    mean_f, var_f = float(mean), float(var)
    return SampleReport(
        n=n,
        p=p,
        sample_count=count,
        seed=seed,
        worker_count=workers,
        mean=mean_f,
        variance=var_f,
        stderr=math.sqrt(var_f / count),
        normalized_mean=mean_f / (n - 1) if n > 1 else math.nan,
    )


def sample(n: int, p: RationalLike, count: int, seed: int | None = None, workers: int = 1) -> SampleReport:
    """Monte Carlo estimate of E[X_n] and var(X_n); see the module docstring for the stream layout."""
    p = as_probability(p)
    seed = new_seed() if seed is None else int(seed)
    values = sample_values(n, p, count, seed, workers)
    return summarize(n, p, values, seed, workers)


def coupled_increment_check(n: int, p: RationalLike, count: int, seed: int = 0) -> float:
    """Fraction of samples on n+1 nodes where ``X_{n+1} - X_n`` is not 0 or 1.

    Both values come from the same assignment: X_n reads the DP at node n,
    X_{n+1} at node n+1.  Adding a node can never lose weight, and it can add
    at most the one edge that enters it, so the answer is always 0.
    """
    p = as_probability(p)
    if n < 1 or count < 1:
        raise ValueError("need n >= 1 and count >= 1")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    a, b = p.numerator, p.denominator
    dt = _draw_dtype(b)
    bad = 0
    done = 0
    while done < count:
        size = min(8 * BATCH, count - done)
        best = _batched_paths(
            n + 1, lambda j: (rng.integers(0, b, size=(size, j), dtype=dt) < a).astype(np.int16), size
        )
        inc = best[:, n].astype(np.int64) - best[:, n - 1]
        bad += int(np.count_nonzero((inc < 0) | (inc > 1)))
        done += size
    return bad / count


def _two_window_batch(n: int, split: int, columns, size: int) -> np.ndarray:
    """``(w[1, split], w[split, n])`` per sample, both from one realization."""
    best = np.zeros((size, n), dtype=np.int16)
    late = np.zeros((size, n - split + 1), dtype=np.int16)  # late[:, k] = w[split, split+k]
    for j in range(1, n):
        col = columns(j)
        best[:, j] = (best[:, :j] + col).max(axis=1)
        if j >= split:
            k = j - split + 1
            late[:, k] = (late[:, :k] + col[:, split - 1 : j]).max(axis=1)
    return np.stack([best[:, split - 1], late[:, -1]], axis=1).astype(np.int64)


def two_window_values(n: int, p: RationalLike, count: int, seed: int, split: int | None = None) -> np.ndarray:
    """Samples of ``(w[1, m], w[m, n])`` with ``m = split`` (default ``(n+1)//2``)."""
    p = as_probability(p)
    split = (n + 1) // 2 if split is None else split
    if not 1 <= split <= n:
        raise ValueError("split must lie in [1, n]")
    return _worker_values(n, p, count, seed, 0, window=split)
