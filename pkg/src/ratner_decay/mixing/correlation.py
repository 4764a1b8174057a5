"""Monte Carlo estimates of flow correlations, checked against the bound.

The estimator draws frames g_i = n(x) a(y) r(theta) with the base point
from the normalized hyperbolic area measure on the fundamental domain and
the fiber angle uniform, then averages v(base(g_i)) * w(base(a(t) g_i)).
For mean-zero observables this converges to the correlation coefficient
<v, w o a(t)>, the quantity the decay bound controls; the estimators
therefore refuse observables without a mean-zero certificate.

Determinism: samples are split into fixed-size shards, each driven by its
own counter-based stream Philox(SeedSequence(seed, spawn_key=(shard,))).
Shards may run on any number of threads; partial sums are combined in
shard order with a fixed pairwise reduction, so the resulting estimates
are bit-identical across reruns and across worker counts.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from ratner_decay import _kernels
from ratner_decay.bounds import corollary_bound

from .surface import sample_base_points

__all__ = [
    "SHARD_SIZE",
    "MixingRow",
    "MixingReport",
    "estimate_correlation",
    "resolve_threads",
    "verify_corollary",
]

# Samples per RNG shard. Fixed so that the shard layout, and with it the
# bit-exact result, depends only on the total sample count.
SHARD_SIZE = 65536

_MIN_SAMPLES = 10_000


class MixingRow(NamedTuple):
    """One time point: the estimate, its standard error, and the verdict.

    `bound` and `passed` stay None on estimate-only runs; verification
    fills them with the correlation bound and the one-sided check
    |estimate| <= bound + 3 stderr.
    """

    t: float
    estimate: float
    stderr: float
    bound: Optional[float] = None
    passed: Optional[bool] = None


@dataclass(frozen=True)
class MixingReport:
    """Rows for every requested time, plus the run's provenance."""

    rows: Tuple[MixingRow, ...]
    samples: int
    seed: int

    @property
    def all_passed(self):
        return all(bool(row.passed) for row in self.rows)


def resolve_threads(threads=None):
    """Worker count: explicit argument, else RATNER_THREADS, else cpu count."""
    if threads is None:
        env = os.environ.get("RATNER_THREADS")
        if env is not None:
            try:
                threads = int(env)
            except ValueError:
                raise ValueError(f"RATNER_THREADS must be an integer, got {env!r}") from None
        else:
            return os.cpu_count() or 1
    threads = int(threads)
    if threads < 1:
        raise ValueError(f"thread count must be positive, got {threads}")
    return threads


def _shard_sizes(samples):
    full, rem = divmod(samples, SHARD_SIZE)
    sizes = [SHARD_SIZE] * full
    if rem:
        sizes.append(rem)
    return sizes


def _shard_sums(v, w, t_values, seed, shard, count, backend):
    """Per-shard (sum, sum of squares) of the product for every t.

    The frame entries replicate the scalar Iwasawa lift's arithmetic
    (n(x) a(y) then r(theta), same operation order), so vectorized and
    pointwise paths agree exactly.
    """
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(shard,))))
    x, y = sample_base_points(rng, count)
    fiber = rng.uniform(0.0, 2.0 * math.pi, count)

    sq = np.sqrt(y)
    inv = 1.0 / sq
    xs = x * inv
    cf = np.cos(fiber)
    sf = np.sin(fiber)
    nsf = -sf
    h11 = sq * cf + xs * nsf
    h12 = sq * sf + xs * cf
    h21 = inv * nsf
    h22 = inv * cf

    base = v.values(x, y)
    sums = np.empty((len(t_values), 2))
    for j, t in enumerate(t_values):
        fx, fy = _kernels.flow_points(h11, h12, h21, h22, t, backend=backend)
        prod = base * w.values(fx, fy)
        sums[j, 0] = np.sum(prod)
        sums[j, 1] = np.sum(prod * prod)
    return sums


def _check_inputs(v, w, t_values, samples):
    for obs in (v, w):
        if obs.mean_zero_certificate is None:
            raise ValueError(
                f"observable {obs.id!r} carries no mean-zero certificate; "
                "the correlation bound assumes mean-zero observables"
            )
    if samples < _MIN_SAMPLES:
        raise ValueError(
            f"samples must be at least {_MIN_SAMPLES} for a stable variance "
            f"estimate, got {samples}"
        )
    if not t_values:
        raise ValueError("t_grid must contain at least one time")
    for t in t_values:
        if not math.isfinite(t):
            raise ValueError(f"times must be finite, got {t!r}")


def _estimate_rows(v, w, t_values, samples, seed, threads, backend):
    sizes = _shard_sizes(samples)
    results = [None] * len(sizes)
    workers = min(resolve_threads(threads), len(sizes))
    if workers <= 1:
        for shard, count in enumerate(sizes):
            results[shard] = _shard_sums(v, w, t_values, seed, shard, count, backend)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_shard_sums, v, w, t_values, seed, shard, count, backend): shard
                for shard, count in enumerate(sizes)
            }
            for future in as_completed(futures):
                results[futures[future]] = future.result()

    # Shard results land at their own index, so this reduction has a fixed
    # order no matter how the futures completed.
    totals = np.sum(np.array(results), axis=0)
    n = float(samples)
    rows = []
    for j, t in enumerate(t_values):
        estimate = totals[j, 0] / n
        second_moment = totals[j, 1] / n
        variance = max(second_moment - estimate * estimate, 0.0) * (n / (n - 1.0))
        rows.append(MixingRow(float(t), float(estimate), math.sqrt(variance / n)))
    return rows


def estimate_correlation(v, w, t_grid, samples, seed, threads=None, backend=None):
    """Estimate <v, w o a(t)> for every t in `t_grid`.

    Returns a report whose rows carry estimates and standard errors only;
    `verify_corollary` additionally fills the bound column. `threads`
    overrides the RATNER_THREADS / cpu-count default; `backend` selects
    the flow kernel implementation (None for the import-time default).
    """
    t_values = [float(t) for t in t_grid]
    _check_inputs(v, w, t_values, samples)
    rows = _estimate_rows(v, w, t_values, samples, seed, threads, backend)
    return MixingReport(rows=tuple(rows), samples=samples, seed=seed)


def verify_corollary(v, w, t_grid, samples, seed, lambda1, threads=None, backend=None):
    """Check estimated correlations against the explicit decay bound.

    `lambda1` is the base eigenvalue of the surface, supplied as external
    spectral input (negative; for the modular surface the case
    lambda1 <= -1/4 applies). Each row passes when
    |estimate| <= bound + 3 stderr, a one-sided check: the bound is an
    upper bound, so failures indicate bugs rather than statistics.
    """
    t_values = [float(t) for t in t_grid]
    _check_inputs(v, w, t_values, samples)
    # Resolve the bounds first: this validates lambda1 and the time grid
    # before any sampling work starts.
    bounds = [corollary_bound(lambda1, v.l2_norm, w.l2_norm, t) for t in t_values]
    rows = _estimate_rows(v, w, t_values, samples, seed, threads, backend)
    verified = tuple(
        MixingRow(row.t, row.estimate, row.stderr, bound, abs(row.estimate) <= bound + 3.0 * row.stderr)
        for row, bound in zip(rows, bounds)
    )
    return MixingReport(rows=verified, samples=samples, seed=seed)
