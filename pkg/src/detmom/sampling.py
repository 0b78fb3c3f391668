"""Numerical cross-checks: Monte-Carlo estimates and exhaustive averages.

Determinants of matrices with rational entries are computed exactly by
fraction-free (Bareiss) elimination after clearing denominators, so the
exhaustive average and the discrete Monte-Carlo sums are exact rationals;
only the final estimate is floated.  Standard normal entries use floating
LU determinants and compensated block summation.

Reproducibility: samples are drawn in fixed-size blocks from a counter-based
Philox generator keyed by (seed, block index), and block partials are merged
in block order.  The result for a given seed is bit-for-bit identical for
any worker count.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceededError
from .formulas import (
    fourth_moment,
    gaussian_det_moment,
    gaussian_moment_table,
    second_moment,
    sixth_moment_zero_mean,
)
from .poly import Rational, central_to_raw

BLOCK_SIZE = 4096
DEFAULT_SAMPLES = 10**6
DEFAULT_EXHAUSTIVE_BUDGET = 10**6


class DistKind(Enum):
    RADEMACHER = "rademacher"
    STD_NORMAL = "normal"
    DISCRETE = "discrete"


@dataclass(frozen=True)
class DistributionSpec:
    """An entry distribution: signed Bernoulli, standard normal, or finite."""

    kind: DistKind
    values: tuple[Fraction, ...] = ()
    probs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        if self.kind is DistKind.STD_NORMAL:
            if self.values or self.probs:
                raise ValueError("the normal distribution takes no support")
            return
        if len(self.values) != len(self.probs) or not self.values:
            raise ValueError("values and probs must be equal-length and nonempty")
        if any(p < 0 for p in self.probs):
            raise ValueError("probabilities must be nonnegative")
        if sum(self.probs, Fraction(0)) != 1:
            raise ValueError("probabilities must sum to one exactly")
        if len(set(self.values)) != len(self.values):
            raise ValueError("support values must be distinct")

    @classmethod
    def rademacher(cls) -> "DistributionSpec":
        half = Fraction(1, 2)
        return cls(DistKind.RADEMACHER, (Fraction(-1), Fraction(1)), (half, half))

    @classmethod
    def std_normal(cls) -> "DistributionSpec":
        return cls(DistKind.STD_NORMAL)

    @classmethod
    def discrete(
        cls, values: Sequence[Rational], probs: Sequence[Rational]
    ) -> "DistributionSpec":
        return cls(
            DistKind.DISCRETE,
            tuple(Fraction(v) for v in values),
            tuple(Fraction(p) for p in probs),
        )

    @property
    def finite(self) -> bool:
        return self.kind is not DistKind.STD_NORMAL


def exact_moments(dist: DistributionSpec, up_to: int) -> dict[int, Fraction]:
    """Raw moments m_1 .. m_up_to of the entry distribution, exact."""
    if dist.kind is DistKind.STD_NORMAL:
        return gaussian_moment_table(up_to)
    return {
        r: sum((p * v**r for v, p in zip(dist.values, dist.probs)), Fraction(0))
        for r in range(1, up_to + 1)
    }


# -- exact determinants ----------------------------------------------------


def _int_det(rows: list[list[int]]) -> int:
    """Bareiss fraction-free elimination with row pivoting; exact for ints."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for s in range(n - 1):
        if m[s][s] == 0:
            for r in range(s + 1, n):
                if m[r][s] != 0:
                    m[s], m[r] = m[r], m[s]
                    sign = -sign
                    break
            else:
                return 0
        piv = m[s][s]
        for i in range(s + 1, n):
            fac = m[i][s]
            for j in range(s + 1, n):
                m[i][j] = (piv * m[i][j] - fac * m[s][j]) // prev
            m[i][s] = 0
        prev = piv
    return sign * m[n - 1][n - 1]


def exact_det(rows: Sequence[Sequence[Rational]]) -> Fraction:
    """Exact determinant of a rational matrix via denominator-cleared Bareiss."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    fracs = [[Fraction(x) for x in row] for row in rows]
    scale = math.lcm(*(x.denominator for row in fracs for x in row))
    ints = [[int(x * scale) for x in row] for row in fracs]
    return Fraction(_int_det(ints), scale**n)


def _batch_int_det(mats: np.ndarray) -> list[int]:
    """Bareiss elimination vectorized over axis 0 of an integer (B, n, n) array.

    Row pivoting is handled per matrix; matrices whose pivot column is
    entirely zero are parked and reported as determinant zero.
    """
    B, n, _ = mats.shape
    if n == 0:
        return [1] * B
    m = mats.copy()
    sign = np.ones(B, dtype=m.dtype)
    dead = np.zeros(B, dtype=bool)
    prev = np.ones(B, dtype=m.dtype)
    for s in range(n - 1):
        need = np.nonzero((m[:, s, s] == 0) & ~dead)[0]
        for b in need.tolist():
            for r in range(s + 1, n):
                if m[b, r, s] != 0:
                    tmp = m[b, s].copy()
                    m[b, s] = m[b, r]
                    m[b, r] = tmp
                    sign[b] = -sign[b]
                    break
            else:
                dead[b] = True
        piv = m[:, s, s].copy()
        piv[dead] = 1  # keep the exact divisions well-defined on parked rows
        for i in range(s + 1, n):
            fac = m[:, i, s].copy()
            for j in range(s + 1, n):
                m[:, i, j] = (piv * m[:, i, j] - fac * m[:, s, j]) // prev
            m[:, i, s] = 0
        prev = piv
    det = sign * m[:, n - 1, n - 1]
    out = det.tolist()
    for b in np.nonzero(dead)[0].tolist():
        out[b] = 0
    return out


def _int64_safe(n: int, max_abs: int) -> bool:
    # Intermediate Bareiss entries are minors; bound them by Hadamard's
    # inequality and leave room for the pivot product before division.
    if n <= 1:
        return max_abs < 2**31
    hb = (n - 1) ** ((n) // 2) * max_abs ** (n - 1)
    return 2 * hb * hb < 2**62


# -- exhaustive averages ---------------------------------------------------


def exhaustive_moment(
    dist: DistributionSpec,
    k: int,
    n: int,
    budget: Optional[int] = None,
) -> Fraction:
    """E[det(A)^k] as an exact average over all |support|^(n^2) matrices."""
    if not dist.finite:
        raise ValueError("exhaustive averaging needs a finite support")
    if k < 1 or n < 0:
        raise ValueError("need k >= 1 and n >= 0")
    budget = DEFAULT_EXHAUSTIVE_BUDGET if budget is None else budget
    s = len(dist.values)
    total = s ** (n * n)
    if total > budget:
        raise BudgetExceededError(total, budget, f"exhaustive average for n={n}")

    scale = math.lcm(*(v.denominator for v in dist.values))
    scaled = [int(v * scale) for v in dist.values]
    uniform = len(set(dist.probs)) == 1

    acc_int = 0
    acc_frac = Fraction(0)
    for combo in itertools.product(range(s), repeat=n * n):
        rows = [
            [scaled[combo[i * n + j]] for j in range(n)] for i in range(n)
        ]
        d = _int_det(rows) ** k
        if uniform:
            acc_int += d
        else:
            p = Fraction(1)
            for idx in combo:
                p *= dist.probs[idx]
            acc_frac += p * d
    denom = Fraction(scale) ** (n * k)
    if uniform:
        return Fraction(acc_int, s ** (n * n)) / denom
    return acc_frac / denom


# -- symbolic targets ------------------------------------------------------


def exact_moment_target(dist: DistributionSpec, k: int, n: int) -> Optional[Fraction]:
    """Closed-form value of E[det(A)^k] when one of the formulas applies.

    Covers k = 2 and 4 for any entry law, k = 6 for centered entries, and
    any even k for standard normal entries; returns None otherwise (odd
    moments beyond k = 1 have no known closed form).
    """
    if n == 0:
        return Fraction(1)
    moments = exact_moments(dist, max(k, 6))
    mean = moments[1]
    rest = {r: v for r, v in moments.items() if r >= 2}
    if k == 1:
        return mean**n * _perm_sum_sign(n)
    if k == 2:
        return second_moment(n).evaluate(rest, mean)
    if k == 4:
        return central_to_raw(fourth_moment(n)).evaluate(rest, mean)
    if k == 6 and mean == 0:
        return sixth_moment_zero_mean(n).evaluate(rest, mean)
    if dist.kind is DistKind.STD_NORMAL and k % 2 == 0:
        return gaussian_det_moment(k, n)
    return None


def _perm_sum_sign(n: int) -> Fraction:
    # E[det A] = m_1^n * sum over permutations of the sign = 0 for n >= 2.
    return Fraction(1) if n <= 1 else Fraction(0)


# -- Monte Carlo -----------------------------------------------------------


@dataclass(frozen=True)
class EstimateReport:
    """Outcome of a Monte-Carlo run, with the exact target when known."""

    estimate: float
    std_error: float
    samples: int
    seed: int
    exact_target: Optional[Fraction] = None

    def within(self, sigmas: float) -> Optional[bool]:
        """Whether the estimate is within ``sigmas`` standard errors of target."""
        if self.exact_target is None:
            return None
        return abs(self.estimate - float(self.exact_target)) <= sigmas * self.std_error

    def to_json_dict(self) -> dict:
        out = {
            "estimate": self.estimate,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
        }
        if self.exact_target is not None:
            out["exact_target"] = str(self.exact_target)
        return out


def _block_rng(seed: int, block: int) -> np.random.Generator:
    key = ((seed % 2**64) << 64) | block
    return np.random.Generator(np.random.Philox(key=key))


def _normal_block(args: tuple) -> tuple[float, float]:
    seed, block, count, n, k = args
    g = _block_rng(seed, block)
    mats = g.standard_normal((count, n, n))
    vals = np.linalg.det(mats) ** k
    return float(np.sum(vals)), float(np.sum(vals * vals))


def _discrete_block(args: tuple) -> tuple[int, int]:
    seed, block, count, n, k, scaled, cum, uniform, use_int64 = args
    g = _block_rng(seed, block)
    s = len(scaled)
    if uniform:
        idx = g.integers(0, s, size=(count, n, n))
    else:
        u = g.random((count, n, n))
        idx = np.minimum(np.searchsorted(cum, u, side="right"), s - 1)
    dtype = np.int64 if use_int64 else object
    support = np.array(scaled, dtype=dtype)
    mats = support[idx]
    dets = _batch_int_det(mats)
    sx = 0
    sxx = 0
    for d in dets:
        v = int(d) ** k
        sx += v
        sxx += v * v
    return sx, sxx


def _kahan_sum(values: list[float]) -> float:
    total = 0.0
    comp = 0.0
    for v in values:
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def mc_estimate(
    dist: DistributionSpec,
    k: int,
    n: int,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    workers: int = 1,
) -> EstimateReport:
    """Monte-Carlo estimate of E[det(A)^k]; deterministic per seed."""
    if samples < 2:
        raise ValueError("need at least two samples for a standard error")
    if k < 1 or n < 0:
        raise ValueError("need k >= 1 and n >= 0")

    blocks = []
    start = 0
    index = 0
    while start < samples:
        count = min(BLOCK_SIZE, samples - start)
        blocks.append((index, count))
        start += count
        index += 1

    if dist.kind is DistKind.STD_NORMAL:
        jobs = [(seed, b, count, n, k) for b, count in blocks]
        parts = _run_blocks(_normal_block, jobs, workers)
        sum_x = _kahan_sum([p[0] for p in parts])
        sum_xx = _kahan_sum([p[1] for p in parts])
        mean = sum_x / samples
        var = max(sum_xx - samples * mean * mean, 0.0) / (samples - 1)
        se = math.sqrt(var / samples)
        estimate = mean
    else:
        scale = math.lcm(*(v.denominator for v in dist.values))
        scaled = [int(v * scale) for v in dist.values]
        uniform = len(set(dist.probs)) == 1
        cum = np.cumsum([float(p) for p in dist.probs])
        max_abs = max(1, max(abs(v) for v in scaled))
        use_int64 = _int64_safe(n, max_abs)
        jobs = [
            (seed, b, count, n, k, tuple(scaled), cum, uniform, use_int64)
            for b, count in blocks
        ]
        parts = _run_blocks(_discrete_block, jobs, workers)
        denom = Fraction(scale) ** (n * k)
        sum_x = Fraction(sum(p[0] for p in parts)) / denom
        sum_xx = Fraction(sum(p[1] for p in parts)) / denom**2
        mean_fr = sum_x / samples
        var_fr = (sum_xx - samples * mean_fr * mean_fr) / (samples - 1)
        estimate = float(mean_fr)
        se = math.sqrt(max(float(var_fr), 0.0) / samples)

    return EstimateReport(
        estimate=estimate,
        std_error=se,
        samples=samples,
        seed=seed,
        exact_target=exact_moment_target(dist, k, n),
    )


def _run_blocks(fn, jobs: list, workers: int) -> list:
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(job) for job in jobs]
