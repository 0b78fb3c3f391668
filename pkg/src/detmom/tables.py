"""Brute-force oracle: determinant moments by enumerating permutation tables.

Expanding det(A)^k = prod of k determinants and taking expectations termwise
turns E[det(A)^k] into a signed sum over k-row tables of permutations of
{1..n}: the sign is the product of the row signs, and the weight of a table
is the product over columns of m_{c} for every group of c equal values in
that column (raw basis).

The marked variant subtracts the mean first: each row may additionally
replace at most one of its entries by a mark contributing a factor m_1, and
the remaining values group into central moments mu_c.  A column with an
unmarked value that appears exactly once contributes mu_1 = 0, killing the
table, which is what makes the marked sum sparse.

For even k the sum is invariant under relabelling columns by the first row's
inverse, so the first row can be pinned to the identity and the result
multiplied by n!; for odd k the row signs do not cancel and the reduction is
unsound.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Callable, Optional, Sequence

from .errors import BudgetExceededError
from .poly import DEFAULT_MAX_ORDER, Basis, MomentPolynomial

DEFAULT_BUDGET = 10**9
_PARALLEL_THRESHOLD = 200_000
_PROGRESS_STEP = 1 << 16


class TableMode(Enum):
    PLAIN = "plain"
    MARKED = "marked"


class Reduction(Enum):
    FULL = "full"
    FIRST_ROW_IDENTITY = "first-row"


ProgressFn = Callable[[int, int], None]


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given as a tuple of 0-based values."""
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _check_perm(row: Sequence[int], n: int) -> tuple[int, ...]:
    row = tuple(row)
    if sorted(row) != list(range(n)):
        raise ValueError(f"row {row} is not a permutation of 0..{n - 1}")
    return row


@dataclass(frozen=True)
class PermutationTable:
    """k rows, each a permutation of 0..n-1 (columns indexed by position)."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.rows:
            raise ValueError("a table needs at least one row")
        n = len(self.rows[0])
        object.__setattr__(
            self, "rows", tuple(_check_perm(r, n) for r in self.rows)
        )

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    def sign(self) -> int:
        s = 1
        for row in self.rows:
            s *= permutation_sign(row)
        return s

    def weight(self, max_order: Optional[int] = None) -> MomentPolynomial:
        """Product over columns of m_c per group of c equal values; raw basis."""
        R = max_order or max(DEFAULT_MAX_ORDER, self.k)
        exp = [0] * (R + 1)
        for i in range(self.n):
            _column_runs(sorted(r[i] for r in self.rows), exp)
        return MomentPolynomial(Basis.RAW, {tuple(exp): Fraction(1)}, R)


@dataclass(frozen=True)
class MarkedRow:
    """A permutation with at most one position replaced by a mean mark."""

    values: tuple[int, ...]
    mark: Optional[int] = None  # masked position, or None

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        if self.mark is not None and not 0 <= self.mark < len(self.values):
            raise ValueError("mark position out of range")


@dataclass(frozen=True)
class MarkedTable:
    """k marked rows over the same column set."""

    rows: tuple[MarkedRow, ...]

    def __post_init__(self) -> None:
        if not self.rows:
            raise ValueError("a table needs at least one row")
        n = len(self.rows[0].values)
        for r in self.rows:
            _check_perm(r.values, n)

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0].values)

    def sign(self) -> int:
        s = 1
        for row in self.rows:
            s *= permutation_sign(row.values)
        return s

    def weight(self, max_order: Optional[int] = None) -> MomentPolynomial:
        """Central-basis weight: m_1 per mark, mu_c per group of c unmarked values.

        Zero whenever some unmarked value is alone in its column (mu_1 = 0).
        """
        R = max_order or max(DEFAULT_MAX_ORDER, self.k)
        exp = [0] * (R + 1)
        for i in range(self.n):
            vals = []
            for row in self.rows:
                if row.mark == i:
                    exp[0] += 1
                else:
                    vals.append(row.values[i])
            vals.sort()
            if not _column_runs(vals, exp, forbid_singletons=True):
                return MomentPolynomial.zero(Basis.CENTRAL, R)
        return MomentPolynomial(Basis.CENTRAL, {tuple(exp): Fraction(1)}, R)


def _column_runs(vals: list[int], exp: list[int], forbid_singletons: bool = False) -> bool:
    """Accumulate run lengths of a sorted column into an exponent vector.

    Returns False if a singleton appears while ``forbid_singletons`` is set.
    """
    j = 0
    k = len(vals)
    while j < k:
        c = 1
        while j + c < k and vals[j + c] == vals[j]:
            c += 1
        if c == 1:
            if forbid_singletons:
                return False
            exp[0] += 1
        else:
            exp[c] += 1
        j += c
    return True


# -- enumeration -----------------------------------------------------------


def _plain_options(n: int) -> list[tuple[tuple[int, ...], int]]:
    return [
        (p, permutation_sign(p)) for p in itertools.permutations(range(n))
    ]


def _marked_options(n: int) -> list[tuple[tuple[int, ...], Optional[int], int]]:
    out = []
    for p in itertools.permutations(range(n)):
        s = permutation_sign(p)
        out.append((p, None, s))
        for pos in range(n):
            out.append((p, pos, s))
    return out


def table_count(k: int, n: int, mode: TableMode, reduction: Reduction) -> int:
    """Number of weight evaluations a full enumeration would perform."""
    per_row = factorial(n) if mode is TableMode.PLAIN else factorial(n) * (n + 1)
    if reduction is Reduction.FIRST_ROW_IDENTITY:
        first = 1 if mode is TableMode.PLAIN else n + 1
        return first * per_row ** (k - 1)
    return per_row**k


def _resolve_reduction(k: int, reduction: Optional[Reduction]) -> Reduction:
    if reduction is None:
        return Reduction.FIRST_ROW_IDENTITY if k % 2 == 0 else Reduction.FULL
    if reduction is Reduction.FIRST_ROW_IDENTITY and k % 2:
        raise ValueError(
            "the first-row-identity reduction is only sound for even k "
            "(row signs must cancel)"
        )
    return reduction


def _axes(
    k: int, n: int, mode: TableMode, reduction: Reduction
) -> tuple[list, list]:
    """Option lists for the first row and for every later row."""
    if mode is TableMode.PLAIN:
        options = _plain_options(n)
        identity = (tuple(range(n)), 1)
        first = [identity] if reduction is Reduction.FIRST_ROW_IDENTITY else options
    else:
        options = _marked_options(n)
        ident = tuple(range(n))
        if reduction is Reduction.FIRST_ROW_IDENTITY:
            first = [(ident, None, 1)] + [(ident, pos, 1) for pos in range(n)]
        else:
            first = options
    return first, options


def _accumulate_range(
    k: int,
    n: int,
    R: int,
    mode: TableMode,
    reduction: Reduction,
    lo: int,
    hi: int,
    progress: Optional[ProgressFn] = None,
    total: int = 0,
) -> dict[tuple[int, ...], int]:
    """Signed weight counts over a slice of the partition axis.

    The partition axis is the second row when the first is pinned, else the
    first row; ``lo:hi`` slices that axis's option list.
    """
    first, options = _axes(k, n, mode, reduction)
    axes: list[list] = [first] + [options] * (k - 1)
    axis = 1 if reduction is Reduction.FIRST_ROW_IDENTITY and k >= 2 else 0
    axes[axis] = axes[axis][lo:hi]

    acc: dict[tuple[int, ...], int] = {}
    done = 0
    if mode is TableMode.PLAIN:
        for combo in itertools.product(*axes):
            sign = 1
            for _, s in combo:
                sign *= s
            exp = [0] * (R + 1)
            for i in range(n):
                _column_runs(sorted(row[i] for row, _ in combo), exp)
            key = tuple(exp)
            acc[key] = acc.get(key, 0) + sign
            done += 1
            if progress and done % _PROGRESS_STEP == 0:
                progress(done, total)
    else:
        for combo in itertools.product(*axes):
            sign = 1
            for _, _, s in combo:
                sign *= s
            exp = [0] * (R + 1)
            alive = True
            for i in range(n):
                vals = []
                for perm, mark, _ in combo:
                    if mark == i:
                        exp[0] += 1
                    else:
                        vals.append(perm[i])
                vals.sort()
                if not _column_runs(vals, exp, forbid_singletons=True):
                    alive = False
                    break
            if alive:
                key = tuple(exp)
                acc[key] = acc.get(key, 0) + sign
            done += 1
            if progress and done % _PROGRESS_STEP == 0:
                progress(done, total)
    return acc


def _chunk_worker(args: tuple) -> dict[tuple[int, ...], int]:
    k, n, R, mode_value, reduction_value, lo, hi = args
    return _accumulate_range(
        k, n, R, TableMode(mode_value), Reduction(reduction_value), lo, hi
    )


def oracle_moment(
    k: int,
    n: int,
    mode: TableMode = TableMode.PLAIN,
    reduction: Optional[Reduction] = None,
    budget: Optional[int] = None,
    workers: int = 1,
    max_order: Optional[int] = None,
    progress: Optional[ProgressFn] = None,
) -> MomentPolynomial:
    """E[det(A)^k] by table enumeration; raw basis (plain) or central (marked).

    ``reduction=None`` picks the first-row-identity reduction for even k and
    the full sum for odd k.  Raises `BudgetExceededError` before doing any
    work if the enumeration would exceed ``budget`` weight evaluations.
    Results are independent of ``workers``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if n < 0:
        raise ValueError("n must be nonnegative")
    reduction = _resolve_reduction(k, reduction)
    R = max_order or max(DEFAULT_MAX_ORDER, k)
    if R < k:
        raise ValueError(f"max_order {R} cannot hold order-{k} column weights")
    budget = DEFAULT_BUDGET if budget is None else budget
    total = table_count(k, n, mode, reduction)
    if total > budget:
        raise BudgetExceededError(total, budget, f"table enumeration for k={k}, n={n}")

    first, options = _axes(k, n, mode, reduction)
    axis_len = len(options) if (reduction is Reduction.FIRST_ROW_IDENTITY and k >= 2) else len(first)

    if workers > 1 and total >= _PARALLEL_THRESHOLD and axis_len > 1:
        workers = min(workers, axis_len)
        bounds = [(i * axis_len) // workers for i in range(workers + 1)]
        jobs = [
            (k, n, R, mode.value, reduction.value, lo, hi)
            for lo, hi in zip(bounds, bounds[1:])
            if lo < hi
        ]
        acc: dict[tuple[int, ...], int] = {}
        done = 0
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for job, part in zip(jobs, pool.map(_chunk_worker, jobs)):
                for key, v in part.items():
                    acc[key] = acc.get(key, 0) + v
                done += (job[6] - job[5]) * (total // axis_len)
                if progress:
                    progress(min(done, total), total)
    else:
        acc = _accumulate_range(
            k, n, R, mode, reduction, 0, axis_len, progress, total
        )
    if progress:
        progress(total, total)

    scale = factorial(n) if reduction is Reduction.FIRST_ROW_IDENTITY else 1
    basis = Basis.RAW if mode is TableMode.PLAIN else Basis.CENTRAL
    return MomentPolynomial(
        basis, {exp: Fraction(scale * c) for exp, c in acc.items() if c}, R
    )
