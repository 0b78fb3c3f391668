"""Exact determinants, exhaustive averages, and Monte-Carlo estimation."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detmom.errors import BudgetExceededError
from detmom.formulas import gaussian_det_moment
from detmom.sampling import (
    DistKind,
    DistributionSpec,
    EstimateReport,
    exact_det,
    exact_moment_target,
    exact_moments,
    exhaustive_moment,
    mc_estimate,
)

RADEMACHER = DistributionSpec.rademacher()
NORMAL = DistributionSpec.std_normal()


def permanent_style_det(rows):
    """Cofactor-free reference determinant via the permutation sum."""
    n = len(rows)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inv = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        term = Fraction(-1 if inv % 2 else 1)
        for i in range(n):
            term *= Fraction(rows[i][perm[i]])
        total += term
    return total


# -- distributions ---------------------------------------------------------


def test_rademacher_moments_alternate():
    assert exact_moments(RADEMACHER, 6) == {
        1: 0, 2: 1, 3: 0, 4: 1, 5: 0, 6: 1
    }


def test_discrete_moments_worked_by_hand():
    dist = DistributionSpec.discrete(
        [Fraction(0), Fraction(1)], [Fraction(1, 4), Fraction(3, 4)]
    )
    assert exact_moments(dist, 3) == {1: Fraction(3, 4), 2: Fraction(3, 4),
                                      3: Fraction(3, 4)}


def test_normal_moments_are_double_factorials():
    assert exact_moments(NORMAL, 6) == {1: 0, 2: 1, 3: 0, 4: 3, 5: 0, 6: 15}


def test_probabilities_must_sum_to_one():
    with pytest.raises(ValueError):
        DistributionSpec.discrete([1, 2], [Fraction(1, 2), Fraction(1, 3)])


def test_values_must_be_distinct():
    with pytest.raises(ValueError):
        DistributionSpec.discrete([1, 1], [Fraction(1, 2), Fraction(1, 2)])


def test_finite_flag():
    assert RADEMACHER.finite
    assert not NORMAL.finite
    assert RADEMACHER.kind is DistKind.RADEMACHER


# -- exact determinants ----------------------------------------------------


def test_exact_det_worked_examples():
    assert exact_det([[1, 2], [3, 4]]) == -2
    assert exact_det([[Fraction(1, 2), Fraction(1, 3)],
                      [Fraction(1, 4), Fraction(1, 5)]]) == Fraction(1, 60)
    assert exact_det([[5]]) == 5
    assert exact_det([[1, 2], [2, 4]]) == 0


def test_exact_det_pivots_past_leading_zeros():
    assert exact_det([[0, 1], [1, 0]]) == -1
    assert exact_det([[0, 0, 1], [0, 1, 0], [1, 0, 0]]) == -1


small_int_matrices = st.integers(min_value=2, max_value=4).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(min_value=-9, max_value=9), min_size=n, max_size=n),
        min_size=n,
        max_size=n,
    )
)


@settings(max_examples=80)
@given(small_int_matrices)
def test_exact_det_matches_permutation_sum(rows):
    assert exact_det(rows) == permanent_style_det(rows)


def test_batch_determinants_match_scalar_path():
    rng = np.random.default_rng(5)
    from detmom.sampling import _batch_int_det, _int_det

    for n in (2, 3, 5):
        mats = rng.integers(-20, 21, size=(40, n, n)).astype(np.int64)
        got = _batch_int_det(mats)
        want = [_int_det([list(map(int, row)) for row in m]) for m in mats]
        assert got == want


def test_batch_determinants_on_object_dtype():
    from detmom.sampling import _batch_int_det

    big = 10 ** 12
    mats = np.array(
        [[[big, 1], [1, big]], [[0, big], [big, 0]]], dtype=object
    )
    assert _batch_int_det(mats) == [big * big - 1, -big * big]


# -- exhaustive averages ---------------------------------------------------


def test_exhaustive_rademacher_values():
    assert exhaustive_moment(RADEMACHER, 2, 2) == 2
    assert exhaustive_moment(RADEMACHER, 4, 2) == 8
    assert exhaustive_moment(RADEMACHER, 4, 3) == 96
    assert exhaustive_moment(RADEMACHER, 6, 2) == 32


def test_exhaustive_respects_probabilities():
    # Entries -1 w.p. 2/3 and 2 w.p. 1/3 have mean 0 and variance 2, so
    # E[det^2] for n = 2 is 2 * m2^2 = 8.
    dist = DistributionSpec.discrete(
        [Fraction(-1), Fraction(2)], [Fraction(2, 3), Fraction(1, 3)]
    )
    assert exhaustive_moment(dist, 2, 2) == 8


def test_exhaustive_fractional_support():
    dist = DistributionSpec.discrete(
        [Fraction(-1, 2), Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 2)]
    )
    # Scaling Rademacher entries by 1/2 scales det^2 for n = 2 by (1/2)^4.
    assert exhaustive_moment(dist, 2, 2) == Fraction(2, 16)


def test_exhaustive_degenerate_support():
    dist = DistributionSpec.discrete([Fraction(3)], [Fraction(1)])
    assert exhaustive_moment(dist, 2, 2) == 0
    assert exhaustive_moment(dist, 2, 1) == 9


def test_exhaustive_needs_finite_support():
    with pytest.raises(ValueError):
        exhaustive_moment(NORMAL, 2, 2)


def test_exhaustive_budget_refusal():
    with pytest.raises(BudgetExceededError):
        exhaustive_moment(RADEMACHER, 2, 4, budget=100)


def test_exhaustive_agrees_with_symbolic_targets():
    for k, n in ((1, 1), (2, 2), (2, 3), (4, 2), (6, 2)):
        target = exact_moment_target(RADEMACHER, k, n)
        assert target is not None
        assert exhaustive_moment(RADEMACHER, k, n) == target


# -- symbolic targets ------------------------------------------------------


def test_targets_worked_by_hand():
    assert exact_moment_target(RADEMACHER, 2, 3) == 6
    assert exact_moment_target(RADEMACHER, 4, 3) == 96
    assert exact_moment_target(NORMAL, 6, 2) == 720
    assert exact_moment_target(NORMAL, 8, 3) == gaussian_det_moment(8, 3)


def test_targets_unknown_cases_return_none():
    # Odd k beyond the mean, and k = 6 with a nonzero mean, have no stored
    # closed form.
    lopsided = DistributionSpec.discrete(
        [Fraction(0), Fraction(1)], [Fraction(1, 2), Fraction(1, 2)]
    )
    assert exact_moment_target(RADEMACHER, 3, 2) is None
    assert exact_moment_target(lopsided, 6, 2) is None
    assert exact_moment_target(lopsided, 4, 2) is not None


def test_first_power_target_is_determinant_of_the_mean_matrix():
    lopsided = DistributionSpec.discrete(
        [Fraction(0), Fraction(1)], [Fraction(1, 2), Fraction(1, 2)]
    )
    assert exact_moment_target(lopsided, 1, 1) == Fraction(1, 2)
    assert exact_moment_target(lopsided, 1, 3) == 0


# -- Monte-Carlo -----------------------------------------------------------


def test_mc_is_reproducible_and_worker_independent():
    a = mc_estimate(RADEMACHER, 2, 2, samples=3000, seed=11)
    b = mc_estimate(RADEMACHER, 2, 2, samples=3000, seed=11)
    c = mc_estimate(RADEMACHER, 2, 2, samples=3000, seed=11, workers=3)
    assert a.estimate == b.estimate == c.estimate
    assert a.std_error == c.std_error


def test_mc_seed_changes_the_draw():
    a = mc_estimate(RADEMACHER, 2, 3, samples=2000, seed=0)
    b = mc_estimate(RADEMACHER, 2, 3, samples=2000, seed=1)
    assert a.estimate != b.estimate


def test_mc_normal_is_reproducible_and_worker_independent():
    a = mc_estimate(NORMAL, 2, 2, samples=3000, seed=4)
    b = mc_estimate(NORMAL, 2, 2, samples=3000, seed=4, workers=2)
    assert a.estimate == b.estimate


def test_mc_lands_near_known_targets():
    for dist, k, n, target in (
        (RADEMACHER, 2, 2, 2),
        (RADEMACHER, 4, 2, 8),
        (NORMAL, 2, 2, 2),
    ):
        report = mc_estimate(dist, k, n, samples=20_000, seed=31)
        assert report.exact_target == target
        assert report.within(5.0) is True


def test_mc_degenerate_support_has_zero_error():
    dist = DistributionSpec.discrete([Fraction(2)], [Fraction(1)])
    report = mc_estimate(dist, 2, 2, samples=500, seed=0)
    assert report.estimate == 0.0
    assert report.std_error == 0.0


def test_report_within_is_none_without_target():
    report = EstimateReport(
        estimate=1.0, std_error=0.1, samples=10, seed=0, exact_target=None
    )
    assert report.within(5.0) is None


def test_report_json_shape():
    report = mc_estimate(RADEMACHER, 2, 2, samples=1000, seed=3)
    data = report.to_json_dict()
    assert set(data) == {"estimate", "std_error", "samples", "seed", "exact_target"}
    assert data["samples"] == 1000
    assert data["exact_target"] == "2"
    no_target = EstimateReport(1.0, 0.1, 10, 0, None).to_json_dict()
    assert "exact_target" not in no_target
