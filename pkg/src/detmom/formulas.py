"""Closed forms and generating functions for determinant moments.

``det_moment_k(n)`` functions return E[det(A)^k] for an n x n matrix with
i.i.d. entries as an exact `MomentPolynomial`; the ``*_egf`` variants return
the whole generating function sum_n f_k(n) t^n / n!^2 truncated at a given
order.  Conventions:

* k = 2: raw basis, any mean.
* k = 4: central basis (mean m_1 and mu_2, mu_3, mu_4), any mean.
* k = 6: raw basis, valid only when the entries are centered (m_1 = 0);
  callers must substitute m_1 = 0 themselves when comparing against
  general-mean quantities.

``gaussian_det_moment(k, n)`` evaluates the standard-normal case for any even
k directly as a product of factorial ratios.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .poly import (
    DEFAULT_MAX_ORDER,
    Basis,
    MomentPolynomial,
    central_mean,
    central_symbol,
    raw_symbol,
)
from .series import (
    Convention,
    TruncatedEGF,
    polynomial_in_t,
    t_times,
)

# -- k = 2 -----------------------------------------------------------------


@lru_cache(maxsize=None)
def second_moment(n: int, max_order: int = DEFAULT_MAX_ORDER) -> MomentPolynomial:
    """E[det(A)^2] = n! (m_2 + (n-1) m_1^2)(m_2 - m_1^2)^(n-1), raw basis."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return MomentPolynomial.constant(1, Basis.RAW, max_order)
    m1 = raw_symbol(1, max_order)
    m2 = raw_symbol(2, max_order)
    return factorial(n) * (m2 + (n - 1) * m1**2) * (m2 - m1**2) ** (n - 1)


@lru_cache(maxsize=None)
def second_moment_egf(
    order: int, max_order: int = DEFAULT_MAX_ORDER
) -> TruncatedEGF:
    """F_2(t) = (1 + m_1^2 t) exp((m_2 - m_1^2) t)."""
    m1 = raw_symbol(1, max_order)
    m2 = raw_symbol(2, max_order)
    growth = t_times(m2 - m1**2, order, Convention.F_CONVENTION).exp()
    return polynomial_in_t([1, m1**2], order, Convention.F_CONVENTION) * growth


# -- Gaussian entries, any even k ------------------------------------------


def gaussian_det_moment(k: int, n: int) -> Fraction:
    """E[det(A)^k] for standard normal entries: prod_j (n+2j)!/(2j)!, j < k/2."""
    if k < 2 or k % 2:
        raise ValueError("the Gaussian product form needs an even k >= 2")
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = Fraction(1)
    for j in range(k // 2):
        out *= Fraction(factorial(n + 2 * j), factorial(2 * j))
    return out


def gaussian_moment_table(up_to: int) -> dict[int, Fraction]:
    """Raw moments of N(0,1): (r-1)!! for even r, zero for odd r."""
    table: dict[int, Fraction] = {}
    for r in range(1, up_to + 1):
        if r % 2:
            table[r] = Fraction(0)
        else:
            v = 1
            for odd in range(1, r, 2):
                v *= odd
            table[r] = Fraction(v)
    return table


@lru_cache(maxsize=None)
def gaussian_sixth_egf(
    order: int,
    max_order: int = DEFAULT_MAX_ORDER,
    basis: Basis = Basis.RAW,
) -> TruncatedEGF:
    """N_6(t) = sum_n (n+1)(n+2)(n+4)!/48 t^n, the Gaussian sixth-moment series.

    Its coefficients are gaussian_det_moment(6, n)/n!^2, i.e. the k = 6
    specialization of the f-convention with all moment dependence evaluated.
    """
    coeffs = [
        MomentPolynomial.constant(
            Fraction((n + 1) * (n + 2) * factorial(n + 4), 48), basis, max_order
        )
        for n in range(order + 1)
    ]
    return TruncatedEGF(tuple(coeffs), Convention.F_CONVENTION)


# -- k = 4 -----------------------------------------------------------------


def _d_factor(w: int, c: int) -> int:
    # Table-count factor by number of doubly-marked columns w.
    if w == 0:
        return 2 + c
    if w == 1:
        return c * (2 + c)
    return c**3


@lru_cache(maxsize=None)
def fourth_moment(n: int, max_order: int = DEFAULT_MAX_ORDER) -> MomentPolynomial:
    """E[det(A)^4] in the central basis, any mean, as a finite triple sum."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    m1 = central_mean(max_order)
    mu2 = central_symbol(2, max_order)
    mu3 = central_symbol(3, max_order)
    mu4 = central_symbol(4, max_order)
    excess = mu4 - 3 * mu2**2
    excess_pow: dict[int, MomentPolynomial] = {
        0: MomentPolynomial.constant(1, Basis.CENTRAL, max_order)
    }
    for j in range(1, n + 1):
        excess_pow[j] = excess_pow[j - 1] * excess

    total = MomentPolynomial.zero(Basis.CENTRAL, max_order)
    for w in range(3):
        for s in range(4 - 2 * w + 1):
            for c in range(n - s + 1):
                d = _d_factor(w, c)
                if d == 0:
                    continue
                # 2c - w < 0 only happens alongside d = 0 (c = 0, w > 0).
                coef = Fraction(
                    comb(4 - 2 * w, s) * (1 + c) * d,
                    factorial(n - c - s) * factorial(2 - w) * factorial(w),
                )
                total = total + (
                    coef
                    * m1 ** (s + 2 * w)
                    * mu2 ** (2 * c - w)
                    * mu3**s
                    * excess_pow[n - c - s]
                )
    return factorial(n) ** 2 * total


@lru_cache(maxsize=None)
def fourth_moment_egf(
    order: int, max_order: int = DEFAULT_MAX_ORDER
) -> TruncatedEGF:
    """F_4(t) in the central basis, any mean."""
    conv = Convention.F_CONVENTION
    m1 = central_mean(max_order)
    mu2 = central_symbol(2, max_order)
    mu3 = central_symbol(3, max_order)
    mu4 = central_symbol(4, max_order)

    growth = t_times(mu4 - 3 * mu2**2, order, conv).exp()
    seq = t_times(mu2**2, order, conv).geometric()  # 1/(1 - mu2^2 t)
    marked_pair = polynomial_in_t([1, m1 * mu3], order, conv)  # 1 + m1 mu3 t

    bracket = marked_pair.pow(4)
    bracket = bracket + 6 * m1**2 * mu2 * t_times(
        MomentPolynomial.constant(1, Basis.CENTRAL, max_order), order, conv
    ) * marked_pair.pow(2) * seq
    bracket = bracket + m1**4 * polynomial_in_t(
        [0, 1, 7 * mu2**2, 4 * mu2**4], order, conv,
        basis=Basis.CENTRAL, max_order=max_order,
    ) * seq.pow(2)
    return growth * seq.pow(3) * bracket


@lru_cache(maxsize=None)
def fourth_moment_zero_mean(
    n: int, max_order: int = DEFAULT_MAX_ORDER
) -> MomentPolynomial:
    """E[det(A)^4] for centered entries, raw basis in m_2 and m_4."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    m2 = raw_symbol(2, max_order)
    m4 = raw_symbol(4, max_order)
    excess = m4 - 3 * m2**2
    total = MomentPolynomial.zero(Basis.RAW, max_order)
    power = MomentPolynomial.constant(1, Basis.RAW, max_order)
    for j in range(n + 1):
        total = total + (
            Fraction(comb(n - j + 2, 2), factorial(j)) * power * m2 ** (2 * (n - j))
        )
        power = power * excess
    return factorial(n) ** 2 * total


class MarkClass(Enum):
    """Mark-count classes of the k = 4 table decomposition at unit variance."""

    ZERO = "mark0"
    TWO = "mark2"
    FOUR_ONE_COL = "mark4-single"
    FOUR_TWO_COLS = "mark4-split"
    FOUR = "mark4"


@lru_cache(maxsize=None)
def mark_class_egf(
    which: MarkClass, order: int, max_order: int = DEFAULT_MAX_ORDER
) -> TruncatedEGF:
    """Generating function of one mark class of F_4 with mu_2 set to 1.

    The classes split tables by how many entries are replaced by their mean:
    none, two (in one column), or four, the last subdivided by whether the
    four marks occupy one column pair or two separate columns.
    """
    conv = Convention.F_CONVENTION
    m1 = central_mean(max_order)
    mu4 = central_symbol(4, max_order)
    one = MomentPolynomial.constant(1, Basis.CENTRAL, max_order)

    growth = t_times(mu4 - 3 * one, order, conv).exp()
    seq = t_times(one, order, conv).geometric()  # 1/(1 - t)

    if which is MarkClass.ZERO:
        return growth * seq.pow(3)
    if which is MarkClass.TWO:
        return 6 * m1**2 * t_times(one, order, conv) * growth * seq.pow(4)
    if which is MarkClass.FOUR_ONE_COL:
        return m1**4 * polynomial_in_t(
            [0, 1, 2], order, conv, basis=Basis.CENTRAL, max_order=max_order
        ) * growth * seq.pow(4)
    if which is MarkClass.FOUR_TWO_COLS:
        return 6 * m1**4 * polynomial_in_t(
            [0, 0, 1, 1], order, conv, basis=Basis.CENTRAL, max_order=max_order
        ) * growth * seq.pow(5)
    # FOUR = FOUR_ONE_COL + FOUR_TWO_COLS
    return mark_class_egf(MarkClass.FOUR_ONE_COL, order, max_order) + mark_class_egf(
        MarkClass.FOUR_TWO_COLS, order, max_order
    )


# -- k = 6, centered entries -----------------------------------------------


def _q6(max_order: int) -> MomentPolynomial:
    m2, m3, m4, m6 = (raw_symbol(r, max_order) for r in (2, 3, 4, 6))
    return m6 - 10 * m3**2 - 15 * m4 * m2 + 30 * m2**3


def _q4(max_order: int) -> MomentPolynomial:
    m2, m4 = raw_symbol(2, max_order), raw_symbol(4, max_order)
    return m4 * m2 - 3 * m2**3


@lru_cache(maxsize=None)
def sixth_moment_zero_mean(
    n: int, max_order: int = DEFAULT_MAX_ORDER
) -> MomentPolynomial:
    """E[det(A)^6] for centered entries, raw basis in m_2, m_3, m_4, m_6."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    m2 = raw_symbol(2, max_order)
    m3 = raw_symbol(3, max_order)
    q6, q4 = _q6(max_order), _q4(max_order)

    def powers(p: MomentPolynomial, top: int) -> list[MomentPolynomial]:
        out = [MomentPolynomial.constant(1, Basis.RAW, max_order)]
        for _ in range(top):
            out.append(out[-1] * p)
        return out

    q6_pow = powers(q6, n)
    q4_pow = powers(q4, n)

    total = MomentPolynomial.zero(Basis.RAW, max_order)
    for j in range(n + 1):
        for i in range(j + 1):
            for c in range(n - j + 1):
                coef = Fraction(
                    (1 + i) * (2 + i) * factorial(4 + i) * comb(10, c)
                    * comb(14 + j + 2 * i, j - i),
                    48 * factorial(n - j - c),
                )
                total = total + (
                    coef
                    * q6_pow[n - j - c]
                    * q4_pow[j - i]
                    * m3 ** (2 * c)
                    * m2 ** (3 * i)
                )
    return factorial(n) ** 2 * total


@lru_cache(maxsize=None)
def sixth_moment_zero_mean_egf(
    order: int, max_order: int = DEFAULT_MAX_ORDER
) -> TruncatedEGF:
    """F_6(t) for centered entries, assembled from its factored form.

    The series is (1 + m_3^2 t)^10 * exp(q_6 t) / (1 - q_4 t)^15 composed
    with the Gaussian sixth-moment series at m_2^3 t / (1 - q_4 t)^3, where
    q_6 and q_4 are the degree-6 combinations appearing in the exponent and
    the pole.
    """
    conv = Convention.F_CONVENTION
    m2 = raw_symbol(2, max_order)
    m3 = raw_symbol(3, max_order)
    q6, q4 = _q6(max_order), _q4(max_order)

    skew = polynomial_in_t([1, m3**2], order, conv).pow(10)
    growth = t_times(q6, order, conv).exp()
    seq = t_times(q4, order, conv).geometric()  # 1/(1 - q4 t)
    inner = t_times(m2**3, order, conv) * seq.pow(3)
    gaussian_part = gaussian_sixth_egf(order, max_order, Basis.RAW).compose(inner)
    return skew * growth * seq.pow(15) * gaussian_part
