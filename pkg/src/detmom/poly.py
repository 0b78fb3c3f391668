"""Exact multivariate polynomials in the moments of a matrix-entry distribution.

Determinant moments E[det(A)^k] of an n x n matrix with i.i.d. entries are
polynomials with integer coefficients in the entry moments.  Two bases are
supported:

* RAW     -- symbols m_r = E[X^r] for r >= 1,
* CENTRAL -- symbols m_1 (the mean) and mu_r = E[(X - m_1)^r] for r >= 2.

mu_1 is identically zero and is never represented.

A polynomial stores a mapping from dense exponent vectors to nonzero rational
coefficients.  Exponent vectors have fixed length ``max_order + 1``: slot 0
holds the power of the mean m_1, slot r (2 <= r <= max_order) the power of the
order-r symbol of the basis, and slot 1 is always zero.  The grading weight of
a monomial is ``exp[0] + sum(r * exp[r] for r >= 2)``; E[det(A)^k] is
homogeneous of weight k*n in this grading.

Coefficients are `fractions.Fraction`, which keeps every value reduced with a
positive denominator and a unique zero, so all arithmetic here is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Mapping, Union

from .errors import BasisMismatchError, MissingMomentError, OrderCapacityError

DEFAULT_MAX_ORDER = 8

Rational = Union[int, Fraction]
ExpVector = tuple[int, ...]


class Basis(Enum):
    RAW = "raw"
    CENTRAL = "central"


class SymbolKind(Enum):
    RAW = "raw"
    CENTRAL = "central"
    MEAN = "mean"


@dataclass(frozen=True)
class MomentSymbol:
    """A single moment symbol: m_r, mu_r, or the mean m_1."""

    kind: SymbolKind
    order: int

    def __post_init__(self) -> None:
        if self.kind is SymbolKind.MEAN and self.order != 1:
            raise ValueError("the mean symbol has order 1")
        if self.kind is SymbolKind.CENTRAL and self.order < 2:
            raise ValueError("central symbols start at order 2 (mu_1 is zero)")
        if self.kind is SymbolKind.RAW and self.order < 1:
            raise ValueError("raw symbols start at order 1")

    @property
    def slot(self) -> int:
        """Index of this symbol in a dense exponent vector."""
        return 0 if self.order == 1 else self.order

    @property
    def basis(self) -> Basis:
        # The mean is legal in both bases; report it as CENTRAL-compatible
        # where it matters (the polynomial builders check compatibility).
        return Basis.RAW if self.kind is SymbolKind.RAW else Basis.CENTRAL


def _weight(exp: ExpVector) -> int:
    return exp[0] + sum(r * e for r, e in enumerate(exp) if r >= 2 and e)


def _sort_key(exp: ExpVector) -> tuple[int, ExpVector]:
    # Canonical term order: grading weight first, then exponents compared from
    # the highest-order symbol down; terms are listed in descending key order.
    return (_weight(exp), tuple(reversed(exp)))


class MomentPolynomial:
    """Immutable exact polynomial in moment symbols of a fixed basis."""

    __slots__ = ("_basis", "_max_order", "_terms")

    def __init__(
        self,
        basis: Basis,
        terms: Mapping[ExpVector, Rational] | Iterable[tuple[ExpVector, Rational]],
        max_order: int = DEFAULT_MAX_ORDER,
    ):
        if max_order < 2:
            raise OrderCapacityError("max_order must be at least 2")
        width = max_order + 1
        clean: dict[ExpVector, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, coef in items:
            exp = tuple(exp)
            if len(exp) != width:
                raise OrderCapacityError(
                    f"exponent vector has length {len(exp)}, expected {width}"
                )
            if any(e < 0 for e in exp):
                raise ValueError("negative exponent")
            if len(exp) > 1 and exp[1] != 0:
                raise ValueError("slot 1 is unused (order-1 symbols live in slot 0)")
            c = Fraction(coef)
            if c == 0:
                continue
            clean[exp] = clean.get(exp, Fraction(0)) + c
        self._basis = basis
        self._max_order = max_order
        self._terms = {e: c for e, c in clean.items() if c != 0}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, basis: Basis, max_order: int = DEFAULT_MAX_ORDER) -> "MomentPolynomial":
        return cls(basis, {}, max_order)

    @classmethod
    def constant(
        cls, value: Rational, basis: Basis, max_order: int = DEFAULT_MAX_ORDER
    ) -> "MomentPolynomial":
        exp = (0,) * (max_order + 1)
        return cls(basis, {exp: Fraction(value)}, max_order)

    @classmethod
    def monomial(
        cls,
        coef: Rational,
        powers: Mapping[int, int],
        basis: Basis,
        max_order: int = DEFAULT_MAX_ORDER,
    ) -> "MomentPolynomial":
        """Build ``coef * prod(symbol_r ** powers[r])``, keys are symbol orders."""
        exp = [0] * (max_order + 1)
        for order, e in powers.items():
            if order < 1:
                raise ValueError("symbol orders start at 1")
            if order > max_order:
                raise OrderCapacityError(
                    f"symbol of order {order} exceeds max_order {max_order}"
                )
            exp[0 if order == 1 else order] += e
        return cls(basis, {tuple(exp): Fraction(coef)}, max_order)

    # -- basic state -------------------------------------------------------

    @property
    def basis(self) -> Basis:
        return self._basis

    @property
    def max_order(self) -> int:
        return self._max_order

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def terms(self) -> Iterator[tuple[ExpVector, Fraction]]:
        """Terms in canonical order (descending grading weight, then lex)."""
        for exp in sorted(self._terms, key=_sort_key, reverse=True):
            yield exp, self._terms[exp]

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * (self._max_order + 1), Fraction(0))

    def _trimmed(self) -> frozenset[tuple[ExpVector, Fraction]]:
        # Strip trailing zero slots so polynomials agree across max_order.
        out = []
        for exp, coef in self._terms.items():
            last = 0
            for i, e in enumerate(exp):
                if e:
                    last = i
            out.append((exp[: last + 1], coef))
        return frozenset(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MomentPolynomial):
            return NotImplemented
        return self._basis is other._basis and self._trimmed() == other._trimmed()

    def __hash__(self) -> int:
        return hash((self._basis, self._trimmed()))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other: object) -> "MomentPolynomial | None":
        if isinstance(other, MomentPolynomial):
            if other._basis is not self._basis:
                raise BasisMismatchError(
                    f"cannot combine {self._basis.value} and {other._basis.value} polynomials"
                )
            if other._max_order != self._max_order:
                raise OrderCapacityError(
                    "cannot combine polynomials with different max_order "
                    f"({self._max_order} vs {other._max_order})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return MomentPolynomial.constant(other, self._basis, self._max_order)
        return None

    def __add__(self, other: object) -> "MomentPolynomial":
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        out = dict(self._terms)
        for exp, coef in p._terms.items():
            out[exp] = out.get(exp, Fraction(0)) + coef
        return MomentPolynomial(self._basis, out, self._max_order)

    __radd__ = __add__

    def __neg__(self) -> "MomentPolynomial":
        return MomentPolynomial(
            self._basis, {e: -c for e, c in self._terms.items()}, self._max_order
        )

    def __sub__(self, other: object) -> "MomentPolynomial":
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        return self + (-p)

    def __rsub__(self, other: object) -> "MomentPolynomial":
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        return p + (-self)

    def __mul__(self, other: object) -> "MomentPolynomial":
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        out: dict[ExpVector, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in p._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prior = out.get(e)
                out[e] = c1 * c2 if prior is None else prior + c1 * c2
        return MomentPolynomial(self._basis, out, self._max_order)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "MomentPolynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers need a nonnegative integer exponent")
        result = MomentPolynomial.constant(1, self._basis, self._max_order)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    # -- structure ---------------------------------------------------------

    def grading_weights(self) -> set[int]:
        """Set of grading weights of the monomials (empty for the zero polynomial)."""
        return {_weight(exp) for exp in self._terms}

    def negate_entries(self) -> "MomentPolynomial":
        """Image under X -> -X, i.e. every order-r symbol picks up (-1)^r.

        A monomial of grading weight w is multiplied by (-1)^w, so a
        polynomial is invariant iff all its weights are even.
        """
        return MomentPolynomial(
            self._basis,
            {e: c if _weight(e) % 2 == 0 else -c for e, c in self._terms.items()},
            self._max_order,
        )

    def scale_entries(self, c: Rational) -> "MomentPolynomial":
        """Image under X -> c*X: each monomial of weight w gains a factor c^w."""
        c = Fraction(c)
        return MomentPolynomial(
            self._basis,
            {e: coef * c ** _weight(e) for e, coef in self._terms.items()},
            self._max_order,
        )

    def substitute(self, order: int, value: Rational) -> "MomentPolynomial":
        """Replace the order-``order`` symbol by a rational constant."""
        if order < 1 or order > self._max_order:
            raise OrderCapacityError(f"no symbol of order {order}")
        slot = 0 if order == 1 else order
        value = Fraction(value)
        out: dict[ExpVector, Fraction] = {}
        for exp, coef in self._terms.items():
            e = list(exp)
            power = e[slot]
            e[slot] = 0
            key = tuple(e)
            add = coef * value**power
            out[key] = out.get(key, Fraction(0)) + add
        return MomentPolynomial(self._basis, out, self._max_order)

    def evaluate(self, moments: Mapping[int, Rational], mean: Rational) -> Fraction:
        """Exact value at the given moment assignment.

        ``moments`` maps symbol order (>= 2) to a rational; ``mean`` supplies
        m_1.  Every symbol occurring in the polynomial must be covered.
        """
        total = Fraction(0)
        mean = Fraction(mean)
        for exp, coef in self._terms.items():
            val = coef
            if exp[0]:
                val *= mean ** exp[0]
            for r in range(2, len(exp)):
                e = exp[r]
                if not e:
                    continue
                if r not in moments:
                    raise MissingMomentError(
                        f"no value supplied for the order-{r} moment"
                    )
                val *= Fraction(moments[r]) ** e
            total += val
        return total

    # -- presentation ------------------------------------------------------

    def _symbol_name(self, slot: int) -> str:
        if slot == 0:
            return "m1"
        if self._basis is Basis.RAW:
            return f"m{slot}"
        return f"mu{slot}"

    def to_text(self) -> str:
        """Canonical human-readable form, e.g. ``2*m4^2 - 8*m1^2*m3^2 + 6*m2^4``."""
        if not self._terms:
            return "0"
        chunks: list[str] = []
        for i, (exp, coef) in enumerate(self.terms()):
            factors = []
            for slot, e in enumerate(exp):
                if not e or slot == 1:
                    continue
                name = self._symbol_name(slot)
                factors.append(name if e == 1 else f"{name}^{e}")
            mag = abs(coef)
            if mag != 1 or not factors:
                factors.insert(0, str(mag))
            body = "*".join(factors)
            if i == 0:
                chunks.append(body if coef > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if coef > 0 else f"- {body}")
        return " ".join(chunks)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"MomentPolynomial({self.to_text()!r}, basis={self._basis.value})"

    def to_json_dict(self) -> dict:
        return {
            "basis": self._basis.value,
            "max_order": self._max_order,
            "terms": [
                {
                    "coef": [str(c.numerator), str(c.denominator)],
                    "exp": list(exp),
                }
                for exp, c in self.terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "MomentPolynomial":
        basis = Basis(data["basis"])
        max_order = int(data["max_order"])
        terms = []
        for t in data["terms"]:
            num, den = (int(s) for s in t["coef"])
            terms.append((tuple(int(e) for e in t["exp"]), Fraction(num, den)))
        return cls(basis, terms, max_order)


# -- symbol builders -------------------------------------------------------


def raw_symbol(r: int, max_order: int = DEFAULT_MAX_ORDER) -> MomentPolynomial:
    """The raw moment m_r as a polynomial (r = 1 gives the mean)."""
    MomentSymbol(SymbolKind.RAW if r != 1 else SymbolKind.MEAN, r)
    return MomentPolynomial.monomial(1, {r: 1}, Basis.RAW, max_order)


def central_symbol(r: int, max_order: int = DEFAULT_MAX_ORDER) -> MomentPolynomial:
    """The central moment mu_r (r >= 2) as a polynomial."""
    MomentSymbol(SymbolKind.CENTRAL, r)
    return MomentPolynomial.monomial(1, {r: 1}, Basis.CENTRAL, max_order)


def central_mean(max_order: int = DEFAULT_MAX_ORDER) -> MomentPolynomial:
    """The mean m_1 tagged as a central-basis polynomial."""
    return MomentPolynomial.monomial(1, {1: 1}, Basis.CENTRAL, max_order)


# -- basis conversion ------------------------------------------------------


@lru_cache(maxsize=None)
def _central_in_raw(r: int, max_order: int) -> MomentPolynomial:
    # mu_r = sum_j C(r, j) m_j (-m_1)^(r-j), with m_0 = 1.
    m1 = raw_symbol(1, max_order)
    total = MomentPolynomial.zero(Basis.RAW, max_order)
    for j in range(r + 1):
        base = (
            MomentPolynomial.constant(1, Basis.RAW, max_order)
            if j == 0
            else raw_symbol(j, max_order)
        )
        total = total + comb(r, j) * (-1) ** (r - j) * base * m1 ** (r - j)
    return total


@lru_cache(maxsize=None)
def _raw_in_central(r: int, max_order: int) -> MomentPolynomial:
    # m_r = sum_j C(r, j) mu_j m_1^(r-j), with mu_0 = 1 and mu_1 = 0.
    m1 = central_mean(max_order)
    total = MomentPolynomial.zero(Basis.CENTRAL, max_order)
    for j in range(r + 1):
        if j == 1:
            continue
        base = (
            MomentPolynomial.constant(1, Basis.CENTRAL, max_order)
            if j == 0
            else central_symbol(j, max_order)
        )
        total = total + comb(r, j) * base * m1 ** (r - j)
    return total


def _convert(p: MomentPolynomial, target: Basis) -> MomentPolynomial:
    expand = _central_in_raw if target is Basis.RAW else _raw_in_central
    R = p.max_order
    total = MomentPolynomial.zero(target, R)
    mean = raw_symbol(1, R) if target is Basis.RAW else central_mean(R)
    for exp, coef in p.terms():
        term = MomentPolynomial.constant(coef, target, R) * mean ** exp[0]
        for r in range(2, len(exp)):
            if exp[r]:
                term = term * expand(r, R) ** exp[r]
        total = total + term
    return total


def central_to_raw(p: MomentPolynomial) -> MomentPolynomial:
    """Rewrite a central-basis polynomial in raw moments m_r."""
    if p.basis is not Basis.CENTRAL:
        raise BasisMismatchError("central_to_raw expects a central-basis polynomial")
    return _convert(p, Basis.RAW)


def raw_to_central(p: MomentPolynomial) -> MomentPolynomial:
    """Rewrite a raw-basis polynomial in the mean and central moments mu_r."""
    if p.basis is not Basis.RAW:
        raise BasisMismatchError("raw_to_central expects a raw-basis polynomial")
    return _convert(p, Basis.CENTRAL)
