"""Univariate rational functions whose numerator and denominator are Laurent polynomials."""

from __future__ import annotations

from fractions import Fraction

from ..errors import NotPolynomial, RankMismatch
from .laurent import LaurentPolynomial


def _as_dense(p: LaurentPolynomial) -> tuple[int, list[int]]:
    """(lowest exponent, coefficients from lowest to highest)."""
    exps = [e[0] for e, _ in p]
    lo, hi = min(exps), max(exps)
    dense = [0] * (hi - lo + 1)
    for (e,), c in p:
        dense[e - lo] = c
    return lo, dense


def divide_exact(num: LaurentPolynomial, den: LaurentPolynomial) -> LaurentPolynomial:
    """Exact quotient num/den of univariate Laurent polynomials.

    Raises NotPolynomial if the quotient is not a Laurent polynomial with
    integer coefficients.
    """
    if num.rank != 1 or den.rank != 1:
        raise RankMismatch("exact division is univariate only")
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    if not num:
        return LaurentPolynomial.zero(1)
    nlo, n = _as_dense(num)
    dlo, d = _as_dense(den)
    if len(n) < len(d):
        raise NotPolynomial("numerator has smaller span than denominator")
    # long division from the top, over the rationals
    rem = [Fraction(c) for c in n]
    lead = d[-1]
    q = [Fraction(0)] * (len(n) - len(d) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = rem[i + len(d) - 1] / lead
        q[i] = c
        if c:
            for j, dj in enumerate(d):
                rem[i + j] -= c * dj
    if any(rem):
        raise NotPolynomial("division leaves a nonzero remainder")
    if any(c.denominator != 1 for c in q):
        raise NotPolynomial("quotient has non-integer coefficients")
    shift = nlo - dlo
    return LaurentPolynomial(1, {(i + shift,): int(c) for i, c in enumerate(q) if c})


class RationalFunction:
    """numerator / denominator with the denominator normalized.

    Normal form: the denominator's lowest exponent is 0 and its leading
    coefficient is positive. No cancellation of common factors is attempted.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: LaurentPolynomial, denominator: LaurentPolynomial | None = None):
        if denominator is None:
            denominator = LaurentPolynomial.one(1)
        if numerator.rank != 1 or denominator.rank != 1:
            raise RankMismatch("rational functions are univariate")
        if not denominator:
            raise ZeroDivisionError("zero denominator")
        lo = denominator.support_min(1)
        if lo != 0:
            numerator = numerator.shift((-lo,))
            denominator = denominator.shift((-lo,))
        top = denominator.support_max(1)
        if denominator.coeff(top) < 0:
            numerator, denominator = -numerator, -denominator
        self.numerator = numerator
        self.denominator = denominator

    def __add__(self, other: RationalFunction) -> RationalFunction:
        if self.denominator == other.denominator:
            return RationalFunction(self.numerator + other.numerator, self.denominator)
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other: RationalFunction) -> RationalFunction:
        return self + (-other)

    def __mul__(self, other: RationalFunction) -> RationalFunction:
        return RationalFunction(self.numerator * other.numerator, self.denominator * other.denominator)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    __hash__ = None

    def to_laurent(self) -> LaurentPolynomial:
        return divide_exact(self.numerator, self.denominator)

    def __repr__(self) -> str:
        return f"({self.numerator}) / ({self.denominator})"
