"""Sparse Laurent polynomials with integer coefficients in r variables."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from ..errors import RankMismatch

Exponent = tuple[int, ...]

NEG_INF = float("-inf")


def dot(u: Sequence[int], v: Sequence[int]):
    return sum(a * b for a, b in zip(u, v))


class LaurentPolynomial:
    """Immutable map from exponent vectors in Z^r to nonzero integers.

    Iteration is in lexicographic order of exponents so that every
    printed or serialized form is deterministic.
    """

    __slots__ = ("rank", "_terms", "_hash")

    def __init__(self, rank: int, terms: Mapping[Exponent, int] | Iterable[tuple[Exponent, int]] = ()):
        if rank < 1:
            raise ValueError("rank must be positive")
        acc: dict[Exponent, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != rank:
                raise RankMismatch(f"exponent {exp} has length {len(exp)}, expected {rank}")
            if not isinstance(c, int):
                raise TypeError(f"coefficient {c!r} is not an integer")
            acc[exp] = acc.get(exp, 0) + c
        self.rank = rank
        self._terms = {e: acc[e] for e in sorted(acc) if acc[e] != 0}
        self._hash = None

    # constructors

    @classmethod
    def zero(cls, rank: int) -> LaurentPolynomial:
        return cls(rank)

    @classmethod
    def one(cls, rank: int) -> LaurentPolynomial:
        return cls(rank, {(0,) * rank: 1})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: int = 1) -> LaurentPolynomial:
        exponent = tuple(exponent)
        return cls(len(exponent), {exponent: coeff})

    @classmethod
    def univariate(cls, coeffs: Mapping[int, int]) -> LaurentPolynomial:
        return cls(1, {(e,): c for e, c in coeffs.items()})

    # container protocol

    def __iter__(self) -> Iterator[tuple[Exponent, int]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def support(self) -> list[Exponent]:
        return list(self._terms)

    def coeff(self, exponent: Sequence[int] | int) -> int:
        if isinstance(exponent, int):
            exponent = (exponent,)
        exponent = tuple(exponent)
        if len(exponent) != self.rank:
            raise RankMismatch(f"exponent {exponent} does not match rank {self.rank}")
        return self._terms.get(exponent, 0)

    def support_max(self, u: Sequence[int] | int = 1):
        """Largest value of <u, rho> over the support; -inf for zero."""
        if isinstance(u, int):
            u = (u,)
        if len(u) != self.rank:
            raise RankMismatch(f"direction {tuple(u)} does not match rank {self.rank}")
        if not self._terms:
            return NEG_INF
        return max(dot(u, e) for e in self._terms)

    def support_min(self, u: Sequence[int] | int = 1):
        if isinstance(u, int):
            u = (u,)
        if not self._terms:
            return -NEG_INF
        return min(dot(u, e) for e in self._terms)

    # arithmetic

    def _check(self, other: LaurentPolynomial) -> None:
        if other.rank != self.rank:
            raise RankMismatch(f"rank {self.rank} vs rank {other.rank}")

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return LaurentPolynomial(self.rank, {(0,) * self.rank: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + c
        return LaurentPolynomial(self.rank, acc)

    __radd__ = __add__

    def __neg__(self) -> LaurentPolynomial:
        return LaurentPolynomial(self.rank, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return LaurentPolynomial(self.rank, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPolynomial:
        if k < 0:
            if len(self._terms) != 1:
                raise ArithmeticError("only monomials have Laurent inverses")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise ArithmeticError("monomial with non-unit coefficient is not invertible")
            return LaurentPolynomial(self.rank, {tuple(-x * (-k) for x in e): c ** (-k)})
        result = LaurentPolynomial.one(self.rank)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, exponent: Sequence[int]) -> LaurentPolynomial:
        """Multiply by the monomial t^exponent."""
        exponent = tuple(exponent)
        if len(exponent) != self.rank:
            raise RankMismatch(f"shift {exponent} does not match rank {self.rank}")
        return LaurentPolynomial(
            self.rank, {tuple(a + b for a, b in zip(e, exponent)): c for e, c in self._terms.items()}
        )

    def mul_truncated(self, other: LaurentPolynomial, w: Sequence[int], max_degree: int) -> LaurentPolynomial:
        """Product keeping only terms with <w, rho> <= max_degree."""
        self._check(other)
        acc: dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            d1 = dot(w, e1)
            for e2, c2 in other._terms.items():
                if d1 + dot(w, e2) > max_degree:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return LaurentPolynomial(self.rank, acc)

    def truncate(self, w: Sequence[int], max_degree: int) -> LaurentPolynomial:
        return LaurentPolynomial(self.rank, {e: c for e, c in self._terms.items() if dot(w, e) <= max_degree})

    def specialize(self, u: Sequence[int]) -> LaurentPolynomial:
        """Substitute t_e = lambda^{u_e}; returns a univariate polynomial."""
        if len(u) != self.rank:
            raise RankMismatch(f"direction {tuple(u)} does not match rank {self.rank}")
        return LaurentPolynomial(1, [((dot(u, e),), c) for e, c in self._terms.items()])

    def substitute_inverse(self) -> LaurentPolynomial:
        """t -> t^{-1} in every variable."""
        return LaurentPolynomial(self.rank, {tuple(-x for x in e): c for e, c in self._terms.items()})

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a point with nonzero rational coordinates."""
        total = Fraction(0)
        for e, c in self._terms.items():
            term = Fraction(c)
            for x, k in zip(point, e):
                term *= Fraction(x) ** k
            total += term
        return total

    # comparison / display

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPolynomial(self.rank, {(0,) * self.rank: other})
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rank, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self.rank}, {self._terms!r})"

    def __str__(self) -> str:
        return self.format()

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        if names is None:
            names = ["z"] if self.rank == 1 else [f"t{i + 1}" for i in range(self.rank)]
        out = []
        for i, (e, c) in enumerate(self._terms.items()):
            factors = []
            for name, k in zip(names, e):
                if k == 1:
                    factors.append(name)
                elif k != 0:
                    factors.append(f"{name}^{k}")
            mono = "*".join(factors)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if i == 0:
                out.append(body if c > 0 else f"-{body}")
            else:
                out.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(out)

    def to_json(self) -> list[list]:
        return [[list(e), c] for e, c in self._terms.items()]
