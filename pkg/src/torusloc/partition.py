"""Sign partitions of fixed points and the partition-function counters N_p.

Three counting modes share one enumerator:

* ``circle``: rank-1 data, scalar equation, positive slots are A_p.
* ``polarized``: rank-r data projected by an integer polarizing vector u.
* ``eps``: rank-r vector equation for a feasible sign assignment.

In every mode the unknowns are rewritten so that each has a strictly
positive coefficient against a ranking functional, which bounds the search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from math import comb
from typing import Iterator, Mapping, Sequence, Union

from .errors import InfeasibleAssignment, ModeMismatch, NotPolarizing
from .exactalg import Feasible, dot, integral_direction, strict_feasibility
from .fpdata import FixedPoint, FixedPointSet, Weight


# polarizing vectors


def is_polarizing(weights: Sequence[Weight], u: Sequence) -> bool:
    return all(dot(u, w) != 0 for w in weights)


def candidate_vectors(rank: int, max_radius: int = 12) -> Iterator[tuple[int, ...]]:
    """Nonzero integer vectors by max-norm shell, each shell in descending lex order."""
    for radius in range(1, max_radius + 1):
        shell = [v for v in iproduct(range(radius, -radius - 1, -1), repeat=rank) if max(map(abs, v)) == radius]
        yield from shell


def polarizing_vectors(fps_or_weights, count: int = 1, max_radius: int = 12) -> list[tuple[int, ...]]:
    """The first ``count`` polarizing integer vectors in search order."""
    weights = fps_or_weights.all_weights() if isinstance(fps_or_weights, FixedPointSet) else list(fps_or_weights)
    rank = len(weights[0])
    found = []
    for v in candidate_vectors(rank, max_radius):
        if is_polarizing(weights, v):
            found.append(v)
            if len(found) == count:
                break
    return found


def find_polarizing(fps: FixedPointSet) -> tuple[int, ...]:
    found = polarizing_vectors(fps, 1)
    if not found:
        raise NotPolarizing("no polarizing vector within the search radius")
    return found[0]


# partitions


@dataclass(frozen=True)
class PolarizedPartition:
    """A_p, B_p and sigma_p for every point under a polarizing vector u."""

    u: tuple[Fraction, ...]
    A: Mapping[str, tuple[int, ...]]
    B: Mapping[str, tuple[int, ...]]
    sigma: Mapping[str, int]
    Q_plus: tuple[str, ...]
    Q_minus: tuple[str, ...]
    pairings: Mapping[str, tuple[Fraction, ...]]

    def same_partition(self, other: PolarizedPartition) -> bool:
        return (self.A, self.B, self.sigma, self.Q_plus, self.Q_minus) == (
            other.A,
            other.B,
            other.sigma,
            other.Q_plus,
            other.Q_minus,
        )

    @property
    def integral_u(self) -> tuple[int, ...]:
        return integral_direction(self.u)


def polarize(fps: FixedPointSet, u: Sequence) -> PolarizedPartition:
    """Split each point's weight slots by the sign of <u, alpha>.

    Slot indices are 0-based here; reports print them 1-based.
    """
    u = tuple(Fraction(x) for x in u)
    if len(u) != fps.rank:
        raise NotPolarizing(f"vector {u} has length {len(u)}, dataset rank is {fps.rank}")
    A, B, sigma, pair = {}, {}, {}, {}
    for p in fps.points:
        vals = tuple(dot(u, w) for w in p.weights)
        for j, a in enumerate(vals):
            if a == 0:
                raise NotPolarizing(
                    f"vector {_fmt(u)} is orthogonal to weight {j + 1} {p.weights[j]} at point {p.name!r}"
                )
        A[p.name] = tuple(j for j, a in enumerate(vals) if a > 0)
        B[p.name] = tuple(j for j, a in enumerate(vals) if a < 0)
        sigma[p.name] = -1 if len(B[p.name]) % 2 else 1
        pair[p.name] = vals
    plus = tuple(n for n in fps.names if sigma[n] == 1)
    minus = tuple(n for n in fps.names if sigma[n] == -1)
    return PolarizedPartition(u, A, B, sigma, plus, minus, pair)


def _fmt(u) -> str:
    return "(" + ",".join(str(x) for x in u) + ")"


@dataclass(frozen=True)
class SignAssignment:
    """eps(point, slot) in {+1, -1} with a certificate point of K(eps).

    A_p(eps) are the slots with eps = -1, B_p(eps) those with eps = +1, and
    sigma(p, eps) = (-1)^{#A_p(eps)}.
    """

    eps: Mapping[str, tuple[int, ...]]
    interior: tuple[Fraction, ...]
    A: Mapping[str, tuple[int, ...]]
    B: Mapping[str, tuple[int, ...]]
    sigma: Mapping[str, int]
    Q_plus: tuple[str, ...]
    Q_minus: tuple[str, ...]

    @property
    def ranking(self) -> tuple[int, ...]:
        """Integer functional w = -interior; every expansion step raises <w, .>."""
        return tuple(-x for x in integral_direction(self.interior))


def make_sign_assignment(fps: FixedPointSet, eps_map: Mapping[str, Sequence[int]]) -> SignAssignment:
    eps = {}
    for p in fps.points:
        if p.name not in eps_map:
            raise InfeasibleAssignment(f"sign assignment is missing point {p.name!r}")
        signs = tuple(int(s) for s in eps_map[p.name])
        if len(signs) != fps.half_dim or any(s not in (1, -1) for s in signs):
            raise InfeasibleAssignment(f"point {p.name!r} needs {fps.half_dim} signs in {{+1, -1}}, got {signs}")
        eps[p.name] = signs
    extra = set(eps_map) - set(fps.names)
    if extra:
        raise InfeasibleAssignment(f"sign assignment names unknown points {sorted(extra)}")
    system = [tuple(s * x for x in w) for p in fps.points for s, w in zip(eps[p.name], p.weights)]
    verdict = strict_feasibility(system)
    if not isinstance(verdict, Feasible):
        raise InfeasibleAssignment("the half-spaces selected by the sign assignment have empty intersection")
    A = {n: tuple(j for j, s in enumerate(eps[n]) if s == -1) for n in fps.names}
    B = {n: tuple(j for j, s in enumerate(eps[n]) if s == 1) for n in fps.names}
    sigma = {n: -1 if len(A[n]) % 2 else 1 for n in fps.names}
    plus = tuple(n for n in fps.names if sigma[n] == 1)
    minus = tuple(n for n in fps.names if sigma[n] == -1)
    return SignAssignment(eps, verdict.u, A, B, sigma, plus, minus)


def sign_assignment_from(fps: FixedPointSet, u0: Sequence[int]) -> SignAssignment:
    """eps(p, j) = sign <u0, alpha_pj> for a polarizing u0."""
    part = polarize(fps, u0)
    eps = {n: tuple(1 if a > 0 else -1 for a in part.pairings[n]) for n in fps.names}
    return make_sign_assignment(fps, eps)


def distinct_sign_assignments(fps: FixedPointSet, count: int = 2, max_radius: int = 12) -> list[SignAssignment]:
    """Sign assignments induced by the first polarizing vectors with distinct sign patterns."""
    out, seen = [], set()
    for v in candidate_vectors(fps.rank, max_radius):
        if not is_polarizing(fps.all_weights(), v):
            continue
        sa = sign_assignment_from(fps, v)
        key = tuple(sorted(sa.eps.items()))
        if key in seen:
            continue
        seen.add(key)
        out.append(sa)
        if len(out) == count:
            break
    return out


# counting

Mode = Union[str, PolarizedPartition, SignAssignment]


@dataclass(frozen=True)
class _Problem:
    """sum_j x_j * coeffs[j] == target with x_j >= lower[j], <w, coeffs[j]> > 0."""

    coeffs: tuple[tuple[int, ...], ...]
    lower: tuple[int, ...]
    target: tuple[int, ...]
    w: tuple[int, ...]
    n_a: int


def _problem(point: FixedPoint, l, mode: Mode) -> _Problem:
    if isinstance(mode, SignAssignment):
        if isinstance(l, int) or len(l) != len(point.moment):
            raise ModeMismatch("eps mode needs an integer vector l of the dataset rank")
        A, B = mode.A[point.name], mode.B[point.name]
        coeffs = tuple(point.weights[i] for i in A) + tuple(tuple(-x for x in point.weights[k]) for k in B)
        target = tuple(a - b for a, b in zip(l, point.moment))
        return _Problem(coeffs, (1,) * len(A) + (0,) * len(B), target, mode.ranking, len(A))
    if isinstance(mode, PolarizedPartition):
        if not isinstance(l, int):
            raise ModeMismatch("polarized mode needs an integer l")
        if any(x.denominator != 1 for x in mode.u):
            raise ModeMismatch("polarized counting needs an integer polarizing vector")
        u = tuple(int(x) for x in mode.u)
        vals = [dot(u, w) for w in point.weights]
        A, B = mode.A[point.name], mode.B[point.name]
        coeffs = tuple((vals[i],) for i in A) + tuple((-vals[k],) for k in B)
        return _Problem(coeffs, (1,) * len(A) + (0,) * len(B), (l - dot(u, point.moment),), (1,), len(A))
    if mode == "circle":
        if len(point.moment) != 1:
            raise ModeMismatch("circle mode needs rank-1 data")
        if not isinstance(l, int):
            raise ModeMismatch("circle mode needs an integer l")
        vals = [w[0] for w in point.weights]
        A = tuple(j for j, a in enumerate(vals) if a > 0)
        B = tuple(j for j, a in enumerate(vals) if a < 0)
        coeffs = tuple((vals[i],) for i in A) + tuple((-vals[k],) for k in B)
        return _Problem(coeffs, (1,) * len(A) + (0,) * len(B), (l - point.moment[0],), (1,), len(A))
    raise ModeMismatch(f"unknown counting mode {mode!r}")


def _reduced(prob: _Problem) -> tuple[int, ...]:
    target = list(prob.target)
    for c, lo in zip(prob.coeffs, prob.lower):
        for k in range(len(target)):
            target[k] -= lo * c[k]
    return tuple(target)


@lru_cache(maxsize=None)
def _count(coeffs: tuple[tuple[int, ...], ...], w: tuple[int, ...], target: tuple[int, ...]) -> int:
    if not coeffs:
        return int(not any(target))
    budget = dot(w, target)
    if budget < 0:
        return 0
    first, rest = coeffs[0], coeffs[1:]
    step = dot(w, first)
    if not rest:
        # the single remaining unknown is determined by the ranking functional
        if budget % step:
            return 0
        x = budget // step
        return int(all(t == x * c for t, c in zip(target, first)))
    total = 0
    for x in range(budget // step + 1):
        total += _count(rest, w, tuple(t - x * c for t, c in zip(target, first)))
    return total


def count_Np(point: FixedPoint, l, mode: Mode = "circle") -> int:
    """Number of solutions (m > 0 on A slots, n >= 0 on B slots) reaching l."""
    prob = _problem(point, l, mode)
    return _count(prob.coeffs, prob.w, _reduced(prob))


def solutions_Np(point: FixedPoint, l, mode: Mode = "circle") -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All solutions as (m, n) pairs, lexicographic on (m, n)."""
    prob = _problem(point, l, mode)
    coeffs, w = prob.coeffs, prob.w
    out: list[tuple[int, ...]] = []

    def walk(j: int, rem: tuple[int, ...], acc: list[int]) -> None:
        if j == len(coeffs):
            if not any(rem):
                out.append(tuple(acc))
            return
        budget = dot(w, rem)
        if budget < 0:
            return
        step = dot(w, coeffs[j])
        for x in range(budget // step + 1):
            acc.append(x)
            walk(j + 1, tuple(t - x * c for t, c in zip(rem, coeffs[j])), acc)
            acc.pop()

    walk(0, _reduced(prob), [])
    sols = []
    for xs in out:
        full = tuple(x + lo for x, lo in zip(xs, prob.lower))
        sols.append((full[: prob.n_a], full[prob.n_a :]))
    return sols


def clear_count_cache() -> None:
    _count.cache_clear()


# coefficients of tau^m / (1 - tau)^(m+1)


def kostant_C(sign: int, m: int, l: int) -> int:
    """C_-(m, l) = #{a in N^(m+1): m + sum a = l}; C_+(m, l) = #{a: sum a = l - 1}."""
    if m < 0 or l < 0:
        raise ValueError("m and l must be nonnegative")
    if sign < 0:
        return comb(l, m) if l >= m else 0
    return comb(l - 1 + m, m) if l >= 1 else 0


def kostant_C_bruteforce(sign: int, m: int, l: int) -> int:
    total = l - m if sign < 0 else l - 1
    if total < 0:
        return 0
    return sum(1 for a in iproduct(range(total + 1), repeat=m + 1) if sum(a) == total)


def tilde_C(sigma: int, m: int, l: int) -> int:
    """(-sigma)^(m+1) * C_sigma(m, l)."""
    return (-sigma) ** (m + 1) * kostant_C(sigma, m, l)
