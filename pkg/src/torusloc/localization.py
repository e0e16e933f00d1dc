"""Characters by fixed-point localization.

Two weight conventions are supported. ``paper`` uses the denominators
(1 - t^{-alpha}) with the weights as stored; ``negated`` is the same formula
applied to the dataset with every weight negated. On toric data ``negated``
counts the lattice points of the moment polytope and ``paper`` counts the
interior ones up to the sign (-1)^n.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotGeneric, NotPolarizing, NotPolynomial, ReconstructionMismatch
from .exactalg import LaurentPolynomial, RationalFunction, dot
from .fpdata import ComponentSet, FixedPointSet, restrict_to_circle
from .partition import (
    SignAssignment,
    count_Np,
    distinct_sign_assignments,
    kostant_C,
    polarize,
    tilde_C,
)

CONVENTIONS = ("paper", "negated")
DEFAULT_W0 = 20


def _apply_convention(fps: FixedPointSet, convention: str) -> FixedPointSet:
    if convention == "paper":
        return fps
    if convention == "negated":
        return fps.negated()
    raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


def localization_sum(fps: FixedPointSet) -> RationalFunction:
    """sum_p z^J(p) / prod_j (1 - z^{-alpha_pj}) over a common denominator (rank 1).

    Each factor is rewritten over (1 - z^b) with b > 0:
    1/(1 - z^{-a}) = -z^a/(1 - z^a) for a > 0 and 1/(1 - z^{|a|}) for a < 0.
    The common denominator takes every (1 - z^b) at its largest multiplicity.
    """
    if fps.rank != 1:
        raise ValueError("localization_sum is for rank-1 data")
    z = LaurentPolynomial.univariate
    need: Counter = Counter()
    per_point = []
    for p in fps.points:
        vals = [w[0] for w in p.weights]
        mult = Counter(abs(a) for a in vals)
        for b, k in mult.items():
            need[b] = max(need[b], k)
        sign = -1 if sum(1 for a in vals if a > 0) % 2 else 1
        shift = p.moment[0] + sum(a for a in vals if a > 0)
        per_point.append((sign, shift, mult))
    den = LaurentPolynomial.one(1)
    for b in sorted(need):
        den = den * (z({0: 1, b: -1}) ** need[b])
    num = LaurentPolynomial.zero(1)
    for sign, shift, mult in per_point:
        term = z({shift: sign})
        for b in sorted(need):
            missing = need[b] - mult.get(b, 0)
            if missing:
                term = term * (z({0: 1, b: -1}) ** missing)
        num = num + term
    return RationalFunction(num, den)


def _rank1_character(fps: FixedPointSet) -> LaurentPolynomial:
    return localization_sum(fps).to_laurent()


@dataclass(frozen=True)
class Reconstruction:
    character: LaurentPolynomial
    ranking: tuple[int, ...]
    max_degree: int
    extensions: int


def point_series(fps: FixedPointSet, sa: SignAssignment, name: str, max_degree: int) -> LaurentPolynomial:
    """t^J(p) prod_A (sum_{m>=1} t^{m alpha}) prod_B (sum_{n>=0} t^{-n alpha}), truncated.

    Truncation keeps exponents with <w, rho> <= max_degree where w is the
    ranking functional of ``sa``. Coefficients are the counts N_p(l, eps).
    """
    w = sa.ranking
    p = fps.point(name)
    series = LaurentPolynomial.monomial(p.moment)
    base = dot(w, p.moment)
    if base > max_degree:
        return LaurentPolynomial.zero(fps.rank)
    for j, alpha in enumerate(p.weights):
        step = alpha if j in sa.A[name] else tuple(-x for x in alpha)
        first = 1 if j in sa.A[name] else 0
        d = dot(w, step)
        top = (max_degree - base) // d
        factor = LaurentPolynomial(fps.rank, {tuple(k * x for x in step): 1 for k in range(first, top + 1)})
        series = series.mul_truncated(factor, w, max_degree)
    return series


def expansion_window(
    fps: FixedPointSet, sa: SignAssignment, W0: int = DEFAULT_W0, max_extensions: int = 6
) -> Reconstruction:
    """Reconstruct the character from its expansion in the region of ``sa``.

    The window in w-degree starts at max_p <w, J(p)> + n*W0 and grows by n*W0
    until 2n consecutive empty degree layers follow the last nonzero term.
    """
    w = sa.ranking
    n = fps.half_dim
    top = max(dot(w, p.moment) for p in fps.points) + n * W0
    for ext in range(max_extensions + 1):
        total = LaurentPolynomial.zero(fps.rank)
        for p in fps.points:
            total = total + sa.sigma[p.name] * point_series(fps, sa, p.name, top)
        last = total.support_max(w)
        if top - last >= 2 * n:
            return Reconstruction(total, w, top, ext)
        top += n * W0
    raise NotPolynomial(f"expansion along {w} has not terminated by degree {top - n * W0}")


def character_exact(fps: FixedPointSet, convention: str = "paper", W0: int = DEFAULT_W0) -> LaurentPolynomial:
    """The character of the equivariant index as a Laurent polynomial.

    Rank 1 is done by exact rational arithmetic; higher rank reconstructs
    the character from two region expansions and insists they agree.
    """
    data = _apply_convention(fps, convention)
    if data.rank == 1:
        return _rank1_character(data)
    sas = distinct_sign_assignments(data, 2)
    first = expansion_window(data, sas[0], W0).character
    second = expansion_window(data, sas[1], W0).character
    if first != second:
        raise ReconstructionMismatch(
            f"expansions for eps interior points {_vec(sas[0].interior)} and {_vec(sas[1].interior)} disagree"
        )
    return first


def _vec(u) -> str:
    return "(" + ",".join(str(x) for x in u) + ")"


def character_polarized(fps: FixedPointSet, u: Sequence[int], convention: str = "paper") -> LaurentPolynomial:
    """The character along lambda -> (lambda^{u_1}, ..., lambda^{u_r})."""
    u = tuple(u)
    if any(Fraction(x).denominator != 1 for x in u):
        raise NotPolarizing("polarizing vectors must be integer vectors")
    try:
        line = restrict_to_circle(fps, tuple(int(x) for x in u))
    except NotGeneric as exc:
        raise NotPolarizing(str(exc)) from None
    return _rank1_character(_apply_convention(line, convention))


def expansion_coefficient(fps: FixedPointSet, partition, l) -> int:
    """Coefficient of t^l in the region expansion attached to ``partition``.

    For a polarized partition this is (-1)^n (sum_{Q+} N_p - sum_{Q-} N_p);
    for a sign assignment the signs sigma(p, eps) already include the
    (-1)^{#A} factors, so it is sum_{Q+} N_p - sum_{Q-} N_p.
    """
    plus, minus = partition_sums(fps, partition, l)
    if isinstance(partition, SignAssignment):
        return plus - minus
    return (-1) ** fps.half_dim * (plus - minus)


def partition_sums(fps: FixedPointSet, partition, l) -> tuple[int, int]:
    """(sum over Q+ of N_p(l), sum over Q- of N_p(l)) for the given partition."""
    if isinstance(partition, str):
        if partition != "circle":
            raise ValueError(f"unknown partition {partition!r}")
        part, mode = polarize(fps, (1,)), "circle"
    else:
        part = mode = partition
    plus = sum(count_Np(fps.point(n), l, mode) for n in part.Q_plus)
    minus = sum(count_Np(fps.point(n), l, mode) for n in part.Q_minus)
    return plus, minus


# components


def _nonneg_solutions(steps: Sequence[int], target: int):
    """All l in N^s with sum steps[j] * l[j] == target (steps positive)."""
    if not steps:
        if target == 0:
            yield ()
        return
    first, rest = steps[0], steps[1:]
    for x in range(target // first + 1):
        for tail in _nonneg_solutions(rest, target - x * first):
            yield (x,) + tail


def _component_data(cs: ComponentSet, u: Sequence[int]):
    out = []
    for comp in cs.components:
        vals = [dot(u, w) for w in comp.weights]
        for j, a in enumerate(vals):
            if a == 0:
                raise NotPolarizing(f"vector {_vec(u)} is orthogonal to weight {j + 1} of component {comp.name!r}")
        out.append((comp, dot(u, comp.moment), [1 if a > 0 else -1 for a in vals], [abs(a) for a in vals]))
    return out


def _nvecs(comp, half_dim: int):
    """Exponent tuples with a possibly nonzero characteristic number."""
    keys = set(k for k, v in comp.char_numbers.items() if v)
    if len(comp.weights) == half_dim and (0,) * half_dim not in comp.char_numbers:
        keys.add((0,) * half_dim)
    return sorted(keys)


def component_terms(cs: ComponentSet, u: Sequence[int], k: int) -> list[dict]:
    """Per (F, n) contributions A_n(F) * D(F, n, k) with the sign tau(F, n)."""
    u = tuple(u)
    terms = []
    for comp, JF, sig, steps in _component_data(cs, u):
        target = k - JF
        if target < 0:
            continue
        sols = list(_nonneg_solutions(steps, target))
        for nvec in _nvecs(comp, cs.half_dim):
            A = comp.char_number(nvec, cs.half_dim)
            D = 0
            for ls in sols:
                prod = 1
                for s, m, l in zip(sig, nvec, ls):
                    prod *= kostant_C(s, m, l)
                D += prod
            tau = 1
            for s, m in zip(sig, nvec):
                tau *= (-s) ** (m + 1)
            terms.append({"component": comp.name, "n": nvec, "A": A, "D": D, "tau": tau})
    return terms


def component_coefficient(cs: ComponentSet, u: Sequence[int], k: int) -> Fraction:
    """Coefficient of lambda^k from components with characteristic numbers.

    Sums A_n(F) * sum_{l in L(F,k)} prod_j tildeC_{sigma_Fj}(n_j, l_j) over
    components F and exponent tuples n with entries in 0..half_dim.
    """
    u = tuple(u)
    total = Fraction(0)
    for comp, JF, sig, steps in _component_data(cs, u):
        target = k - JF
        if target < 0:
            continue
        sols = list(_nonneg_solutions(steps, target))
        for nvec in _nvecs(comp, cs.half_dim):
            A = comp.char_number(nvec, cs.half_dim)
            inner = 0
            for ls in sols:
                prod = 1
                for s, m, l in zip(sig, nvec, ls):
                    prod *= tilde_C(s, m, l)
                    if not prod:
                        break
                inner += prod
            total += A * inner
    return total


def component_support_bound(cs: ComponentSet, u: Sequence[int]) -> int:
    """Largest <u, J(F)>; coefficients above it vanish on genuine data."""
    return max(dot(u, c.moment) for c in cs.components)
