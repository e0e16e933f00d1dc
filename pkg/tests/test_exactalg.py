from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lattice_box_search, sample_strict_direction
from torusloc.errors import NotPolynomial, RankMismatch
from torusloc.exactalg import (
    NEG_INF,
    Feasible,
    Infeasible,
    LatticeBasis,
    LaurentPolynomial,
    RationalFunction,
    divide_exact,
    ideal_generator,
    lattice_membership,
    laurent_arith,
    strict_feasibility,
)

z = LaurentPolynomial.univariate


def polys(rank=2):
    exps = st.tuples(*[st.integers(-3, 3)] * rank)
    return st.dictionaries(exps, st.integers(-5, 5), max_size=5).map(lambda d: LaurentPolynomial(rank, d))


# Laurent polynomials


def test_difference_of_squares():
    assert laurent_arith("mul", z({0: 1, 1: 1}), z({0: 1, 1: -1})) == z({0: 1, 2: -1})


def test_coeff_of_zero_polynomial():
    assert laurent_arith("coeff", LaurentPolynomial.zero(1), (7,)) == 0
    assert LaurentPolynomial.zero(2).coeff((1, -4)) == 0


def test_support_max():
    p = z({0: 1, 1: 1, 2: 1})
    assert laurent_arith("support_max", p, 1) == 2
    assert LaurentPolynomial.zero(1).support_max(1) == NEG_INF


def test_terms_sorted_and_zero_dropped():
    p = LaurentPolynomial(2, {(1, 0): 2, (0, 1): 0, (-1, 3): 1})
    assert [e for e, _ in p] == [(-1, 3), (1, 0)]
    assert str(p) == "t1^-1*t2^3 + 2*t1"


def test_format_univariate():
    assert str(z({0: 1, 1: 1, 2: 1})) == "1 + z + z^2"
    assert str(z({-1: -3, 2: 1})) == "-3*z^-1 + z^2"
    assert str(LaurentPolynomial.zero(1)) == "0"


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        LaurentPolynomial.one(1) + LaurentPolynomial.one(2)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + (-a) == LaurentPolynomial.zero(2)
    assert a * LaurentPolynomial.one(2) == a


@settings(max_examples=40, deadline=None)
@given(polys(), polys(), st.tuples(st.integers(-2, 2), st.integers(-2, 2)).filter(any))
def test_specialize_is_a_ring_map(a, b, u):
    assert (a * b).specialize(u) == a.specialize(u) * b.specialize(u)
    assert (a + b).specialize(u) == a.specialize(u) + b.specialize(u)


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_evaluate_matches_product(a, b):
    pt = (Fraction(2, 3), Fraction(-5, 2))
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)


def test_mul_truncated_matches_truncate():
    a = z({0: 1, 1: 1, 2: 1, 3: 1})
    b = z({0: 1, 2: 5, 4: 1})
    assert a.mul_truncated(b, (1,), 4) == (a * b).truncate((1,), 4)


# rational functions


def test_divide_exact():
    num = z({0: 1, 3: -1})
    den = z({0: 1, 1: -1})
    assert divide_exact(num, den) == z({0: 1, 1: 1, 2: 1})


def test_divide_inexact_raises():
    with pytest.raises(NotPolynomial):
        divide_exact(z({0: 1}), z({0: 1, 1: -1}))
    with pytest.raises(NotPolynomial):
        divide_exact(z({0: 1, 1: 1}), z({0: 2}))


def test_rational_normal_form():
    r = RationalFunction(z({5: 1}), z({2: -1, 3: 1}))
    assert r.denominator == z({0: -1, 1: 1})
    assert r.numerator == z({3: 1})
    half = RationalFunction(z({0: 1}), z({0: 2}))
    assert half + half == RationalFunction(z({0: 1}))


# lattices


def test_lattice_examples():
    even = LatticeBasis.of([(2, 0), (0, 2)])
    assert lattice_membership(even, (1, 1)) == (False, None)
    ok, cert = lattice_membership(even, (2, 2))
    assert ok and cert == (1, 1)
    uni = LatticeBasis.of([(2, 1), (1, 1)])
    ok, cert = lattice_membership(uni, (7, -3))
    assert ok and uni.combine(cert) == (7, -3)


def test_reduced_basis_spans_same_lattice():
    gens = [(4, 6), (6, 9), (2, 2)]
    lat = LatticeBasis.of(gens)
    red = LatticeBasis.of(list(lat.reduced), 2)
    assert lat.contains_lattice(red) and red.contains_lattice(lat)


def test_ideal_generator():
    assert ideal_generator([4, -6]) == 2
    assert ideal_generator([]) == 0


small = st.integers(-4, 4)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(small, small), min_size=1, max_size=3), st.tuples(st.integers(-6, 6), st.integers(-6, 6)))
def test_lattice_against_box_search(gens, v):
    lat = LatticeBasis.of(gens, 2)
    ok, cert = lattice_membership(lat, v)
    found = lattice_box_search(gens, v, 6 if len(gens) == 3 else 10)
    if found is not None:
        assert ok
    if ok:
        assert lat.combine(cert) == v
    else:
        assert found is None


# strict feasibility


def test_feasibility_examples():
    assert isinstance(strict_feasibility([(1,), (-1,)]), Infeasible)
    res = strict_feasibility([(1, 0), (0, 1)])
    assert isinstance(res, Feasible) and all(x > 0 for x in res.u)
    six = [(1, 0), (0, 1), (-1, 0), (-1, 1), (1, -1), (0, -1)]
    assert isinstance(strict_feasibility(six), Infeasible)


def test_feasibility_is_deterministic():
    system = [(1, 2), (3, -1), (1, 0)]
    assert strict_feasibility(system) == strict_feasibility(list(system))


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(small, small).filter(any), min_size=1, max_size=6))
def test_feasibility_rank2(system):
    res = strict_feasibility(system)
    if isinstance(res, Feasible):
        assert all(sum(a * b for a, b in zip(res.u, row)) > 0 for row in system)
    else:
        assert sample_strict_direction(system, 2) is None


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(small, small, small).filter(any), min_size=1, max_size=5))
def test_feasibility_rank3(system):
    res = strict_feasibility(system)
    if isinstance(res, Feasible):
        assert all(sum(a * b for a, b in zip(res.u, row)) > 0 for row in system)
    else:
        assert sample_strict_direction(system, 3) is None
