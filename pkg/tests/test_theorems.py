import json
from fractions import Fraction

import pytest

from oracles import brute_N
from torusloc.errors import EmptyClass, ShapeMismatch
from torusloc.exactalg import LatticeBasis, dot
from torusloc.fpdata import (
    Component,
    ComponentSet,
    FixedPoint,
    FixedPointSet,
    generate_toric,
    product,
    restrict_to_circle,
    segment,
    simplex,
)
from torusloc.partition import distinct_sign_assignments, polarizing_vectors, sign_assignment_from
from torusloc.theorems import (
    INAPPLICABLE,
    REFUTED,
    VERIFIED,
    verify_all,
    verify_cancellation,
    verify_components,
    verify_halfspace,
    verify_lattice,
    verify_prop42,
)

EX1 = restrict_to_circle(generate_toric(simplex(1)), (2, 1))
SIMPLEX = generate_toric(simplex(1))
DOCTORED = FixedPointSet(
    2, 2, (FixedPoint("a", (0, 0), ((1, 0), (0, 1))), FixedPoint("b", (1, 1), ((1, 2), (2, 1))))
)


def example2(A0=Fraction(0), A1=Fraction(-1), x=1):
    q = Component("q", (0,), ((x,), (x,)), {(0, 0): Fraction(1)})
    F = Component("F", (x,), ((-x,),), {(0,): A0, (1,): A1})
    return ComponentSet(1, 2, (q, F))


def _recheck_counts(fps, report):
    # every row recomputed with the brute-force oracle
    rows = report.witnesses["counts"]
    plus_names, minus_names = report.witnesses["Q_plus"], report.witnesses["Q_minus"]
    for l, plus, minus in rows:
        if fps.rank == 1:
            got_p = sum(brute_N(fps.point(n).moment, fps.point(n).weights, (l,)) for n in plus_names)
            got_m = sum(brute_N(fps.point(n).moment, fps.point(n).weights, (l,)) for n in minus_names)
            assert (got_p, got_m) == (plus, minus)


# cancellation


def test_ex1_cancellation_window_40():
    rep = verify_cancellation(EX1, "circle", window=40)
    assert rep.verdict == VERIFIED
    rows = rep.witnesses["counts"]
    assert len(rows) == 40
    assert all(p == m for _, p, m in rows)
    assert rep.witnesses["refined_identity"]["holds"]
    _recheck_counts(EX1, rep)


def test_ex1_without_r_refuted():
    rep = verify_cancellation(EX1.without("r"), "circle", window=40)
    assert rep.verdict == REFUTED
    cx = rep.witnesses["counterexample"]
    assert cx["sum_plus"] != cx["sum_minus"]
    assert cx["sum_minus"] == 0


def test_simplex_polarized():
    rep = verify_cancellation(SIMPLEX, "polarized", u=(2, 1), window=40)
    assert rep.verdict == VERIFIED
    assert rep.witnesses["refined_identity"]["holds"]


def test_negated_convention_cancellation():
    rep = verify_cancellation(EX1, "circle", window=30, convention="negated")
    assert rep.verdict == VERIFIED
    assert rep.witnesses["character"] == "1 + z + z^2"
    assert rep.witnesses["threshold"] == 2


def test_eps_cancellation_two_assignments():
    sas = distinct_sign_assignments(SIMPLEX, 2)
    reps = [verify_cancellation(SIMPLEX, "eps", eps=sa, window=20) for sa in sas]
    assert [r.verdict for r in reps] == [VERIFIED, VERIFIED]
    assert reps[0].witnesses["character"] == reps[1].witnesses["character"]
    assert all(r.witnesses["series_crosscheck"] for r in reps)
    assert all(r.witnesses["refined_identity"]["holds"] for r in reps)


def test_verdict_independent_of_polarizing_choice():
    fps = generate_toric(simplex(2))
    verdicts = {verify_cancellation(fps, "polarized", u=u, window=20).verdict for u in polarizing_vectors(fps, 3)}
    assert verdicts == {VERIFIED}


def test_parallel_mapper_matches_serial():
    from concurrent.futures import ProcessPoolExecutor

    serial = verify_cancellation(EX1, "circle", window=25).to_json()
    with ProcessPoolExecutor(2) as pool:
        par = verify_cancellation(EX1, "circle", window=25, mapper=pool.map).to_json()
    assert json.dumps(serial) == json.dumps(par)


# lattice


def _recheck_lattice(fps, rep):
    for side, dst in (("plus", rep.witnesses["Q_minus"]), ("minus", rep.witnesses["Q_plus"])):
        gens = [w for n in dst for w in fps.point(n).weights]
        for pname, wit in rep.witnesses[side]["witnesses"].items():
            diff = tuple(a - b for a, b in zip(fps.point(pname).moment, fps.point(wit["partner"]).moment))
            assert tuple(wit["difference"]) == diff
            combo = [sum(c * g[k] for c, g in zip(wit["certificate"], gens)) for k in range(fps.rank)]
            assert tuple(combo) == diff


def test_ex1_lattice():
    rep = verify_lattice(EX1, "circle")
    assert rep.verdict == VERIFIED
    plus = rep.witnesses["plus"]
    assert plus["ideal"] == 1
    assert plus["witnesses"]["p"]["partner"] == "r"
    assert plus["witnesses"]["p"]["difference"] == [-1]
    assert plus["c"] == 1 and plus["c_bound"] == 1
    _recheck_lattice(EX1, rep)
    assert rep.witnesses["morse"]["r"] == {"index": 2, "parity": "odd"}


def test_ex1_lattice_x3_y2():
    fps = restrict_to_circle(SIMPLEX, (3, 2))
    rep = verify_lattice(fps, "circle")
    assert rep.verdict == VERIFIED
    assert rep.witnesses["plus"]["ideal"] == 1
    _recheck_lattice(fps, rep)


def test_lattice_empty_class():
    fps = FixedPointSet(1, 2, (FixedPoint("a", (0,), ((1,), (1,))),))
    with pytest.raises(EmptyClass):
        verify_lattice(fps, "circle")


def test_lattice_eps_and_polarized():
    sa = sign_assignment_from(SIMPLEX, (2, 1))
    rep = verify_lattice(SIMPLEX, "eps", eps=sa)
    assert rep.verdict == VERIFIED
    _recheck_lattice(SIMPLEX, rep)
    pol = verify_lattice(SIMPLEX, "polarized", u=(2, 1))
    assert pol.verdict == VERIFIED
    assert pol.witnesses["plus"]["joint_lattice"]["verdict"] == VERIFIED


# half-space


def test_halfspace():
    assert verify_halfspace(EX1).verdict == VERIFIED
    assert verify_halfspace(SIMPLEX).verdict == VERIFIED
    rep = verify_halfspace(DOCTORED)
    assert rep.verdict == REFUTED
    u = rep.witnesses["separating_u"]
    assert u == [1, 1]
    assert all(dot(u, w) > 0 for w in DOCTORED.all_weights())


# components


def test_prop42_example2():
    rep = verify_prop42(example2(), n0_max=50)
    assert rep.verdict == VERIFIED
    table = rep.witnesses["item1"]["table"]
    assert [r[0] for r in table] == list(range(1, 51))
    assert all(count == n0 == expected for n0, count, expected in table)
    assert rep.witnesses["item3"]["holds"]


def test_prop42_item2_nonresonant():
    rep = verify_prop42(example2(x=3), n0_max=50)
    assert rep.verdict == VERIFIED
    assert rep.witnesses["item2"]["tested"] > 0


def test_prop42_perturbed():
    rep = verify_prop42(example2(A0=Fraction(1)), n0_max=50)
    assert rep.verdict == REFUTED
    assert rep.witnesses["item1"]["first_failing_n0"] == 1


def test_prop42_shape():
    with pytest.raises(ShapeMismatch):
        verify_prop42(ComponentSet.from_points(EX1))


def test_component_cancellation():
    assert verify_components(example2(), (1,)).verdict == VERIFIED
    assert verify_components(example2(A0=Fraction(1)), (1,)).verdict == REFUTED


# sweeps


def _toric_cases():
    cases = []
    for k in range(1, 6):
        cases.append((f"simplex{k}", generate_toric(simplex(k))))
    for k in range(1, 4):
        cases.append((f"segment{k}", generate_toric(segment(k))))
    cases.append(("seg1xseg2", generate_toric(product(segment(1), segment(2)))))
    cases.append(("simplex1xseg1", generate_toric(product(simplex(1), segment(1)))))
    return cases


@pytest.mark.parametrize("name,fps", _toric_cases(), ids=[c[0] for c in _toric_cases()])
def test_toric_sweep(name, fps):
    datasets = [fps]
    if fps.rank > 1:
        datasets += [restrict_to_circle(fps, u) for u in polarizing_vectors(fps, 3)]
    else:
        datasets += [restrict_to_circle(fps, (c,)) for c in (2, 3, -1)]
    for d in datasets:
        reports = verify_all(d, dataset=name, window=20)
        assert [r.verdict for r in reports if r.verdict != VERIFIED] == [], name
        for r in reports:
            if r.theorem == "lattice" and r.witnesses["mode"] == "circle":
                _recheck_lattice(d, r)


def test_verify_all_inapplicable_lattice():
    fps = FixedPointSet(1, 2, (FixedPoint("a", (0,), ((1,), (1,))), FixedPoint("b", (1,), ((-1,), (-1,)))))
    reports = verify_all(fps)
    lattice = [r for r in reports if r.theorem == "lattice"][0]
    assert lattice.verdict == INAPPLICABLE


def test_report_json_keys():
    rep = verify_halfspace(EX1, timing=True).to_json()
    assert list(rep) == ["theorem", "dataset", "verdict", "witnesses", "window", "elapsed_ms"]
    assert rep["elapsed_ms"] is not None
    assert verify_halfspace(EX1).to_json()["elapsed_ms"] is None


def test_lattice_basis_matches_witness_lattice():
    rep = verify_lattice(SIMPLEX, "eps", eps=sign_assignment_from(SIMPLEX, (2, 1)))
    gens = rep.witnesses["plus"]["lattice_generators"]
    lat = LatticeBasis.of([tuple(g) for g in gens], 2)
    assert lat.contains((1, 0)) and lat.contains((0, 1))
