"""Verifiers for the cancellation, lattice and half-space statements.

Every verifier returns a :class:`VerificationReport` whose witnesses can be
re-checked independently: partition-count tables, lattice certificates,
feasibility points. ``Refuted`` is a normal outcome and flags fixed-point
data that cannot come from a closed quantizable manifold.
"""

from __future__ import annotations

import time
from functools import partial, reduce
from math import gcd
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from .errors import EmptyClass, NotPolynomial, ShapeMismatch
from .exactalg import Feasible, LatticeBasis, dot, ideal_generator, strict_feasibility
from .fpdata import ComponentSet, FixedPoint, FixedPointSet, restrict_to_circle
from .localization import (
    DEFAULT_W0,
    character_exact,
    component_coefficient,
    component_support_bound,
    component_terms,
    expansion_window,
    point_series,
)
from .partition import (
    SignAssignment,
    count_Np,
    find_polarizing,
    make_sign_assignment,
    polarize,
    polarizing_vectors,
    sign_assignment_from,
)

VERIFIED, REFUTED, INAPPLICABLE = "Verified", "Refuted", "Inapplicable"


def jsonable(x):
    """Exact values in JSON form: rationals as "p/q", tuples as lists."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


@dataclass
class VerificationReport:
    theorem: str
    dataset: str
    verdict: str
    witnesses: dict = field(default_factory=dict)
    window: Any = None
    elapsed_ms: float | None = None

    @property
    def ok(self) -> bool:
        return self.verdict == VERIFIED

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "dataset": self.dataset,
            "verdict": self.verdict,
            "witnesses": jsonable(self.witnesses),
            "window": jsonable(self.window),
            "elapsed_ms": self.elapsed_ms,
        }


def _timed(fn: Callable[..., VerificationReport]):
    def wrapper(*args, timing: bool = False, **kwargs):
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        if timing:
            report.elapsed_ms = round((time.perf_counter() - start) * 1000.0, 3)
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    wrapper.__wrapped__ = fn
    return wrapper


def _with_convention(fps: FixedPointSet, convention: str) -> FixedPointSet:
    if convention == "paper":
        return fps
    if convention == "negated":
        return fps.negated()
    raise ValueError(f"unknown convention {convention!r}")


def _mode_label(mode: str, u=None, eps: SignAssignment | None = None) -> str:
    if mode == "polarized":
        return "polarized(" + ",".join(map(str, u)) + ")"
    if mode == "eps":
        return "eps(interior=" + ",".join(str(x) for x in eps.interior) + ")"
    return mode


# cancellation


@_timed
def verify_cancellation(
    fps: FixedPointSet,
    mode: str = "circle",
    *,
    u: Sequence[int] | None = None,
    eps: SignAssignment | None = None,
    window: int = 40,
    convention: str = "paper",
    dataset: str = "",
    W0: int = DEFAULT_W0,
    mapper: Callable = map,
) -> VerificationReport:
    """sum_{Q+} N_p(l) == sum_{Q-} N_p(l) above the character's support.

    Also checks the refined identity coefficient(chi, l) == signed sum at
    every tested l, including those below the threshold.
    """
    if mode == "eps":
        return _cancellation_eps(fps, eps, window, convention, dataset, W0)
    src = _with_convention(fps, convention)
    if mode == "circle":
        if fps.rank != 1:
            raise ShapeMismatch("circle mode needs rank-1 data; use polarized or eps mode")
        u = (1,)
        part, count_mode, scalar = polarize(src, u), "circle", src
    elif mode == "polarized":
        u = tuple(u) if u is not None else find_polarizing(fps)
        part = count_mode = polarize(src, u)
        scalar = restrict_to_circle(src, u)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    n = fps.half_dim
    Js = [p.moment[0] for p in scalar.points]
    chi_error = None
    try:
        chi = character_exact(scalar)
    except NotPolynomial as exc:
        chi, chi_error = None, str(exc)
    if chi is None:
        threshold, basis = max(Js), "max moment (character is not a polynomial)"
    elif chi:
        threshold, basis = chi.support_max(1), "support max of character"
    else:
        threshold, basis = min(Js), "min moment (character is zero)"

    lo = min(Js) - 5 if chi is None or not chi else min(min(Js), chi.support_min(1)) - 5
    ls = list(range(lo, threshold + window + 1))

    sums = partial(_signed_sums, src, part, count_mode)
    table = dict(zip(ls, mapper(sums, ls)))
    above = [l for l in ls if l > threshold]
    failing = [l for l in above if table[l][0] != table[l][1]]
    refined_fail = None
    if chi is not None:
        for l in ls:
            plus, minus = table[l]
            if chi.coeff(l) != (-1) ** n * (plus - minus):
                refined_fail = l
                break
    verdict = REFUTED if failing else VERIFIED
    witnesses = {
        "mode": _mode_label(mode, u),
        "convention": convention,
        "Q_plus": list(part.Q_plus),
        "Q_minus": list(part.Q_minus),
        "character": str(chi) if chi is not None else None,
        "threshold": threshold,
        "threshold_basis": basis,
        "counts": [[l, table[l][0], table[l][1]] for l in above],
        "refined_identity": {
            "checked_from": lo,
            "checked_to": threshold + window,
            "holds": None if chi is None else refined_fail is None,
            "first_failing_l": refined_fail,
        },
    }
    if chi_error:
        witnesses["character_error"] = chi_error
    if failing:
        l = failing[0]
        witnesses["counterexample"] = {"l": l, "sum_plus": table[l][0], "sum_minus": table[l][1]}
    elif chi is not None and refined_fail is not None:
        witnesses["note"] = "identity holds above threshold but the refined identity fails below it"
    return VerificationReport(
        "cancellation", dataset, verdict, witnesses, {"start": threshold + 1, "end": threshold + window}
    )


def _signed_sums(src, part, count_mode, l) -> tuple[int, int]:
    plus = sum(count_Np(src.point(nm), l, count_mode) for nm in part.Q_plus)
    minus = sum(count_Np(src.point(nm), l, count_mode) for nm in part.Q_minus)
    return plus, minus


def _cancellation_eps(fps, sa, window, convention, dataset, W0) -> VerificationReport:
    if sa is None:
        raise ValueError("eps mode needs a sign assignment")
    src = _with_convention(fps, convention)
    if convention != "paper":
        # same region of expansion: flipping every weight flips every sign
        sa = make_sign_assignment(src, {k: tuple(-s for s in v) for k, v in sa.eps.items()})
    w = sa.ranking
    degs = [dot(w, p.moment) for p in src.points]
    chi_error = None
    try:
        chi = expansion_window(src, sa, W0).character
    except NotPolynomial as exc:
        chi, chi_error = None, str(exc)
    if chi is None:
        threshold, basis = max(degs), "max moment degree (character is not a polynomial)"
    elif chi:
        threshold, basis = chi.support_max(w), "support max of character along ranking"
    else:
        threshold, basis = min(degs), "min moment degree (character is zero)"
    top = threshold + window
    # every exponent that some point's expansion reaches within the window
    candidates = set()
    series = {}
    for p in src.points:
        series[p.name] = point_series(src, sa, p.name, top)
        candidates.update(series[p.name].support())
    if chi is not None:
        candidates.update(chi.support())
    ordered = sorted(candidates, key=lambda l: (dot(w, l), l))
    failing, refined_fail, rows = None, None, []
    series_mismatch = None
    for l in ordered:
        counts = {nm: count_Np(src.point(nm), l, sa) for nm in src.names}
        for nm, c in counts.items():
            if series_mismatch is None and series[nm].coeff(l) != c:
                series_mismatch = {"point": nm, "l": list(l)}
        plus = sum(counts[nm] for nm in sa.Q_plus)
        minus = sum(counts[nm] for nm in sa.Q_minus)
        deg = dot(w, l)
        if deg > threshold:
            rows.append([list(l), plus, minus])
            if failing is None and plus != minus:
                failing = (l, plus, minus)
        if chi is not None and refined_fail is None and chi.coeff(l) != plus - minus:
            refined_fail = list(l)
    witnesses = {
        "mode": _mode_label("eps", eps=sa),
        "convention": convention,
        "ranking": list(w),
        "Q_plus": list(sa.Q_plus),
        "Q_minus": list(sa.Q_minus),
        "character": str(chi) if chi is not None else None,
        "threshold": threshold,
        "threshold_basis": basis,
        "tested_exponents": len(rows),
        "counts": rows,
        "refined_identity": {"holds": None if chi is None else refined_fail is None, "first_failing_l": refined_fail},
        "series_crosscheck": series_mismatch is None,
    }
    if chi_error:
        witnesses["character_error"] = chi_error
    if failing:
        witnesses["counterexample"] = {"l": list(failing[0]), "sum_plus": failing[1], "sum_minus": failing[2]}
    verdict = REFUTED if failing else VERIFIED
    return VerificationReport(
        "cancellation", dataset, verdict, witnesses, {"start_degree": threshold + 1, "end_degree": top}
    )


# lattice


def _smallest_c(gens: Sequence[Sequence[int]], target: LatticeBasis, bound: int) -> int | None:
    for c in range(1, bound + 1):
        if all(target.contains(tuple(c * x for x in g)) for g in gens):
            return c
    return None


def _lattice_side(fps, src_names, dst_names, dst_lattice: LatticeBasis) -> tuple[dict, list]:
    """Witness q(p) in dst for every p in src, with membership certificates."""
    found, missing = {}, []
    for pn in src_names:
        jp = fps.point(pn).moment
        for qn in dst_names:
            jq = fps.point(qn).moment
            diff = tuple(a - b for a, b in zip(jp, jq))
            cert = dst_lattice.solve(diff)
            if cert is not None:
                found[pn] = {"partner": qn, "difference": list(diff), "certificate": list(cert)}
                break
        else:
            missing.append(pn)
    return found, missing


def _weights_of(fps, names):
    return [w for nm in names for w in fps.point(nm).weights]


@_timed
def verify_lattice(
    fps: FixedPointSet,
    mode: str = "circle",
    *,
    u: Sequence[int] | None = None,
    eps: SignAssignment | None = None,
    dataset: str = "",
) -> VerificationReport:
    """Moment differences across the sign partition lie in the opposite lattice.

    circle: I_+/- are ideals of Z; polarized: coordinate-wise ideals, with the
    joint lattice reported alongside; eps: the joint lattice I_-(eps).
    """
    if mode == "circle":
        if fps.rank != 1:
            raise ShapeMismatch("circle mode needs rank-1 data")
        part = polarize(fps, (1,))
        plus, minus = part.Q_plus, part.Q_minus
    elif mode == "polarized":
        u = tuple(u) if u is not None else find_polarizing(fps)
        part = polarize(fps, u)
        plus, minus = part.Q_plus, part.Q_minus
    elif mode == "eps":
        if eps is None:
            raise ValueError("eps mode needs a sign assignment")
        part = eps
        plus, minus = eps.Q_plus, eps.Q_minus
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if not plus or not minus:
        empty = "Q_plus" if not plus else "Q_minus"
        raise EmptyClass(f"{empty} is empty; the partition hypotheses fail for this data")

    witnesses: dict = {"mode": _mode_label(mode, u, eps), "Q_plus": list(plus), "Q_minus": list(minus)}
    problems = []
    sides = (("plus", plus, minus), ("minus", minus, plus))

    if mode in ("circle", "eps"):
        for label, src, dst in sides:
            I_dst = LatticeBasis.of(_weights_of(fps, dst), fps.rank)
            found, missing = _lattice_side(fps, src, dst, I_dst)
            gens_src = _weights_of(fps, src)
            side = {"lattice_generators": [list(g) for g in I_dst.reduced], "witnesses": found}
            if mode == "circle":
                side["ideal"] = ideal_generator([w[0] for w in _weights_of(fps, dst)])
                c = _smallest_c(gens_src, I_dst, len(dst))
                side["c"] = c
                side["c_bound"] = len(dst)
                if c is None:
                    problems.append({"kind": "no_c", "side": label})
            else:
                # c * alpha_pi in I_dst for every slot i in B_p(eps)
                cs = {}
                for pn in src:
                    for i in eps.B[pn]:
                        alpha = fps.point(pn).weights[i]
                        c = _smallest_c([alpha], I_dst, len(dst))
                        cs[f"{pn}[{i + 1}]"] = c
                        if c is None:
                            problems.append({"kind": "no_c", "side": label, "point": pn, "slot": i + 1})
                side["c"] = cs
                side["c_bound"] = len(dst)
            if missing:
                problems.append({"kind": "no_witness", "side": label, "points": missing})
            witnesses[label] = side
        if mode == "circle":
            witnesses["morse"] = {
                nm: {"index": 2 * len(part.B[nm]), "parity": "even" if part.sigma[nm] == 1 else "odd"}
                for nm in fps.names
            }
    else:
        r = fps.rank
        for label, src, dst in sides:
            per_coord = []
            dst_w = _weights_of(fps, dst)
            src_w = _weights_of(fps, src)
            ideals = [ideal_generator([w[e] for w in dst_w]) for e in range(r)]
            found, missing = {}, []
            for pn in src:
                jp = fps.point(pn).moment
                for qn in dst:
                    jq = fps.point(qn).moment
                    if all(_in_ideal(jp[e] - jq[e], ideals[e]) for e in range(r)):
                        found[pn] = {"partner": qn, "difference": [a - b for a, b in zip(jp, jq)]}
                        break
                else:
                    missing.append(pn)
            for e in range(r):
                src_ideal = ideal_generator([w[e] for w in src_w])
                c = next((c for c in range(1, len(dst) + 1) if _in_ideal(c * src_ideal, ideals[e])), None)
                per_coord.append({"coordinate": e + 1, "ideal": ideals[e], "source_ideal": src_ideal, "c": c})
                if c is None:
                    problems.append({"kind": "no_c", "side": label, "coordinate": e + 1})
            if missing:
                problems.append({"kind": "no_witness", "side": label, "points": missing})
            I_dst = LatticeBasis.of(dst_w, r)
            jfound, jmissing = _lattice_side(fps, src, dst, I_dst)
            witnesses[label] = {
                "coordinate_ideals": per_coord,
                "witnesses": found,
                "c_bound": len(dst),
                "joint_lattice": {
                    "generators": [list(g) for g in I_dst.reduced],
                    "witnesses": jfound,
                    "verdict": VERIFIED if not jmissing else REFUTED,
                },
            }
    if problems:
        witnesses["failures"] = problems
    return VerificationReport("lattice", dataset, REFUTED if problems else VERIFIED, witnesses)


def _in_ideal(x: int, g: int) -> bool:
    return x == 0 if g == 0 else x % g == 0


# half-space


@_timed
def verify_halfspace(fps, dataset: str = "") -> VerificationReport:
    """No open half-space contains every weight.

    Component sets are checked on the union of their normal weights.
    """
    if isinstance(fps, ComponentSet):
        weights = [w for c in fps.components for w in c.weights]
    else:
        weights = fps.all_weights()
    distinct = sorted(set(weights))
    res = strict_feasibility(distinct)
    if isinstance(res, Feasible):
        u = res.integral()
        g = reduce(gcd, u)
        u = tuple(x // g for x in u)
        pairings = {str(list(w)): dot(u, w) for w in distinct}
        return VerificationReport(
            "halfspace", dataset, REFUTED, {"separating_u": list(u), "pairings": pairings}
        )
    return VerificationReport(
        "halfspace", dataset, VERIFIED, {"distinct_weights": [list(w) for w in distinct], "system": "infeasible"}
    )


# components


def _two_component_shape(cs: ComponentSet):
    if cs.rank != 1 or cs.half_dim != 2 or len(cs.components) != 2:
        raise ShapeMismatch("needs a rank-1 component set of half dimension 2 with exactly two components")
    pts = [c for c in cs.components if len(c.weights) == 2]
    surf = [c for c in cs.components if len(c.weights) == 1]
    if len(pts) != 1 or len(surf) != 1:
        raise ShapeMismatch("needs one isolated point and one component with a single normal weight")
    q, F = pts[0], surf[0]
    if any(w[0] <= 0 for w in q.weights):
        raise ShapeMismatch(f"point {q.name!r} must have two positive weights")
    if F.weights[0][0] >= 0:
        raise ShapeMismatch(f"component {F.name!r} must have a negative weight")
    if F.moment[0] <= q.moment[0]:
        raise ShapeMismatch("J(F) must exceed J(q)")
    return q, F


@_timed
def verify_prop42(cs: ComponentSet, n0_max: int = 50, dataset: str = "") -> VerificationReport:
    """Point q plus surface F on a 4-manifold: the three count relations."""
    q, F = _two_component_shape(cs)
    Jq, JF, aF = q.moment[0], F.moment[0], F.weights[0][0]
    A0, A1 = F.char_number((0,), 2), F.char_number((1,), 2)
    point = _as_point(q)
    bound = max(Jq, JF)
    # largest n0 whose exponent J(F) - n0*aF is not above the support bound
    m = max((n0 for n0 in range(0, n0_max + 1) if JF - n0 * aF <= bound), default=0)
    item1, first_fail = [], None
    for n0 in range(m + 1, n0_max + 1):
        k = JF - n0 * aF
        count = count_Np(point, k, "circle")
        expected = -A0 - n0 * A1
        item1.append([n0, count, expected])
        if first_fail is None and count != expected:
            first_fail = n0
    item2, item2_fail = [], None
    for k in range(bound + 1, bound + n0_max * abs(aF) + 1):
        if (JF - k) % aF == 0 and (JF - k) // aF >= 0:
            continue
        count = count_Np(point, k, "circle")
        item2.append([k, count])
        if item2_fail is None and count != 0:
            item2_fail = k
    item3 = (JF - Jq) % aF == 0
    item2_info = {"holds": item2_fail is None, "first_failing_k": item2_fail, "tested": len(item2)}
    if not item2:
        item2_info["note"] = "no non-resonant k: |alpha_F| = 1 makes every k resonant"
    witnesses = {
        "q": q.name,
        "F": F.name,
        "A0": A0,
        "A1": A1,
        "threshold_m": m,
        "item1": {"holds": first_fail is None, "first_failing_n0": first_fail, "table": item1},
        "item2": item2_info,
        "item3": {"holds": item3, "difference": JF - Jq, "ideal": abs(aF)},
    }
    ok = first_fail is None and item2_fail is None and item3
    return VerificationReport("prop42", dataset, VERIFIED if ok else REFUTED, witnesses, {"n0": [m + 1, n0_max]})


def _as_point(comp):
    return FixedPoint(comp.name, comp.moment, comp.weights)


@_timed
def verify_components(
    cs: ComponentSet, u: Sequence[int] | None = None, window: int = 40, dataset: str = ""
) -> VerificationReport:
    """Component coefficients vanish above the support bound.

    Reports both the signed total and the split into tau = +1 / -1 classes.
    """
    weights = [w for c in cs.components for w in c.weights]
    u = tuple(u) if u is not None else polarizing_vectors(weights, 1)[0]
    K = component_support_bound(cs, u)
    rows, fail = [], None
    for k in range(K + 1, K + window + 1):
        terms = component_terms(cs, u, k)
        plus = sum((t["A"] * t["D"] for t in terms if t["tau"] == 1), Fraction(0))
        minus = sum((t["A"] * t["D"] for t in terms if t["tau"] == -1), Fraction(0))
        coeff = component_coefficient(cs, u, k)
        rows.append([k, coeff, plus, minus])
        if fail is None and (coeff != 0 or plus != minus):
            fail = k
    witnesses = {"u": list(u), "support_bound": K, "table": rows}
    if fail is not None:
        witnesses["counterexample"] = {"k": fail}
    return VerificationReport(
        "component_cancellation", dataset, REFUTED if fail is not None else VERIFIED, witnesses,
        {"start": K + 1, "end": K + window},
    )


# batch


def verify_all(
    data,
    dataset: str = "",
    window: int = 40,
    convention: str = "paper",
    timing: bool = False,
    mapper: Callable = map,
) -> list[VerificationReport]:
    """Every applicable verifier; precondition failures become Inapplicable reports."""
    jobs: list[tuple[str, Callable[[], VerificationReport]]] = []
    if isinstance(data, ComponentSet):
        jobs.append(("component_cancellation", lambda: verify_components(data, window=window, dataset=dataset, timing=timing)))
        jobs.append(("prop42", lambda: verify_prop42(data, dataset=dataset, timing=timing)))
    else:
        if data.rank == 1:
            jobs.append(("cancellation", lambda: verify_cancellation(data, "circle", window=window, convention=convention, dataset=dataset, mapper=mapper, timing=timing)))
            jobs.append(("lattice", lambda: verify_lattice(data, "circle", dataset=dataset, timing=timing)))
        else:
            u = find_polarizing(data)
            sa = sign_assignment_from(data, u)
            jobs.append(("cancellation", lambda: verify_cancellation(data, "polarized", u=u, window=window, convention=convention, dataset=dataset, mapper=mapper, timing=timing)))
            jobs.append(("cancellation", lambda: verify_cancellation(data, "eps", eps=sa, window=min(window, 20), convention=convention, dataset=dataset, timing=timing)))
            jobs.append(("lattice", lambda: verify_lattice(data, "polarized", u=u, dataset=dataset, timing=timing)))
            jobs.append(("lattice", lambda: verify_lattice(data, "eps", eps=sa, dataset=dataset, timing=timing)))
    jobs.append(("halfspace", lambda: verify_halfspace(data, dataset=dataset, timing=timing)))
    reports = []
    for name, job in jobs:
        try:
            reports.append(job())
        except (EmptyClass, ShapeMismatch) as exc:
            reports.append(VerificationReport(name, dataset, INAPPLICABLE, {"reason": str(exc)}))
    return reports
