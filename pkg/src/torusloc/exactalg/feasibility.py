"""Exact feasibility of homogeneous strict linear inequalities <u, a_i> > 0.

The strict homogeneous system is feasible iff the system <u, a_i> >= 1 is,
so the elimination runs on non-strict rows with rational arithmetic and
the answer is re-checked against the strict system before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from ..errors import RankMismatch

# a row (coeffs, b) encodes sum(coeffs[j] * u[j]) >= b
Row = tuple[tuple[Fraction, ...], Fraction]


@dataclass(frozen=True)
class Feasible:
    u: tuple[Fraction, ...]

    @property
    def feasible(self) -> bool:
        return True

    def integral(self) -> tuple[int, ...]:
        """The witness scaled by a positive integer to clear denominators."""
        return integral_direction(self.u)


@dataclass(frozen=True)
class Infeasible:
    eliminated_rows: int = 0

    @property
    def feasible(self) -> bool:
        return False


def integral_direction(u: Sequence[Fraction]) -> tuple[int, ...]:
    m = 1
    for x in u:
        m = lcm(m, Fraction(x).denominator)
    return tuple(int(Fraction(x) * m) for x in u)


def _normalize(row: Row) -> Row | None:
    coeffs, b = row
    lead = next((abs(c) for c in coeffs if c), None)
    if lead is None:
        return None
    return tuple(c / lead for c in coeffs), b / lead


def _eliminate(rows: list[Row], var: int) -> list[Row]:
    pos, neg, rest = [], [], []
    for row in rows:
        c = row[0][var]
        (pos if c > 0 else neg if c < 0 else rest).append(row)
    out = list(rest)
    for pc, pb in pos:
        for nc, nb in neg:
            a, b = pc[var], -nc[var]
            coeffs = tuple(b * x + a * y for x, y in zip(pc, nc))
            out.append((coeffs, b * pb + a * nb))
    return out


def _dedupe(rows: list[Row]) -> tuple[list[Row], bool]:
    """Drop empty rows (checking 0 >= b) and duplicates; keep the tightest bound."""
    best: dict[tuple[Fraction, ...], Fraction] = {}
    ok = True
    for row in rows:
        norm = _normalize(row)
        if norm is None:
            if row[1] > 0:
                ok = False
            continue
        coeffs, b = norm
        if coeffs not in best or b > best[coeffs]:
            best[coeffs] = b
    return [(c, best[c]) for c in sorted(best)], ok


def strict_feasibility(system: Sequence[Sequence[int]]) -> Feasible | Infeasible:
    """Decide whether some u satisfies <u, a> > 0 for every a in ``system``.

    Variables are eliminated in ascending index order; back substitution
    takes interval midpoints (or bound +/- 1 on half-lines, 0 when free).
    """
    if not system:
        raise ValueError("empty system")
    r = len(system[0])
    for a in system:
        if len(a) != r:
            raise RankMismatch(f"constraint {tuple(a)} does not have length {r}")
        if not any(a):
            raise ValueError("zero constraint vector")
    rows, ok = _dedupe([(tuple(Fraction(x) for x in a), Fraction(1)) for a in system])
    stages = [rows]
    for var in range(r):
        rows, ok = _dedupe(_eliminate(rows, var))
        if not ok:
            return Infeasible(sum(len(s) for s in stages))
        stages.append(rows)

    u = [Fraction(0)] * r
    for var in range(r - 1, -1, -1):
        lo, hi = None, None
        for coeffs, b in stages[var]:
            c = coeffs[var]
            if c == 0:
                continue
            rest = sum(coeffs[j] * u[j] for j in range(var + 1, r))
            bound = (b - rest) / c
            if c > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None and hi is not None:
            u[var] = (lo + hi) / 2
        elif lo is not None:
            u[var] = lo + 1
        elif hi is not None:
            u[var] = hi - 1
        else:
            u[var] = Fraction(0)
    for a in system:
        if sum(Fraction(x) * y for x, y in zip(a, u)) <= 0:
            raise AssertionError(f"back substitution produced a non-solution for {tuple(a)}")
    return Feasible(tuple(u))
