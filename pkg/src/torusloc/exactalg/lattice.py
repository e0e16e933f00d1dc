"""Integer sublattices of Z^r: Hermite reduction and membership certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from ..errors import RankMismatch

Vector = tuple[int, ...]


def hermite_reduce(generators: Sequence[Sequence[int]], rank: int) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Row-reduce the generator matrix to Hermite normal form.

    Returns (basis, transforms, pivots): each basis row equals the
    combination of generators given by the matching transform row, and
    pivots[k] is the pivot column of basis row k. Pivots are positive and
    entries above a pivot lie in [0, pivot).
    """
    g = len(generators)
    rows = [list(v) for v in generators]
    for v in rows:
        if len(v) != rank:
            raise RankMismatch(f"generator {tuple(v)} does not have length {rank}")
    trans = [[int(i == j) for j in range(g)] for i in range(g)]

    def axpy(dst: int, src: int, q: int) -> None:
        # row[dst] -= q * row[src], with the transform tracked alongside
        rd, rs = rows[dst], rows[src]
        for k in range(rank):
            rd[k] -= q * rs[k]
        td, ts = trans[dst], trans[src]
        for k in range(g):
            td[k] -= q * ts[k]

    pivots: list[int] = []
    top = 0
    for col in range(rank):
        if top == g:
            break
        while True:
            live = [i for i in range(top, g) if rows[i][col] != 0]
            if not live:
                break
            best = min(live, key=lambda i: (abs(rows[i][col]), i))
            rows[top], rows[best] = rows[best], rows[top]
            trans[top], trans[best] = trans[best], trans[top]
            done = True
            for i in range(top + 1, g):
                if rows[i][col]:
                    axpy(i, top, rows[i][col] // rows[top][col])
                    if rows[i][col]:
                        done = False
            if done:
                break
        if rows[top][col] == 0:
            continue
        if rows[top][col] < 0:
            rows[top] = [-x for x in rows[top]]
            trans[top] = [-x for x in trans[top]]
        piv = rows[top][col]
        for i in range(top):
            q = rows[i][col] // piv
            if q:
                axpy(i, top, q)
        pivots.append(col)
        top += 1
    return rows[:top], trans[:top], pivots


@dataclass(frozen=True)
class LatticeBasis:
    """The Z-span of a finite list of integer vectors."""

    rank: int
    generators: tuple[Vector, ...]
    reduced: tuple[Vector, ...] = field(init=False, compare=False)
    _transforms: tuple[Vector, ...] = field(init=False, compare=False, repr=False)
    _pivots: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in v) for v in self.generators)
        object.__setattr__(self, "generators", gens)
        basis, trans, pivots = hermite_reduce(gens, self.rank)
        object.__setattr__(self, "reduced", tuple(tuple(r) for r in basis))
        object.__setattr__(self, "_transforms", tuple(tuple(t) for t in trans))
        object.__setattr__(self, "_pivots", tuple(pivots))

    @classmethod
    def of(cls, generators: Sequence[Sequence[int]], rank: int | None = None) -> LatticeBasis:
        generators = [tuple(v) for v in generators]
        if rank is None:
            if not generators:
                raise ValueError("rank is required for an empty generator list")
            rank = len(generators[0])
        return cls(rank, tuple(generators))

    def solve(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Coefficients c with sum c_i * generators[i] == v, or None."""
        v = tuple(v)
        if len(v) != self.rank:
            raise RankMismatch(f"vector {v} does not have length {self.rank}")
        rem = list(v)
        ys = []
        col_done = 0
        for row, piv_col in zip(self.reduced, self._pivots):
            if any(rem[c] for c in range(col_done, piv_col)):
                return None
            piv = row[piv_col]
            q, r = divmod(rem[piv_col], piv)
            if r:
                return None
            for k in range(self.rank):
                rem[k] -= q * row[k]
            ys.append(q)
            col_done = piv_col + 1
        if any(rem):
            return None
        coeffs = [0] * len(self.generators)
        for y, t in zip(ys, self._transforms):
            for i, x in enumerate(t):
                coeffs[i] += y * x
        return tuple(coeffs)

    def contains(self, v: Sequence[int]) -> bool:
        return self.solve(v) is not None

    __contains__ = contains

    def combine(self, coeffs: Sequence[int]) -> Vector:
        out = [0] * self.rank
        for c, gen in zip(coeffs, self.generators):
            for k in range(self.rank):
                out[k] += c * gen[k]
        return tuple(out)

    def contains_lattice(self, other: LatticeBasis) -> bool:
        return all(self.contains(v) for v in other.generators)


def lattice_membership(basis: LatticeBasis, v: Sequence[int]) -> tuple[bool, tuple[int, ...] | None]:
    """(member?, certificate). The certificate reproduces v exactly."""
    cert = basis.solve(v)
    if cert is None:
        return False, None
    assert basis.combine(cert) == tuple(v)
    return True, cert


def ideal_generator(values: Sequence[int]) -> int:
    """Nonnegative generator of the ideal of Z spanned by ``values``."""
    g = 0
    for x in values:
        g = gcd(g, x)
    return g
