"""Exact algebra: Laurent polynomials, rational functions, lattices, feasibility."""

from .feasibility import Feasible, Infeasible, integral_direction, strict_feasibility
from .lattice import LatticeBasis, hermite_reduce, ideal_generator, lattice_membership
from .laurent import NEG_INF, LaurentPolynomial, dot
from .ratfunc import RationalFunction, divide_exact

__all__ = [
    "Feasible",
    "Infeasible",
    "LatticeBasis",
    "LaurentPolynomial",
    "NEG_INF",
    "RationalFunction",
    "divide_exact",
    "dot",
    "hermite_reduce",
    "ideal_generator",
    "integral_direction",
    "lattice_membership",
    "laurent_arith",
    "strict_feasibility",
]


def laurent_arith(op: str, *args):
    """Dispatch helper: add, mul, negate, coeff, support_max."""
    if op == "add":
        a, b = args
        return a + b
    if op == "mul":
        a, b = args
        return a * b
    if op == "negate":
        (a,) = args
        return -a
    if op == "coeff":
        a, rho = args
        return a.coeff(rho)
    if op == "support_max":
        a, u = args
        return a.support_max(u)
    raise ValueError(f"unknown operation {op!r}")
