"""Fixed-point data of Hamiltonian torus actions: exact characters and checks."""

from .errors import *  # noqa: F401,F403
from .exactalg import LatticeBasis, LaurentPolynomial, RationalFunction, strict_feasibility
from .fpdata import (
    Component,
    ComponentSet,
    FixedPoint,
    FixedPointSet,
    delzant_polytope,
    generate_toric,
    load_dataset,
    parse_dataset,
    product,
    restrict_to_circle,
    save_dataset,
    segment,
    serialize_dataset,
    simplex,
)
from .localization import (
    character_exact,
    character_polarized,
    component_coefficient,
    expansion_coefficient,
    localization_sum,
)
from .partition import (
    PolarizedPartition,
    SignAssignment,
    count_Np,
    distinct_sign_assignments,
    find_polarizing,
    kostant_C,
    make_sign_assignment,
    polarize,
    tilde_C,
)
from .theorems import (
    VerificationReport,
    verify_all,
    verify_cancellation,
    verify_components,
    verify_halfspace,
    verify_lattice,
    verify_prop42,
)

__version__ = "0.1.0"
