"""Exception hierarchy shared by all torusloc modules."""


class TorusLocError(Exception):
    """Base class for every error raised by torusloc."""


class SchemaError(TorusLocError, ValueError):
    """A dataset document does not match the JSON schema."""


class InvariantError(TorusLocError, ValueError):
    """A dataset is well formed but violates a semantic invariant."""


class NotDelzant(TorusLocError, ValueError):
    pass


class NonIntegerVertex(TorusLocError, ValueError):
    pass


class NotGeneric(TorusLocError, ValueError):
    """A circle generator is orthogonal to some weight."""


class RankMismatch(TorusLocError, ValueError):
    pass


class NotPolarizing(TorusLocError, ValueError):
    pass


class InfeasibleAssignment(TorusLocError, ValueError):
    pass


class ModeMismatch(TorusLocError, ValueError):
    pass


class NotPolynomial(TorusLocError, ArithmeticError):
    """The localization sum is not a Laurent polynomial.

    Raised when the fixed-point data cannot come from a closed quantizable
    manifold under the chosen weight convention.
    """


class ReconstructionMismatch(TorusLocError, ArithmeticError):
    pass


class EmptyClass(TorusLocError, ValueError):
    """One side of a sign partition is empty."""


class ShapeMismatch(TorusLocError, ValueError):
    pass
