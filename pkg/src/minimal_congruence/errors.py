"""Exception hierarchy shared by every module."""


class CongruenceError(Exception):
    """Base class for all library errors."""


class InvalidInputError(CongruenceError, ValueError):
    pass


class DegeneratePointError(CongruenceError, ArithmeticError):
    """Raised where the induced metric or the shear degenerates (umbilic/flat point)."""


class UmbilicPointError(DegeneratePointError):
    """Weierstrass data with vanishing third derivative at the requested point."""


class BoundaryZeroError(CongruenceError):
    """A zero of the holomorphic slope sits on the search contour."""


class ImmersionError(CongruenceError):
    """The first fundamental form is degenerate, so the parametrization is not immersive."""


class BranchAmbiguityError(CongruenceError):
    """The square-root branch cannot be continued because the path meets a zero."""


class StepFailureError(CongruenceError):
    pass


class ExperimentFailedError(CongruenceError):
    """A numerical experiment stopped early; ``partial`` carries whatever was computed."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
