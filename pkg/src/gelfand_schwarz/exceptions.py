"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: validation problems exit with 2,
algebraic failures (an invariant that is not expressible in the supplied
generators) with 3, and tolerance violations with 1.
"""

import warnings


class GelfandError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(GelfandError, ValueError):
    """Mismatched number of variables, vector length or matrix size."""


class ValidationError(GelfandError, ValueError):
    """Malformed input (group description, pair spec, polynomial spec)."""


class GroupValidationError(ValidationError):
    """A matrix is not orthogonal, or the element list is malformed."""

    def __init__(self, message, element=None):
        super().__init__(message)
        self.element = element


class ClosureError(GroupValidationError):
    """A finite element set is not closed under multiplication."""

    def __init__(self, message, witness=None):
        super().__init__(message, element=witness)
        self.witness = witness


class HomogeneityError(ValidationError):
    pass


class InvarianceError(ValidationError):
    """A polynomial or function is not invariant under the group.

    ``witness`` is a group element ``k`` with ``p(k x) != p(x)`` and
    ``defect`` the polynomial ``p(k x) - p(x)`` (or the Reynolds defect).
    """

    def __init__(self, message, witness=None, defect=None):
        super().__init__(message)
        self.witness = witness
        self.defect = defect


class ExpressibilityError(GelfandError):
    """An invariant polynomial is not in the algebra generated by the generators."""

    def __init__(self, message, degree=None, residual=None, index=None):
        super().__init__(message)
        self.degree = degree
        self.residual = residual
        self.index = index


class InsufficientDepthError(GelfandError, ValueError):
    pass


class SpecialAssumptionError(GelfandError):
    """The orthogonality assumption fails; ``counterexample`` is ``(J, J', value)``."""

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


class SupportError(GelfandError, ValueError):
    """Declared support of a function does not fit in the quadrature box."""


class TruncationError(GelfandError):
    """Series truncation is not stable under doubling of the degree."""


class QuadratureError(GelfandError):
    """A quadrature doubling check moved the result beyond tolerance."""


class SupportWarning(UserWarning):
    """Unbounded support is truncated by the box; carries a tail estimate."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


def warn_support(message, estimate):
    warnings.warn(SupportWarning(f"{message} (truncation estimate {estimate:.3e})", estimate), stacklevel=3)
