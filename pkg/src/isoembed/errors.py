"""Exception hierarchy.

Input problems derive from :class:`InputError` (a ``ValueError``), numerical
breakdowns from :class:`NumericalFailure`. The CLI maps the two families to
different exit codes.
"""


class IsoEmbedError(Exception):
    """Base class for all package errors."""


class InputError(IsoEmbedError, ValueError):
    pass


class NumericalFailure(IsoEmbedError, ArithmeticError):
    pass


class PoleProximity(InputError):
    pass


class DegreeMismatch(InputError):
    pass


class DuplicateNodes(InputError):
    pass


class NotSupportPoint(InputError):
    pass


class NotFinitelySupported(InputError):
    pass


class RequiresZeroAtOrigin(InputError):
    pass


class NotEmbedding(InputError):
    """The measure does not implement the isometric embedding."""


class RootFindingFailure(NumericalFailure):
    pass


class QuadratureNonConvergence(NumericalFailure):
    pass


class InconsistentMeasure(NumericalFailure):
    """Reconstruction of the Schur parameter from a measure broke down."""


class NotUnique(NumericalFailure):
    pass


class ValidationFailure(NumericalFailure):
    pass


class InterpolationFailure(NumericalFailure):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DenominatorVanishes(NumericalFailure):
    pass
