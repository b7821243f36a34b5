"""Exception hierarchy shared by all modules."""


class ViroPatchError(Exception):
    """Base class; ``code`` is the CLI exit status the error maps to."""

    code = 2


class InputError(ViroPatchError):
    pass


class NotFullDimensional(InputError):
    pass


class NormalizationImpossible(InputError):
    pass


class NotFullCodimension(InputError):
    """Raised when the kernel of the exponent matrix is trivial (k = 0)."""


class InvalidFace(InputError):
    pass


class DimensionTooLarge(InputError):
    pass


class TooManyPoints(InputError):
    pass


class WrongCodimension(InputError):
    pass


class OutOfDomain(InputError):
    pass


class SignMismatch(InputError):
    pass


class EmptyDomain(InputError):
    pass


class DegenerateSimplex(InputError):
    pass


class NonGenericLifting(InputError):
    pass


class NotClassifiable(InputError):
    pass


class BoundaryCase(ViroPatchError):
    pass


class ResolutionTooCoarse(ViroPatchError):
    """Numeric-instability gate: counts changed under resolution doubling."""

    code = 3
