"""Exception hierarchy.

Every error carries a short machine-readable ``code`` (the class name) and the
process exit code the CLI maps it to.
"""


class MotocellError(Exception):
    exit_code = 2

    @property
    def code(self):
        return type(self).__name__


class ValidationError(MotocellError):
    """Malformed or out-of-contract input."""


class InvalidType(ValidationError):
    pass


class InvalidParam(ValidationError):
    pass


class UnknownName(ValidationError):
    pass


class PointingMismatch(ValidationError):
    pass


class DimensionTooSmall(ValidationError):
    pass


class NotEvenPure(ValidationError):
    pass


class InconsistentDimensions(ValidationError):
    pass


class NotAtacc(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class AmbientMismatch(ValidationError):
    pass


class EmptyArrangement(ValidationError):
    pass


class NonNormalized(ValidationError):
    pass


class NotHyperplanes(ValidationError):
    pass


class NonSplit(MotocellError):
    exit_code = 3


class ResourceLimit(MotocellError):
    exit_code = 3
