"""Exception types raised across the package."""


class ConvexError(Exception):
    """Base class for every error raised by barycentric."""


class DimensionError(ConvexError, ValueError):
    pass


class DegenerateError(ConvexError, ValueError):
    """A weight or distribution sits on a branch the operation cannot handle."""


class DomainError(ConvexError, ValueError):
    """A point does not belong to the model's carrier."""


class UnsupportedWeightError(ConvexError, ValueError):
    """A table model was queried at a weight outside its declared grid."""


class NoMetricError(ConvexError):
    pass


class WitnessError(ConvexError, ValueError):
    pass


class InvalidQuadError(ConvexError, ValueError):
    pass


class UnrepresentableDirectionError(ConvexError, ValueError):
    pass


class PipelineError(ConvexError):
    pass


class SpecError(ConvexError, ValueError):
    """Malformed model specification.

    ``field`` is a dotted/indexed path such as ``generators[1][0]``.
    """

    def __init__(self, field, message):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")
