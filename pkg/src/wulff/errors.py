"""Exception hierarchy shared by every module of the package."""


class WulffError(ValueError):
    """Base class for all recoverable input and geometry errors."""


# geometry
class DegenerateInput(WulffError):
    """Points are affinely dependent (span fewer than d dimensions)."""


class Unbounded(WulffError):
    """Half-space normals fail to positively span R^d."""


class DimensionMismatch(WulffError):
    pass


class NonpositiveScale(WulffError):
    pass


class OriginNotInterior(WulffError):
    """The origin is not strictly inside the body (polarity needs it)."""


# integrand
class IntegrandError(WulffError):
    pass


class SchemaError(IntegrandError):
    pass


class InvalidEnergy(IntegrandError):
    pass


class SpanError(IntegrandError):
    pass


class UnlistedDirection(IntegrandError):
    pass


# construction / rearrangement / energy
class InsufficientSamples(WulffError):
    pass


class ResolutionTooLow(WulffError):
    pass


class EmptySlices(WulffError):
    pass


class NonpositiveTarget(WulffError):
    pass


class VolumeMismatch(WulffError):
    pass
