"""Exception types raised across the package."""


class OscAlgError(Exception):
    """Base class for every error raised by oscalg."""


class DenominatorZero(OscAlgError, ZeroDivisionError):
    pass


class InvalidParameter(OscAlgError, ValueError):
    pass


class NonPositiveB2(OscAlgError, ValueError):
    pass


class NotPositiveDefinite(OscAlgError, ValueError):
    """Moment data admits no positive recurrence at the requested order."""


class InsufficientMoments(OscAlgError, ValueError):
    pass


class NotSymmetric(OscAlgError, ValueError):
    pass


class DimensionMismatch(OscAlgError, ValueError):
    pass


class IndexOutOfDomain(OscAlgError, IndexError):
    pass


class TruncationTooSmall(OscAlgError, ValueError):
    pass


class ConfigInvalid(OscAlgError, ValueError):
    pass


class NotFinite(OscAlgError, ValueError):
    pass


class InsufficientTable(OscAlgError, ValueError):
    pass


class UnknownFamily(OscAlgError, ValueError):
    pass


class MalformedSpec(OscAlgError, ValueError):
    pass
