"""Exception and warning classes."""


class TFDecayError(Exception):
    """Base class for all errors raised by tfdecay."""


# weights
class NotNondecreasing(TFDecayError):
    pass


class Bounded(TFDecayError):
    pass


class BadIndex(TFDecayError, ValueError):
    pass


class NotConvex(TFDecayError):
    pass


class Inconclusive(TFDecayError):
    pass


# hermite
class OrderTooLarge(TFDecayError, ValueError):
    pass


class QuadratureUnderresolved(TFDecayError):
    pass


class WindowTooShort(TFDecayError, ValueError):
    pass


# transforms
class TailBoundExceeded(TFDecayError):
    pass


class GridTooShort(TFDecayError):
    pass


class EdgeMassWarning(UserWarning):
    """Function mass at the edge of a sampling window exceeds the threshold."""


class WindowingWarning(UserWarning):
    """Grid samples do not cover the quadrature nodes' effective support."""


# sector
class TailDivergent(TFDecayError):
    pass


class OutsideSector(TFDecayError, ValueError):
    pass


class BoundaryViolated(TFDecayError):
    pass


class Unstable(TFDecayError):
    pass


# cli
class SchemaError(TFDecayError, ValueError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class PreconditionFailed(TFDecayError):
    pass


class ReportIOError(TFDecayError, OSError):
    pass
