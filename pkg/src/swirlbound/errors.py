"""Exception hierarchy.

Every error raised deliberately by the package derives from
:class:`SwirlboundError`; the precondition failures additionally derive from
:class:`ValueError` so callers that only care about bad input can catch that.
"""


class SwirlboundError(Exception):
    pass


# -- grids and regions -------------------------------------------------------

class GridError(SwirlboundError, ValueError):
    pass


class AxisIncludedError(GridError):
    """r_min <= 0: the 1/r terms are singular on the axis."""


class GridTooCoarseError(GridError):
    pass


class EmptyRegionError(SwirlboundError, ValueError):
    pass


class RegionNotCoveredError(SwirlboundError, ValueError):
    pass


# -- solvers -------------------------------------------------------------------

class NonConvergenceError(SwirlboundError, RuntimeError):
    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"elliptic solve did not converge: {iterations} iterations, "
            f"relative residual {residual:.3e}")


class CflViolationError(SwirlboundError, ValueError):
    def __init__(self, dt, limit):
        self.dt = dt
        self.limit = limit
        super().__init__(f"dt={dt:.6g} exceeds the stability limit {limit:.6g}")


# -- norms and cut-offs --------------------------------------------------------

class NegativeLambdaError(SwirlboundError, ValueError):
    pass


class BadSigmaOrderError(SwirlboundError, ValueError):
    pass


class DeltaOutOfRangeError(SwirlboundError, ValueError):
    pass


class GammaNotGreaterThanOneError(SwirlboundError, ValueError):
    pass


class NonPositiveFError(SwirlboundError, ValueError):
    pass


# -- configuration and files ---------------------------------------------------

class ParseError(SwirlboundError, ValueError):
    def __init__(self, line, key, message="unknown or malformed entry"):
        self.line = line
        self.key = key
        super().__init__(f"line {line}: {key}: {message}")


class ValidationError(SwirlboundError, ValueError):
    def __init__(self, key, reason):
        self.key = key
        self.reason = reason
        super().__init__(f"{key}: {reason}")


class CheckpointError(SwirlboundError, IOError):
    pass


class BadMagicError(CheckpointError):
    pass


class VersionMismatchError(CheckpointError):
    pass


class TruncatedFileError(CheckpointError):
    pass


class ShapeMismatchError(CheckpointError):
    pass
