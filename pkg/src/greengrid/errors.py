"""Exception hierarchy shared across the package.

Every error raised by greengrid derives from :class:`GreenGridError` so
callers (and the CLI) can distinguish domain failures from programming
errors.
"""


class GreenGridError(Exception):
    """Base class for all greengrid errors."""


class InvalidTopology(GreenGridError):
    """Topology failed validation; the message lists the violations."""


class SingularReducedMatrix(GreenGridError):
    """The slack-reduced admittance matrix is not invertible.

    Signals a disconnected or otherwise degenerate network.
    """


class PartitionMismatch(GreenGridError):
    """Load/green bus sets overlap or do not cover the non-slack buses."""


class DimensionMismatch(GreenGridError):
    """Vector lengths do not match the loss-matrix block partition."""


class NoConvergence(GreenGridError):
    """An iterative solver failed to reach its residual tolerance."""


class BelowCircuitPower(GreenGridError):
    """Station power is below its constant circuit power."""


class UndefinedMetric(GreenGridError):
    """Carbon-efficiency ratio is undefined (no brown energy imported)."""


class Infeasible(GreenGridError):
    """The constraint set admits no solution; message carries a certificate."""


class ParseError(GreenGridError):
    """Malformed scenario, feeder, or trace file (message has line/field)."""


class ValidationError(GreenGridError):
    """A parsed file is structurally sound but semantically invalid."""


class GapError(GreenGridError):
    """A trace is missing (slot, id) samples; message lists the gaps."""


class NegativeValue(GreenGridError):
    """A trace value is negative where only nonnegative values are allowed."""


class MismatchedHorizons(GreenGridError):
    """Run results cover different horizons and cannot be compared."""
