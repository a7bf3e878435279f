"""Exception types raised across the package."""


class CircuitError(ValueError):
    """A circuit or gate application violates its structural contract."""


class InvalidDag(ValueError):
    """A circuit DAG violates one of its structural invariants."""


class CycleDetected(InvalidDag):
    pass


class OperandOutOfRange(CircuitError):
    pass


class DimensionMismatch(ValueError):
    pass


class TooLarge(ValueError):
    pass


class NotUnitary(ValueError):
    pass


class DisconnectedMap(ValueError):
    pass


class ZeroOriginal(ZeroDivisionError):
    pass


class MixedQubitCounts(ValueError):
    pass


class MissingCheckpoint(FileNotFoundError):
    pass
