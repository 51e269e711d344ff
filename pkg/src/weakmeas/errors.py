"""Exception types raised across the package."""


class MeasurementError(Exception):
    """Base class for all errors raised by weakmeas."""


class NonHermitianInput(MeasurementError, ValueError):
    pass


class DimensionMismatch(MeasurementError, ValueError):
    pass


class NegligibleOutcome(MeasurementError, ValueError):
    """Conditioning was requested on an outcome whose density is below the floor."""


class ZeroDiagonal(MeasurementError, ValueError):
    pass


class GridOverflow(MeasurementError, ValueError):
    """A shifted pointer wavepacket leaks too much mass past the grid edge."""


class ConfigError(MeasurementError, ValueError):
    pass
