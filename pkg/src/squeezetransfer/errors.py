"""Exception types raised by the library."""


class SqueezeError(Exception):
    """Base class for all library errors."""


class NotHermitian(SqueezeError):
    pass


class NotTensorBasis(SqueezeError):
    pass


class BasisMismatch(SqueezeError):
    pass


class TruncationTooSmall(SqueezeError):
    """Fock cutoff drops more weight than allowed.

    ``leak`` holds the measured missing probability when known.
    """

    def __init__(self, message, leak=None):
        super().__init__(message)
        self.leak = leak


class OddCatAtZero(SqueezeError):
    pass


class EtaOutOfRange(SqueezeError):
    pass


class DegenerateMeanSpin(SqueezeError):
    pass


class MeanSpinNotAxial(SqueezeError):
    pass


class AxisMismatch(SqueezeError):
    pass
