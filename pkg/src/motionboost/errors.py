"""Exception hierarchy shared by every module."""


class BoostError(Exception):
    """Base class for all errors raised by motionboost."""


class ShapeError(BoostError, ValueError):
    """Operands have incompatible dimensions, roles or symmetry."""


class SingularMatrixError(BoostError, ArithmeticError):
    pass


class EmptyClipError(BoostError, ValueError):
    pass


class DegenerateLengthError(BoostError, ValueError):
    """A clip is too short for the requested operation (e.g. one frame)."""


class PyramidDepthError(BoostError, ValueError):
    pass


class RangeError(BoostError, ValueError):
    pass


class ValidationError(BoostError, ValueError):
    pass


class FormatError(BoostError, ValueError):
    """A file exists but does not decode to what we expect."""


class ClipIOError(BoostError, OSError):
    pass


class NoSignalError(BoostError, ValueError):
    pass
