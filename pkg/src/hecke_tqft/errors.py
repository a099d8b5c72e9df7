"""Exception hierarchy shared by all modules."""


class HeckeError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(HeckeError, ValueError):
    """Malformed input (bad word, bad surface description, ...)."""


class UnsupportedError(HeckeError):
    """Requested type or operation is outside the supported range."""


class GuardExceeded(UnsupportedError):
    """A size or compute guard refused the computation."""


class OddExponent(HeckeError, ValueError):
    pass


class ZeroPoint(HeckeError, ZeroDivisionError):
    pass


class UnsupportedType(UnsupportedError, ValidationError):
    pass


class SizeGuardExceeded(GuardExceeded):
    pass


class ComputeGuardExceeded(GuardExceeded):
    pass


class SystemMismatch(HeckeError, ValueError):
    pass


class BasisMismatch(HeckeError, ValueError):
    pass


class SingularGram(HeckeError, ArithmeticError):
    pass


class VerificationFailed(HeckeError, AssertionError):
    """A symbolic post-check failed; signals a bug or a bad random draw."""


class NonpolynomialResult(HeckeError, ArithmeticError):
    pass


class NotFlippable(HeckeError, ValueError):
    pass


class ShapeMismatch(HeckeError, ValueError):
    pass


class PipelineDisagreement(HeckeError, AssertionError):
    pass
