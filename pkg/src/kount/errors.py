"""Exception hierarchy shared by all kount modules."""


class KountError(Exception):
    """Base class for every error raised by kount."""


class InputError(KountError, ValueError):
    """Malformed or inconsistent input (bad labels, non-closed set lists, unknown ids)."""


class UnsupportedInputError(InputError):
    """The operation is not defined for this kind of complex (e.g. L on a CW complex)."""


class DomainError(KountError, ValueError):
    """Argument outside the mathematical domain of the operation (t = 0, nonpositive eigenvalue)."""


class SingularMatrixError(KountError, ArithmeticError):
    pass


class SizeLimitError(KountError, ValueError):
    """Refused because the input exceeds a desk-scale size guard."""


class FloatConversionError(KountError, OverflowError):
    pass
