"""Exception hierarchy shared by every module."""


class FFLError(Exception):
    """Base class for all library errors."""


class FieldMismatchError(FFLError, TypeError):
    """Operands were built over different field specifications."""


class FieldZeroDivisionError(FFLError, ZeroDivisionError):
    """Inversion of the zero element."""


class PrecisionError(FFLError, ArithmeticError):
    """Not enough precision (series or p-adic digits) to answer.

    ``precision`` records the absolute precision (or digit count) at which
    the computation ran out.
    """

    def __init__(self, message, precision=None):
        super().__init__(message)
        self.precision = precision


class CapExceededError(FFLError):
    """An enumeration would exceed the configured cap."""

    def __init__(self, what, size, cap):
        super().__init__(
            f"{what} needs {size} elements, above enumeration cap {cap}; "
            "raise the cap explicitly (--cap / cap=) to proceed"
        )
        self.size = size
        self.cap = cap


class HypothesisError(FFLError, ValueError):
    """Arguments violate the hypotheses an operation is stated for."""


class DivergenceError(HypothesisError):
    """Evaluation point lies outside the Euler-product half-plane |x| > lambda_t^beta."""


class InconsistencyError(FFLError, AssertionError):
    """A proven identity failed numerically: indicates an arithmetic bug."""
