"""Exception types shared across the package.

The CLI maps these onto process exit codes, so raising the right class
matters more than the message text.
"""


class Lut4dError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(Lut4dError, ValueError):
    """A parameter value violates a documented precondition."""


class ShapeError(Lut4dError, ValueError):
    """Operands have incompatible dimensions."""


class NumericError(Lut4dError, ArithmeticError):
    """A computation produced NaN/Inf where finite values are required."""


class NanLossError(NumericError):
    """Training loss went non-finite; carries a diagnostic snapshot."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
