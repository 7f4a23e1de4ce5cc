"""Exception hierarchy.

Input problems derive from :class:`InputError` and numeric problems from
:class:`NumericError`; the CLI maps the two families onto distinct exit codes.
"""


class CorranError(Exception):
    """Base class for every error raised by this package."""


class InputError(CorranError, ValueError):
    """The input table is malformed or violates a table invariant."""


class MissingField(InputError):
    def __init__(self, field):
        self.field = field
        super().__init__(f"field {field!r} not found in header")


class BadValue(InputError):
    def __init__(self, value, line, reason="not a number"):
        self.value = value
        self.line = line
        super().__init__(f"line {line}: bad value {value!r} ({reason})")


class EmptyInput(InputError):
    def __init__(self, what="input"):
        super().__init__(f"{what} has no data rows")


class RaggedRow(InputError):
    def __init__(self, line, expected, got):
        self.line = line
        super().__init__(f"line {line}: expected {expected} cells, got {got}")


class DuplicateLabel(InputError):
    def __init__(self, label, axis="row"):
        self.label = label
        self.axis = axis
        super().__init__(f"duplicate {axis} label {label!r}")


class ZeroMargin(InputError):
    def __init__(self, label, axis):
        self.label = label
        self.axis = axis
        super().__init__(f"{axis} {label!r} has a zero total")


class NegativeEntry(InputError):
    def __init__(self, row, col, value):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(f"negative entry {value!r} at row {row!r}, column {col!r}")


class TooSmall(InputError):
    def __init__(self, shape):
        self.shape = shape
        super().__init__(f"table must be at least 2x2, got {shape[0]}x{shape[1]}")


class InputMismatch(InputError):
    """Model, residuals and associations were not derived from the same table."""


class UnknownNormalization(CorranError, ValueError):
    def __init__(self, name):
        self.name = name
        super().__init__(
            f"unknown normalization {name!r}; expected principal, standard or symmetric")


class BadDims(CorranError, ValueError):
    def __init__(self, dims, n_axes):
        self.dims = dims
        self.n_axes = n_axes
        super().__init__(
            f"invalid biplot dimensions {tuple(dims)}: need two distinct axes in 1..{n_axes}")


class NumericError(CorranError, ArithmeticError):
    """A numerical routine failed."""


class NonFinite(NumericError, ValueError):
    def __init__(self, what="input"):
        super().__init__(f"{what} contains NaN or infinite values")


class ConvergenceFailure(NumericError):
    def __init__(self, sweeps, residual):
        self.sweeps = sweeps
        self.residual = residual
        super().__init__(
            f"SVD did not converge after {sweeps} sweeps "
            f"(largest scaled off-diagonal {residual:.3e})")


class TrivialAxisMissing(NumericError):
    def __init__(self, leading):
        self.leading = leading
        super().__init__(
            f"leading singular value of the scaled table is {leading!r}, expected 1")
