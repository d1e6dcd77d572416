"""Exception types raised across the package."""


class SymconeError(Exception):
    """Base class for all errors raised by symcone."""


class PolynomialSyntaxError(SymconeError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class VariableIndexError(SymconeError, ValueError):
    pass


class SpaceMismatchError(SymconeError, ValueError):
    pass


class ZeroPolynomialError(SymconeError, ValueError):
    """The zero polynomial has no (multi)degree."""


class DimensionMismatchError(SymconeError, ValueError):
    pass


class SingularMatrixError(SymconeError, ValueError):
    pass


class InvalidFamilyError(SymconeError, ValueError):
    """A polynomial family is empty, inhomogeneous or linearly dependent."""


class GuardExceededError(SymconeError):
    """A size guard for an exponential-time routine was exceeded."""


class SchemaError(SymconeError, ValueError):
    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path
