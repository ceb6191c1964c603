"""Exception hierarchy shared by every module."""


class NuqftError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(NuqftError, ValueError):
    """Operand shapes do not compose."""


class ContractError(NuqftError, ValueError):
    """An input violates a documented precondition."""


class NumericError(NuqftError, ArithmeticError):
    """An iterative routine failed to converge or a numeric check failed."""


class ConvergenceError(NumericError):
    def __init__(self, message, sweeps):
        super().__init__(message)
        self.sweeps = sweeps


class DegenerateFrameError(ContractError):
    """Frame vectors are rank deficient for the requested operation."""


class PartitionError(ContractError):
    """An angle does not belong to the interval it was assigned to."""


class ConfigurationError(ContractError):
    """Pipeline pieces were built for inconsistent configurations."""


class OutOfRegimeError(ContractError):
    """A bound was evaluated outside the domain on which it is valid."""


class InputFormatError(NuqftError, ValueError):
    """A data file could not be parsed. Carries the offending line number."""

    def __init__(self, message, line=None, path=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line
        self.path = path
