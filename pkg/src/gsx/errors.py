"""Exception hierarchy for gsx.

Everything raised on purpose by the library derives from :class:`GSXError`.
Numerical failures (the standing assumptions of the method do not hold for a
given input) derive from :class:`NumericalError`; the CLI maps those to exit
code 3 and everything configuration-related to exit code 2.
"""


class GSXError(Exception):
    """Base class for all library errors."""


class NumericalError(GSXError):
    """An input violates a numerical assumption (distinct spectrum, conditioning, ...)."""


class NotDiagonalizable(NumericalError):
    pass


class RepeatedEigenvalues(NumericalError):
    pass


class IllConditioned(NumericalError):
    pass


class DuplicateNodes(NumericalError, ValueError):
    pass


class DuplicatePhases(GSXError, ValueError):
    pass


class PhaseOutOfRange(GSXError, ValueError):
    pass


class IndexOutOfRange(GSXError, IndexError):
    pass


class DimensionMismatch(GSXError, ValueError):
    pass


class WrongDomain(GSXError, ValueError):
    pass


class IncompatibleShift(GSXError, ValueError):
    pass


class ZeroSpectrum(NumericalError):
    pass


class FastPathUnavailable(GSXError):
    pass


class DegreeMismatch(GSXError, ValueError):
    pass


class LengthExceedsDegree(GSXError, ValueError):
    pass


class SingularNormalEquations(NumericalError):
    pass


class ConditionsNotMet(GSXError):
    pass


class SpectralNull(NumericalError):
    pass


class ZeroReference(GSXError, ValueError):
    pass


class ConfigError(GSXError, ValueError):
    pass


class ParseError(GSXError, ValueError):
    """Malformed input file. ``line`` and ``column`` are 1-based."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where = f" ({where})"
        super().__init__(f"{message}{where}")
