"""Exception hierarchy shared by the library and the CLI."""


class NHScatterError(Exception):
    """Base class for all package errors."""


class InvalidInputError(NHScatterError, ValueError):
    """An argument is outside the domain of the operation."""


class AtSpectralSingularityError(NHScatterError, ArithmeticError):
    """Scattering amplitudes diverge because ``m22`` vanished at ``k``."""

    def __init__(self, k, m22):
        self.k = k
        self.m22 = m22
        super().__init__(f"|m22| = {abs(m22):.3e} at k = {k!r}: amplitudes diverge")


class ExceptionalPointError(NHScatterError, ArithmeticError):
    """The matrix is defective (or numerically indistinguishable from it)."""

    def __init__(self, message, eigenvalues=None):
        self.eigenvalues = eigenvalues
        super().__init__(message)


class NoPositiveMetricError(NHScatterError, ArithmeticError):
    """A positive metric cannot exist because the spectrum is not real."""

    def __init__(self, message, eigenvalues=None):
        self.eigenvalues = eigenvalues
        super().__init__(message)


class ConfigurationError(NHScatterError, ValueError):
    """Oracle integration settings cannot reach the requested accuracy."""


class ParseError(NHScatterError, ValueError):
    """Input file does not follow the expected JSON schema."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
