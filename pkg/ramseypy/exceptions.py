"""Exceptions defined within ramseypy"""


class Error(Exception):
    """Base class for other exceptions"""

    pass


class ConfigFileNotWritten(Error):
    """Raised when the configuration file cannot be written"""

    pass


class ConfigFileNotRead(Error):
    """Raised when the configuration file cannot be read"""

    pass


class InvalidParameter(Error, ValueError):
    """Raised when an input is outside the allowed domain"""

    pass


class QuadratureError(Error):
    """Raised when a frequency integral does not converge"""

    def __init__(self, message, abserr=None):
        super().__init__(message)
        self.abserr = abserr


class SpecialFunctionError(Error):
    """Raised when a special function is evaluated at a pole or outside
    its series-convergent domain"""

    pass


class UnsupportedRegime(Error):
    """Raised when an operation is not defined for the given regime,
    cutoff or dimension"""

    pass


class UnsupportedState(Error):
    """Raised when an initial state is not handled by the requested path"""

    pass


class EnumerationTooLarge(Error):
    """Raised when a full basis enumeration would be too large"""

    pass


class NotPositiveSemidefinite(Error):
    """Raised when a covariance matrix has significantly negative eigenvalues"""

    pass


class ManifestError(Error):
    """Raised when a run manifest is malformed"""

    pass
