"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised for malformed arguments (empty sequences, shape mismatch, bad parameters)."""


class NotAvailableError(LookupError):
    """Raised when a requested tabulated object (e.g. a kernel length) is not provided."""


class NotMeasurableError(ValueError):
    """Raised when a pattern metric cannot be measured on the given grid."""
