"""Exception hierarchy shared by all modules."""


class BoolNormError(Exception):
    """Base class for every error raised by this package."""


class FormatError(BoolNormError, ValueError):
    """Input has the wrong shape or length."""


class ParseError(FormatError):
    """Text input could not be parsed.

    ``pos`` is the 0-based character offset of the offending token (or
    ``None`` when the problem is global, e.g. a wrong hex length).
    """

    def __init__(self, message, pos=None):
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
        self.pos = pos


class DimensionError(BoolNormError, ValueError):
    pass


class DomainError(BoolNormError, ValueError):
    pass


class InvalidFlatError(BoolNormError, ValueError):
    pass


class InvalidPermutationError(BoolNormError, ValueError):
    pass


class InvalidCertificateError(BoolNormError, ValueError):
    pass


class SpectralError(BoolNormError, ValueError):
    """The function does not have the spectrum an operation requires."""


class CapacityError(BoolNormError):
    pass


class BudgetExceededError(BoolNormError):
    """An enumeration would exceed the configured budget.

    Raised instead of silently truncating results.
    """

    def __init__(self, message, count=None, budget=None):
        super().__init__(message)
        self.count = count
        self.budget = budget
