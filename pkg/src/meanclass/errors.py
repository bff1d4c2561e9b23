"""Exception hierarchy for meanclass."""


class MeanClassError(Exception):
    """Base class for all library errors."""


class OutOfDomain(MeanClassError, ValueError):
    """A signal was evaluated outside the interval where it is defined."""


class NonPositiveH(MeanClassError, ValueError):
    pass


class NonPositiveL(MeanClassError, ValueError):
    pass


class BadP(MeanClassError, ValueError):
    pass


class EmptyWindow(MeanClassError, ValueError):
    pass


class EmptyRange(MeanClassError, ValueError):
    pass


class DomainNotSymmetric(MeanClassError, ValueError):
    pass


class ZeroFrequencyPresent(MeanClassError, ValueError):
    pass


class UnsupportedTag(MeanClassError, ValueError):
    pass


class OrderTooHigh(MeanClassError, ValueError):
    pass


class KernelZeroAtOmega(MeanClassError, ValueError):
    pass


class UnknownName(MeanClassError, KeyError):
    """Unknown generator, builtin or suite name."""

    def __str__(self):
        return Exception.__str__(self)


class ParseError(MeanClassError, ValueError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class NoClosedForm(MeanClassError, NotImplementedError):
    """Raised when an exact antiderivative of the requested order is unavailable."""
