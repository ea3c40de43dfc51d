"""Exception hierarchy shared by every module of the package."""


class MeanError(Exception):
    """Base class for all errors raised by quasimeans.

    ``inputs`` carries the offending tuple when an error is raised while a
    check was sampling, so failures can be reproduced directly.
    """

    def __init__(self, message="", inputs=None):
        super().__init__(message)
        self.inputs = inputs


class DomainError(MeanError, ValueError):
    """An argument lies outside the domain of a generator or mean."""


class ArityMismatch(MeanError, ValueError):
    """The number of inputs does not match the number of weights."""


class InversionFailure(MeanError):
    """A generator value could not be bracketed for numeric inversion."""


class InvalidWeights(MeanError, ValueError):
    """Weights are not positive or do not sum to one."""


class DegenerateFit(MeanError):
    """The two-point affine fit has a singular system."""


class SpecParseError(MeanError, ValueError):
    """A mean or generator string does not match the registry grammar."""


class ParseError(MeanError, ValueError):
    """A rate file row could not be parsed."""

    def __init__(self, message="", row=None):
        super().__init__(message)
        self.row = row


class InvariantError(MeanError, ValueError):
    """A rate series violates positivity, ordering or length invariants."""

    def __init__(self, message="", row=None):
        super().__init__(message)
        self.row = row
