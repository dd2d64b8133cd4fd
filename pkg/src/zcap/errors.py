"""Exception types raised by the library."""


class ZcapError(Exception):
    """Base class for domain errors."""


class DegenerateInterval(ZcapError, ValueError):
    pass


class NoConvergence(ZcapError):
    pass


class CapacityAtLeastOne(ZcapError):
    """The set has capacity >= 1 (or no monic polynomial of norm < 1 was found)."""


class BudgetExceeded(ZcapError):
    pass


class OutOfRange(ZcapError, ValueError):
    pass


class NotInterpolable(ZcapError):
    pass


class HypothesisViolated(ZcapError, ValueError):
    pass


class KernelIncompleteWarning(UserWarning):
    """The kernel enumeration is not certified complete."""
