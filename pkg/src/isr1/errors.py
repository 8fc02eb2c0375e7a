"""Exception types raised by the isr1 package."""


class Isr1Error(ValueError):
    """Base class for all domain errors in this package."""


class NotCoprime(Isr1Error):
    pass


class NotUnimodular(Isr1Error):
    pass


class NotPrimitive(Isr1Error):
    pass


class NotRankOne(Isr1Error):
    pass


class NotNilpotent(Isr1Error):
    pass


class CriterionFails(Isr1Error):
    pass


class DivisibilityFails(Isr1Error):
    pass


class VerificationFailed(Isr1Error):
    """A constructed certificate did not re-verify.

    This indicates an internal bug rather than bad input.
    """


class NotApplicable(Isr1Error):
    pass


class ModulusTooLarge(Isr1Error):
    pass
