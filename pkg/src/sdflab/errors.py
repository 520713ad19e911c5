"""Shared exception types.

Every error carries an exit code used by the CLI dispatcher:
1 = a verified numerical claim failed, 2 = usage, 3 = precondition or
hypothesis violation.
"""


class SdfLabError(Exception):
    exit_code = 1


class CheckFailed(SdfLabError):
    """A numeric inequality or identity that should hold did not."""
    exit_code = 1


class SearchExhausted(SdfLabError):
    """A constructive search that theory says must succeed found nothing."""
    exit_code = 1


class UsageError(SdfLabError):
    exit_code = 2


class PreconditionFailed(SdfLabError):
    exit_code = 3


class HypothesisViolated(PreconditionFailed):
    """A size/shape hypothesis of a verified statement does not hold."""


class CapExceeded(PreconditionFailed):
    """Input is beyond the documented exact-computation cap."""


class EmptyProgression(PreconditionFailed):
    pass


class OutOfUniverse(PreconditionFailed):
    pass


class NotSquareDifferenceFree(PreconditionFailed):
    pass


class UnknownModulus(PreconditionFailed):
    pass


class NotInjective(PreconditionFailed):
    pass


class StepNotCoprime(PreconditionFailed):
    pass


class RhoTooLarge(PreconditionFailed):
    pass


class NotGlobal(PreconditionFailed):
    pass


class NotPrime(PreconditionFailed):
    pass


class BadPrimeClass(PreconditionFailed):
    pass


class EpsilonTooSmall(PreconditionFailed):
    pass


class Infeasible(PreconditionFailed):
    pass
