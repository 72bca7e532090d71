"""Exception and warning types raised across the package."""


class PTBandsError(Exception):
    """Base class for package errors."""


class PoleProximity(PTBandsError, ValueError):
    """Raised when a closed-form dispersion formula is evaluated too close to a pole."""


class StepCountTooSmall(PTBandsError):
    """Raised when step halving changes an integration result beyond tolerance."""


class NoConvergence(PTBandsError):
    """Raised when a bracketed root search fails to converge."""


class IncompleteScan(PTBandsError):
    """Raised when an energy scan may have missed a band narrower than its grid."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class DegenerateBasisRepaired(UserWarning):
    """Closed-form basis collapsed at a factorization energy; a numeric solution was substituted."""
