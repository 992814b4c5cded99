"""Exception types shared across the package."""


class GroupSpecError(ValueError):
    """Malformed or out-of-range group description."""


class CapExceeded(ValueError):
    """An exhaustive routine was asked to run beyond its configured size cap."""


class PreconditionError(ValueError):
    """Inputs do not satisfy the setting a structural check is defined for."""


class ClaimViolation(AssertionError):
    """A structural inequality or identity failed on a concrete instance."""
