"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """A mathematical parameter is outside the domain of validity."""


class UsageError(ValueError):
    """Arguments are structurally wrong (shapes, missing data, bad flags)."""


class IntegrationError(RuntimeError):
    """A quadrature or grid computation could not deliver its contract."""


class NoRootError(RuntimeError):
    """A bracketing solve found no sign change on the search interval."""


class DegenerateDirectionError(ValueError):
    """A variation direction projects to (numerically) zero."""


class ResolutionWarning(UserWarning):
    """Spectral tail is not decaying; results may be underresolved."""
