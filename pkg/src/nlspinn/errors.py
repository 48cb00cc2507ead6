"""Exception types shared across the package."""


class NlsPinnError(Exception):
    """Base class for all package-specific errors."""


class DomainError(NlsPinnError):
    """A parameter lies outside the admissible range of an operation."""


class PoleError(NlsPinnError):
    """A closed-form denominator is too close to zero to evaluate safely."""


class EmptyGrid(NlsPinnError):
    """A discrete functional was asked to reduce over zero collocation points."""


class NonFinite(NlsPinnError):
    """A sampled value is NaN or Inf where a finite number is required."""


class NonFiniteGradient(NlsPinnError):
    """A parameter gradient contains NaN/Inf (degenerate loss configuration)."""


class NonUniformGrid(NlsPinnError):
    """Spectral analysis requires equally spaced sample points."""


class LineSearchFailed(NlsPinnError):
    """No step satisfying the strong Wolfe conditions was found."""


class ConfigError(NlsPinnError):
    """A run configuration file is malformed or contains unknown keys."""
