"""Exception and warning types raised by the toolkit."""


class QHDError(Exception):
    """Base class for all toolkit errors."""


class DomainError(QHDError, ValueError):
    """An argument lies outside the domain of the operation."""


class InconsistentEndStatesError(QHDError, ValueError):
    """The two end states do not share the same mass flux."""


class NoConnectionError(QHDError, RuntimeError):
    """The unstable manifold of the saddle does not reach the other end state."""


class VacuumError(QHDError, RuntimeError):
    """The profile amplitude reached zero."""


class OnBoundaryError(QHDError, ValueError):
    """The spectral parameter lies on an essential-spectrum curve."""


class DegenerateRegimeError(QHDError, ValueError):
    """mu**2 == 2 * kappa**2, where consistent splitting is not available."""


class EssentialSpectrumError(QHDError, ValueError):
    """The limit matrices do not have a (2, 2) splitting at this lambda."""


class DegenerateEigenvalueError(QHDError, ValueError):
    """The growth-rate eigenvalue cannot be selected unambiguously."""


class IntegrationError(QHDError, RuntimeError):
    """The ODE integrator failed; ``lam`` holds the offending spectral parameter."""

    def __init__(self, message, lam=None):
        super().__init__(message)
        self.lam = lam


class BoundNotFoundError(QHDError, RuntimeError):
    """The high-frequency condition could not be met below the search ceiling."""


class ContinuationError(QHDError, RuntimeError):
    """Eigenvalue tracking along a contour failed at node ``index``."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ZeroOnContourError(QHDError, ValueError):
    """The Evans function vanishes at a contour node."""


class UnderResolvedWarning(UserWarning):
    """A phase step along the contour exceeded pi/2; refine the contour."""
