"""Input checks shared by the estimator wrappers and the CLI."""
import numpy as np

from .errors import DomainError


def check_lambdas(lams, allow_scalar=True):
    """Return a 1-D complex array of finite spectral parameters."""
    arr = np.asarray(lams)
    if arr.ndim == 0:
        if not allow_scalar:
            raise DomainError("expected an array of spectral parameters")
        arr = arr.reshape(1)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
        arr = arr[:, 0] + 1j * arr[:, 1]
    if arr.ndim != 1:
        raise DomainError(f"spectral parameters must be 1-D, got shape {arr.shape}")
    arr = arr.astype(complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError("spectral parameters must be finite")
    return arr


def check_positive(name, value):
    if not np.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return float(value)


def check_fitted(estimator, attrs):
    from sklearn.exceptions import NotFittedError

    missing = [a for a in attrs if not hasattr(estimator, a)]
    if missing:
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first"
        )
