"""Essential-spectrum curves and consistent-splitting root counts."""
from dataclasses import dataclass
import csv

import numpy as np

from .errors import OnBoundaryError
from .model import enthalpy_derivative

__all__ = [
    "SpectralCurvePoint",
    "dispersion_roots",
    "dispersion_residual",
    "essential_stability_check",
    "char_poly_coefficients",
    "characteristic_roots",
    "splitting_count",
    "write_curve_csv",
]

DEFAULT_XI = np.linspace(-20.0, 20.0, 401)


@dataclass(frozen=True)
class SpectralCurvePoint:
    xi: float
    lambda1: complex
    lambda2: complex


def _rhp(state, gamma):
    return state.R * enthalpy_derivative(state.R, gamma)


def dispersion_roots(xi, state, params):
    """Both roots ``lambda(xi)`` of the dispersion relation (vectorized in ``xi``).

    Uses ``D = p + i q`` with ``p = -4 R h'(R) xi**2 + (mu**2 - 2k**2) xi**4`` and
    ``q = 4 mu U xi**3`` and the principal square root.
    """
    xi = np.asarray(xi, dtype=float)
    mu, k2, s = params.mu, params.kappa**2, params.s
    U = state.U
    p = -4 * _rhp(state, params.gamma) * xi**2 + (mu**2 - 2 * k2) * xi**4
    q = 4 * mu * U * xi**3
    sqrtD = np.sqrt(p + 1j * q)
    base = -mu * xi**2 + 2j * xi * (s - U)
    return (base + sqrtD) / 2, (base - sqrtD) / 2


def dispersion_residual(lam, xi, state, params):
    mu, k2, s, U = params.mu, params.kappa**2, params.s, state.U
    return (
        lam**2
        + (mu * xi**2 - 2j * xi * (s - U)) * lam
        + (_rhp(state, params.gamma) - (s - U) ** 2) * xi**2
        + 0.5 * k2 * xi**4
        - 1j * s * mu * xi**3
    )


def essential_stability_check(state, params, xi_grid=None):
    """Scan the curves over ``xi_grid`` with both criteria.

    Returns a dict with the curve points, the maximum real part, the closed-form
    sign quantity ``2 (U**2 - R h'(R)) xi**6 - k**2 xi**8`` per node, and whether
    its sign agrees with the direct root signs at every node.
    """
    xi = DEFAULT_XI if xi_grid is None else np.asarray(xi_grid, dtype=float)
    l1, l2 = dispersion_roots(xi, state, params)
    max_re = np.maximum(l1.real, l2.real)
    sign_quantity = (
        2 * (state.U**2 - _rhp(state, params.gamma)) * xi**6 - params.kappa**2 * xi**8
    )
    # B < 0 exactly when both roots lie strictly in the left half-plane
    agree = (sign_quantity < 0) == (max_re < 0)
    return {
        "xi": xi,
        "lambda1": l1,
        "lambda2": l2,
        "max_real_part": float(np.max(max_re)),
        "max_real_part_nonzero_xi": float(np.max(max_re[xi != 0])) if np.any(xi != 0) else None,
        "sign_quantity": sign_quantity,
        "criteria_agree": agree,
        "all_agree": bool(np.all(agree)),
    }


def char_poly_coefficients(lam, state, params):
    """Coefficients (highest degree first) of ``det(nu I - M)`` at an end state."""
    mu, k2, s, U = params.mu, params.kappa**2, params.s, state.U
    return np.array(
        [
            1.0,
            2 * s * mu / k2,
            2 / k2 * ((s - U) ** 2 - _rhp(state, params.gamma) - lam * mu),
            4 * (U - s) / k2 * lam,
            2 * lam**2 / k2,
        ],
        dtype=complex,
    )


def characteristic_roots(lam, state, params):
    """All four roots of the quartic, via companion eigenvalues plus one Newton
    polish per root."""
    c = char_poly_coefficients(lam, state, params)
    roots = np.roots(c)
    dc = np.polyder(c)
    for i, r in enumerate(roots):
        d = np.polyval(dc, r)
        if d != 0:
            step = np.polyval(c, r) / d
            cand = r - step
            if abs(np.polyval(c, cand)) <= abs(np.polyval(c, r)):
                roots[i] = cand
    return roots[np.argsort(roots.real)]


def splitting_count(lam, state, params, tol=1e-10):
    """``(n_unstable, n_stable)`` counts of characteristic roots."""
    params.require_splitting()
    roots = characteristic_roots(lam, state, params)
    if np.any(np.abs(roots.real) < tol):
        raise OnBoundaryError(f"lambda={lam} lies on an essential-spectrum curve")
    n_unstable = int(np.sum(roots.real > 0))
    return n_unstable, 4 - n_unstable


def write_curve_csv(report, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["xi", "re_lambda1", "im_lambda1", "re_lambda2", "im_lambda2"])
        for xi, a, b in zip(report["xi"], report["lambda1"], report["lambda2"]):
            writer.writerow([repr(float(v)) for v in (xi, a.real, a.imag, b.real, b.imag)])
