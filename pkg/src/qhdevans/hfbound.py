"""Explicit high-frequency radius beyond which no unstable eigenvalues exist.

The limiting quartic at large ``|lam|`` has roots ``z`` with ``z**2 = w`` where
``w`` solves ``w**2 - (2 mu / k**2) w + 2 / k**2 = 0`` (times ``lam~``). Grid
suprema of the profile-dependent residual coefficients bound the perturbation
``S^-1 B S`` entrywise; the radius ``C`` is the smallest modulus where
``sqrt(2) * sqrt(eps_plus**2 + eps_minus**2) < 1``.
"""
from dataclasses import asdict, dataclass
from enum import Enum
import json
import math

import numpy as np

from .errors import BoundNotFoundError, DegenerateRegimeError, DomainError

__all__ = [
    "Regime",
    "RegimeData",
    "BoundReport",
    "branch_roots",
    "dichotomy_rate",
    "coefficient_sups",
    "bounds_from_sups",
    "coefficient_suprema",
    "residual_matrix",
    "condition_value",
    "certified_radius",
    "condition_at",
    "write_bound_json",
]


class Regime(Enum):
    VISCOSITY_DOMINANT = "ViscosityDominant"
    DISPERSION_DOMINANT = "DispersionDominant"


@dataclass(frozen=True, eq=False)
class RegimeData:
    regime: Regime
    w1: complex
    w2: complex
    z: np.ndarray
    theta1: float
    theta2: float
    alpha: float


def _regime(params):
    params.require_splitting()
    if params.viscosity_dominant:
        return Regime.VISCOSITY_DOMINANT
    return Regime.DISPERSION_DOMINANT


def branch_roots(theta, params) -> RegimeData:
    """Roots of the limiting quartic at ``lam~ = exp(i theta)``.

    ``z[0], z[1]`` have negative real part, ``z[2], z[3]`` positive.
    """
    if not -math.pi / 2 - 1e-12 <= theta <= math.pi / 2 + 1e-12:
        raise DomainError("theta must lie in [-pi/2, pi/2]")
    regime = _regime(params)
    k, mu = params.kappa, params.mu
    k2 = k * k
    half = np.exp(0.5j * theta)
    if regime is Regime.VISCOSITY_DOMINANT:
        root = math.sqrt(mu**2 / k2 - 2) / k
        w_plus, w_minus = mu / k2 + root, mu / k2 - root
        a, b = math.sqrt(w_plus), math.sqrt(w_minus)
        z = np.array([-a * half, -b * half, a * half, b * half])
        lam_t = np.exp(1j * theta)
        return RegimeData(regime, w_plus * lam_t, w_minus * lam_t, z, math.nan, math.nan,
                          dichotomy_rate(params))
    base1 = mu / k2 + 1j * math.sqrt(2 - mu**2 / k2) / k
    base2 = base1.conjugate()
    theta1, theta2 = float(np.angle(base1)), float(np.angle(base2))
    modulus = math.sqrt(2) / k
    r = math.sqrt(modulus)
    e1 = r * np.exp(0.5j * (theta + theta1))
    e2 = r * np.exp(0.5j * (theta + theta2))
    z = np.array([-e1, -e2, e1, e2])
    lam_t = np.exp(1j * theta)
    return RegimeData(regime, base1 * lam_t, base2 * lam_t, z, theta1, theta2,
                      dichotomy_rate(params))


def dichotomy_rate(params) -> float:
    """Lower bound for ``min |Re z|`` over ``theta`` in ``[-pi/2, pi/2]``."""
    regime = _regime(params)
    k, mu = params.kappa, params.mu
    k2 = k * k
    if regime is Regime.VISCOSITY_DOMINANT:
        w_minus = mu / k2 - math.sqrt(mu**2 / k2 - 2) / k
        return math.sqrt(w_minus / 2)
    theta1 = math.atan2(math.sqrt(2 - mu**2 / k2) / k, mu / k2)
    return math.sqrt(math.sqrt(2) / k) * math.cos(math.pi / 4 + theta1 / 2)


def _side_grid(wave, y0, side, dy):
    if side == "+":
        n = int(round((wave.L1 + y0) / dy))
        return np.arange(n + 1) * dy
    if side == "-":
        n = int(round((wave.L1 - y0) / dy))
        return -wave.L1 + y0 + np.arange(n + 1) * dy
    raise DomainError(f"side must be '+' or '-', got {side!r}")


def coefficient_sups(wave, fields, y0, side, params, dy=0.1):
    """Grid suprema ``(S1, S2a, S2b, S3, S4)`` of the residual combinations on
    the translated profile ``zeta(x - y0)``, over ``x >= 0`` (``+``) or
    ``x <= 0`` (``-``)."""
    s, mu, k2 = params.s, params.mu, params.kappa**2
    x = _side_grid(wave, y0, side, dy) - y0

    def at(values):
        return np.interp(x, wave.y, values)

    R, dR, d2R = at(wave.R), at(wave.dR), at(wave.d2R)
    U = at(wave.U)
    f = {name: at(getattr(fields, name)) for name in
         ("f1", "f2", "f3", "f4", "f6", "g1", "g2", "g3", "g4", "df1", "df2", "df6", "d2f6")}
    logd = dR / R
    mu_R_inv2 = mu * (2 * logd**2 - d2R / R)
    fg = f["f2"] + f["g2"]
    s1 = np.max(np.abs(-f["df2"] - f["g1"] + fg * logd - mu_R_inv2))
    s2a = np.max(np.abs(
        R * (f["df1"] + f["f3"] + fg * f["df6"] + mu * f["d2f6"] + f["g3"])
        + (s - U) * (f["df2"] + f["g1"])
    ))
    s2b = np.max(np.abs(2 * (U - s) + mu * logd))
    s3 = np.max(np.abs(R * (f["f1"] + f["f4"] + 2 * mu * f["df6"] + f["g4"]) + (s - U) * fg))
    s4 = np.max(np.abs(s * mu / k2 - logd))
    return s1, s2a, s2b, s3, s4


def bounds_from_sups(sups, lambda_abs, params):
    """``(m1, m2, m3, m4)`` at modulus ``lambda_abs``."""
    if lambda_abs <= 0:
        raise DomainError("lambda_abs must be positive")
    s1, s2a, s2b, s3, s4 = sups
    c = 2 / params.kappa**2
    root = math.sqrt(lambda_abs)
    return (
        c * s1 / lambda_abs,
        c * (s2a / (lambda_abs * root) + s2b / root),
        c * s3 / lambda_abs,
        2 * s4 / root,
    )


def coefficient_suprema(wave, fields, lambda_abs, y0, side, params, dy=0.1):
    return bounds_from_sups(coefficient_sups(wave, fields, y0, side, params, dy),
                            lambda_abs, params)


def residual_matrix(regime: RegimeData, m):
    """``(B~, delta)`` with ``B~[j, k] = p_k / q_j`` and ``delta`` its Frobenius norm.

    Root moduli and distances do not depend on ``theta``; the dispersion regime
    evaluates them at ``theta = 0``.
    """
    z = regime.z
    if regime.regime is Regime.DISPERSION_DOMINANT:
        z = _roots_at_zero(regime)
    mod = np.abs(z)
    dist = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(dist, 1.0)
    if np.any(dist == 0):
        raise DegenerateRegimeError("coincident characteristic roots")
    q = np.prod(dist, axis=1)
    m = np.asarray(m, dtype=float)
    p = np.array([np.sum(m * mod_k ** np.arange(4)) for mod_k in mod])
    B = p[None, :] / q[:, None]
    return B, float(np.linalg.norm(B))


def _roots_at_zero(regime):
    r = np.sqrt(np.abs(regime.w1))
    e1 = r * np.exp(0.5j * regime.theta1)
    e2 = r * np.exp(0.5j * regime.theta2)
    return np.array([-e1, -e2, e1, e2])


def condition_value(eps_plus, eps_minus):
    return math.sqrt(2) * math.hypot(eps_plus, eps_minus)


@dataclass(frozen=True)
class BoundReport:
    regime: str
    C: float
    y0: float
    alpha: float
    delta_plus: float
    delta_minus: float
    eps_plus: float
    eps_minus: float
    condition_value: float

    def to_json(self):
        return json.dumps(asdict(self), indent=2)


def _evaluate(lam_abs, regime, sups_plus, sups_minus, params):
    _, dp = residual_matrix(regime, bounds_from_sups(sups_plus, lam_abs, params))
    _, dm = residual_matrix(regime, bounds_from_sups(sups_minus, lam_abs, params))
    ep, em = 4 * dp / regime.alpha, 4 * dm / regime.alpha
    return dp, dm, ep, em, condition_value(ep, em)


def certified_radius(wave, fields, params, y0=10.0, dy=0.1, lo=1.0, hi=1e10, rel_width=1e-3):
    """Smallest modulus (to ``rel_width``) where the dichotomy condition holds.

    Every entry of ``B~`` decreases in ``|lam|``, so the condition is monotone
    and a log-space bisection on ``[lo, hi]`` suffices.
    """
    regime = branch_roots(0.0, params)
    sp = coefficient_sups(wave, fields, y0, "+", params, dy)
    sm = coefficient_sups(wave, fields, y0, "-", params, dy)

    def holds(lam_abs):
        return _evaluate(lam_abs, regime, sp, sm, params)[-1] < 1

    if not holds(hi):
        raise BoundNotFoundError(f"condition fails up to |lambda| = {hi:g}")
    if holds(lo):
        a = b = lo
    else:
        a, b = lo, hi
        while b / a - 1 > rel_width:
            mid = math.sqrt(a * b)
            if holds(mid):
                b = mid
            else:
                a = mid
    dp, dm, ep, em, cond = _evaluate(b, regime, sp, sm, params)
    assert dp < regime.alpha / 4 and dm < regime.alpha / 4
    return BoundReport(
        regime=regime.regime.value, C=b, y0=y0, alpha=regime.alpha,
        delta_plus=dp, delta_minus=dm, eps_plus=ep, eps_minus=em, condition_value=cond,
    )


def condition_at(lambda_abs, wave, fields, params, y0=10.0, dy=0.1):
    """Dichotomy condition value ``sqrt(2) * |(eps_plus, eps_minus)|`` at a modulus."""
    regime = branch_roots(0.0, params)
    sp = coefficient_sups(wave, fields, y0, "+", params, dy)
    sm = coefficient_sups(wave, fields, y0, "-", params, dy)
    return _evaluate(lambda_abs, regime, sp, sm, params)[-1]


def write_bound_json(report: BoundReport, path):
    with open(path, "w") as fh:
        fh.write(report.to_json())
