"""Closures of the underlying Euler system, Rankine-Hugoniot solving and shock
classification.

The pressure law is ``p(rho) = rho**gamma``; the enthalpy ``h`` satisfies
``h'(rho) = p'(rho) / rho``.
"""
from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np

from .errors import DegenerateRegimeError, DomainError

__all__ = [
    "ModelParams",
    "EndState",
    "ShockData",
    "LaxFamily",
    "Sonicity",
    "enthalpy",
    "enthalpy_derivative",
    "sound_speed",
    "solve_rankine_hugoniot",
    "rankine_hugoniot_residuals",
    "classify_shock",
    "make_shock",
    "admissible_shocks",
    "admits_profile",
    "reference_shock",
]


class LaxFamily(Enum):
    LAX1 = "Lax1"
    LAX2 = "Lax2"
    NONE = "None"


class Sonicity(Enum):
    SUBSONIC = "subsonic"
    SONIC = "sonic"
    SUPERSONIC = "supersonic"


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the QHD system in the traveling frame.

    ``kappa`` is the dispersion coefficient ``k``.
    """

    gamma: float = 1.5
    mu: float = 1.0
    kappa: float = math.sqrt(2.0)
    s: float = 1.0

    def __post_init__(self):
        if not self.gamma >= 1:
            raise DomainError(f"gamma must be >= 1, got {self.gamma}")
        if not self.mu > 0:
            raise DomainError(f"mu must be > 0, got {self.mu}")
        if not self.kappa > 0:
            raise DomainError(f"kappa must be > 0, got {self.kappa}")
        self.require_splitting()

    @property
    def viscosity_dominant(self) -> bool:
        return self.mu**2 > 2 * self.kappa**2

    def require_splitting(self):
        """Raise unless ``mu**2 != 2 kappa**2``."""
        if math.isclose(self.mu**2, 2 * self.kappa**2, rel_tol=1e-14, abs_tol=0.0):
            raise DegenerateRegimeError(
                f"mu**2 == 2*kappa**2 (mu={self.mu}, kappa={self.kappa}): "
                "no consistent splitting"
            )


@dataclass(frozen=True)
class EndState:
    R: float
    U: float

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError(f"density must be positive, got R={self.R}")


@dataclass(frozen=True)
class ShockData:
    left: EndState
    right: EndState
    s: float
    lax_family: LaxFamily = LaxFamily.NONE
    sonicity: tuple = field(default=(None, None))


def _check_rho(rho):
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise DomainError("density must be positive")
    return rho


def enthalpy(rho, gamma):
    """Enthalpy ``h(rho)``: ``ln(rho)`` for ``gamma == 1``, else
    ``gamma / (gamma - 1) * rho**(gamma - 1)``."""
    r = _check_rho(rho)
    if gamma == 1:
        out = np.log(r)
    else:
        out = gamma / (gamma - 1) * r ** (gamma - 1)
    return out if np.ndim(rho) else float(out)


def enthalpy_derivative(rho, gamma, order=1):
    """Derivatives of the enthalpy with respect to density, up to order 3."""
    r = _check_rho(rho)
    if order == 0:
        return enthalpy(rho, gamma)
    # h' = gamma * rho**(gamma - 2), which also covers gamma == 1 (h' = 1/rho)
    coef = gamma
    expo = gamma - 2
    for _ in range(order - 1):
        coef *= expo
        expo -= 1
    out = coef * r**expo
    return out if np.ndim(rho) else float(out)


def sound_speed(rho, gamma):
    """``c_s(rho) = sqrt(rho * h'(rho)) = sqrt(gamma * rho**(gamma - 1))``."""
    r = _check_rho(rho)
    out = np.sqrt(gamma * r ** (gamma - 1))
    return out if np.ndim(rho) else float(out)


def rankine_hugoniot_residuals(R_plus, U_plus, R_minus, U_minus, s, gamma):
    """Residuals of the mass and Bernoulli jump conditions."""
    mass = s * (R_plus - R_minus) - (R_plus * U_plus - R_minus * U_minus)
    bern = s * (U_plus - U_minus) - (
        (0.5 * U_plus**2 + enthalpy(R_plus, gamma))
        - (0.5 * U_minus**2 + enthalpy(R_minus, gamma))
    )
    return mass, bern


def solve_rankine_hugoniot(R_plus, R_minus, params):
    """All real velocity pairs ``(U_plus, U_minus)`` satisfying the jump conditions.

    With the mass flux ``A = R(U - s)`` shared by both states, the Bernoulli
    condition reduces to ``A**2 (1/R+**2 - 1/R-**2) = 2 (h(R-) - h(R+))``, so the
    candidates are the two signs of ``A``.
    """
    if not (R_plus > 0 and R_minus > 0):
        raise DomainError("densities must be positive")
    if R_plus == R_minus:
        raise DomainError("R_plus == R_minus: degenerate shock")
    s, gamma = params.s, params.gamma
    dh = enthalpy(R_minus, gamma) - enthalpy(R_plus, gamma)
    A2 = 2.0 * dh / (1.0 / R_plus**2 - 1.0 / R_minus**2)
    if A2 < 0:
        return []
    out = []
    for A in (-math.sqrt(A2), math.sqrt(A2)):
        out.append((s + A / R_plus, s + A / R_minus))
        if A2 == 0:
            break
    return out


def _sonicity(state, gamma):
    c = sound_speed(state.R, gamma)
    speed = abs(state.U)
    if math.isclose(speed, c, rel_tol=1e-12, abs_tol=1e-14):
        return Sonicity.SONIC
    return Sonicity.SUBSONIC if speed < c else Sonicity.SUPERSONIC


def classify_shock(left, right, s, gamma):
    """Lax family from ``lambda_k(right) < s < lambda_k(left)`` and the sonicity
    of each state; returns ``(family, (left_label, right_label))``."""
    cl, cr = sound_speed(left.R, gamma), sound_speed(right.R, gamma)
    family = LaxFamily.NONE
    if right.U - cr < s < left.U - cl:
        family = LaxFamily.LAX1
    elif right.U + cr < s < left.U + cl:
        family = LaxFamily.LAX2
    return family, (_sonicity(left, gamma), _sonicity(right, gamma))


def make_shock(left, right, s, gamma):
    family, son = classify_shock(left, right, s, gamma)
    return ShockData(left=left, right=right, s=s, lax_family=family, sonicity=son)


def admissible_shocks(R_plus, R_minus, params):
    """RH branches that classify as Lax 1 or Lax 2 shocks."""
    out = []
    for U_plus, U_minus in solve_rankine_hugoniot(R_plus, R_minus, params):
        shock = make_shock(
            EndState(R_minus, U_minus), EndState(R_plus, U_plus), params.s, params.gamma
        )
        if shock.lax_family is not LaxFamily.NONE:
            out.append(shock)
    return out


def admits_profile(shock) -> bool:
    """Existence hypotheses for a traveling profile: a Lax 2-shock with subsonic
    right state or a Lax 1-shock with subsonic left state."""
    son_left, son_right = shock.sonicity
    if shock.lax_family is LaxFamily.LAX2:
        return son_right is Sonicity.SUBSONIC
    if shock.lax_family is LaxFamily.LAX1:
        return son_left is Sonicity.SUBSONIC
    return False


def reference_shock(P_plus=0.6, P_minus=0.8, params=None):
    """The Lax 2-shock used for the reference computations (P = sqrt(R))."""
    params = params or ModelParams()
    for shock in admissible_shocks(P_plus**2, P_minus**2, params):
        if shock.lax_family is LaxFamily.LAX2:
            return shock
    raise DomainError("no Lax 2 branch for these end densities")
