"""Traveling-wave profiles as heteroclinic orbits of the planar amplitude ODE.

In the traveling coordinate ``y`` the continuity equation integrates to
``R (U - s) = A`` and the momentum equation to

    -s U + U**2/2 + h(R) - mu s R'/R - k**2 P''/P = B0,

with ``R = P**2``. Eliminating ``U = s + A/P**2`` leaves a second-order ODE for
the amplitude ``P`` whose fixed points are the end states.
"""
from dataclasses import dataclass
import csv
import math

import numpy as np
from scipy.integrate import solve_ivp

from ._jet import Jet
from .errors import (
    DomainError,
    InconsistentEndStatesError,
    NoConnectionError,
    VacuumError,
)
from .model import EndState, ShockData, admits_profile, enthalpy, enthalpy_derivative

__all__ = [
    "ProfileODE",
    "FixedPoint",
    "TravelingWave",
    "CoefficientFields",
    "derive_profile_ode",
    "classify_fixed_point",
    "compute_profile",
    "constant_wave",
    "shift_and_eval",
    "coefficient_fields",
    "first_integral_residuals",
    "interior_extrema",
    "write_profile_csv",
]

PROFILE_COLUMNS = ("y", "P", "dP", "R", "dR", "d2R", "d3R", "U", "dU", "d2U")


@dataclass(frozen=True)
class ProfileODE:
    """Planar vector field ``P' = Q``, ``Q' = (F(P) - 2 mu s Q) / k**2`` with
    ``F(P) = P * G(P)`` and ``G(P) = -s U + U**2/2 + h(P**2) - B0``."""

    A: float
    B0: float
    params: object

    def __iter__(self):
        yield self.A
        yield self.B0
        yield self.rhs

    def velocity(self, P):
        return self.params.s + self.A / P**2

    def G(self, P):
        U = self.velocity(P)
        s = self.params.s
        return -s * U + 0.5 * U**2 + enthalpy(P**2, self.params.gamma) - self.B0

    def F(self, P):
        return P * self.G(P)

    def dF(self, P):
        U = self.velocity(P)
        dU = -2.0 * self.A / P**3
        dG = (U - self.params.s) * dU + 2.0 * P * enthalpy_derivative(P**2, self.params.gamma)
        return self.G(P) + P * dG

    def second_derivative(self, P, Q):
        p = self.params
        return (self.F(P) - 2.0 * p.mu * p.s * Q) / p.kappa**2

    def third_derivative(self, P, Q):
        p = self.params
        d2P = self.second_derivative(P, Q)
        return (self.dF(P) * Q - 2.0 * p.mu * p.s * d2P) / p.kappa**2

    def rhs(self, y, z):
        P, Q = z
        return np.array([Q, self.second_derivative(P, Q)])

    def jacobian(self, P0):
        p = self.params
        k2 = p.kappa**2
        return np.array([[0.0, 1.0], [self.dF(P0) / k2, -2.0 * p.mu * p.s / k2]])


@dataclass(frozen=True)
class FixedPoint:
    P: float
    eigenvalues: tuple
    kind: str


def derive_profile_ode(shock: ShockData, params) -> ProfileODE:
    """Mass flux ``A``, Bernoulli constant ``B0`` and the amplitude vector field."""
    s = params.s
    right, left = shock.right, shock.left
    A = right.R * (right.U - s)
    A_left = left.R * (left.U - s)
    if not math.isclose(A, A_left, rel_tol=1e-6, abs_tol=1e-300):
        raise InconsistentEndStatesError(
            f"mass flux differs between ends: {A!r} vs {A_left!r}"
        )
    B0 = -s * right.U + 0.5 * right.U**2 + enthalpy(right.R, params.gamma)
    return ProfileODE(A=A, B0=B0, params=params)


def classify_fixed_point(P0, ode: ProfileODE) -> FixedPoint:
    residual = abs(ode.F(P0))
    if residual > 1e-8:
        raise DomainError(f"P0={P0} is not a fixed point (residual {residual:.3e})")
    J = ode.jacobian(P0)
    tr, det = np.trace(J), np.linalg.det(J)
    ev = np.linalg.eigvals(J)
    disc = tr**2 - 4 * det
    if det < 0:
        kind = "saddle"
    elif tr == 0:
        kind = "center"
    else:
        stab = "stable" if tr < 0 else "unstable"
        kind = f"{stab} spiral" if disc < 0 else f"{stab} node"
    order = np.argsort(ev.real)
    return FixedPoint(P=P0, eigenvalues=tuple(ev[order]), kind=kind)


@dataclass(frozen=True, eq=False)
class TravelingWave:
    """Sampled profile on the uniform grid ``y`` covering ``[-L1, L1]``.

    ``d2P``/``d3P`` come from the ODE closure; density and velocity derivatives
    are exact functions of the amplitude jet.
    """

    y: np.ndarray
    P: np.ndarray
    dP: np.ndarray
    d2P: np.ndarray
    d3P: np.ndarray
    R: np.ndarray
    dR: np.ndarray
    d2R: np.ndarray
    d3R: np.ndarray
    U: np.ndarray
    dU: np.ndarray
    d2U: np.ndarray
    ends: ShockData
    L1: float
    dy: float
    A: float
    B0: float

    @property
    def grid(self):
        return self.y

    @property
    def R_jet(self):
        return Jet([self.R, self.dR, self.d2R, self.d3R])

    @property
    def U_jet(self):
        return Jet([self.U, self.dU, self.d2U])

    def fields(self):
        return {name: getattr(self, name) for name in PROFILE_COLUMNS}


def _amplitude_jet_to_wave(y, P, dP, ode, shock, L1, dy):
    if np.any(P <= 0):
        raise VacuumError("profile amplitude reached zero")
    d2P = ode.second_derivative(P, dP)
    d3P = ode.third_derivative(P, dP)
    R = P**2
    dR = 2 * P * dP
    d2R = 2 * (dP**2 + P * d2P)
    d3R = 2 * (3 * dP * d2P + P * d3P)
    A, s = ode.A, ode.params.s
    U = s + A / R
    dU = -A * dR / R**2
    d2U = -A * (d2R / R**2 - 2 * dR**2 / R**3)
    return TravelingWave(
        y=y, P=P, dP=dP, d2P=d2P, d3P=d3P, R=R, dR=dR, d2R=d2R, d3R=d3R,
        U=U, dU=dU, d2U=d2U, ends=shock, L1=L1, dy=dy, A=A, B0=ode.B0,
    )


def _check_existence_hypotheses(shock):
    if admits_profile(shock):
        return
    raise DomainError(
        "profile existence requires a Lax 2-shock with subsonic right state "
        "or a Lax 1-shock with subsonic left state"
    )


def _shoot(ode, P_saddle, P_target, nu, direction, delta, max_length, need):
    """Integrate from the saddle along ``(1, nu)`` scaled by ``delta``.

    ``direction`` is +1 to integrate forward in y, -1 backward; the integration
    variable is ``t = direction * y`` (shifted). Returns the list of dense
    solution segments and the crossing time of the half amplitude.
    """
    P_half = 0.5 * (P_saddle + P_target)
    z0 = np.array([P_saddle + delta, nu * delta])

    def f(t, z):
        return direction * ode.rhs(t, z)

    def half(t, z):
        return z[0] - P_half

    def vacuum(t, z):
        return z[0]

    vacuum.terminal = True

    def converged(t, z):
        return math.hypot(z[0] - P_target, z[1]) - 1e-8

    converged.terminal = True
    converged.direction = -1

    sol = solve_ivp(
        f, (0.0, max_length), z0, method="DOP853", rtol=1e-10, atol=1e-12,
        dense_output=True, events=(half, vacuum, converged),
    )
    if sol.t_events[1].size:
        raise VacuumError("profile amplitude reached zero")
    if not sol.t_events[2].size or not sol.t_events[0].size:
        return None
    t_cross = sol.t_events[0][0]
    segments = [(sol.t[0], sol.t[-1], sol.sol)]
    t_end = t_cross + need
    if sol.t[-1] < t_end:
        # the target is attracting in t; continue to cover the grid
        tail = solve_ivp(
            f, (sol.t[-1], t_end), sol.y[:, -1], method="DOP853", rtol=1e-10,
            atol=1e-12, dense_output=True,
        )
        segments.append((tail.t[0], tail.t[-1], tail.sol))
    return segments, t_cross


def compute_profile(shock: ShockData, params, L1=40.0, dy=0.1, max_length=2000.0):
    """Heteroclinic profile sampled on ``y = -L1, -L1 + dy, ..., L1``.

    The origin ``y = 0`` is the first point where ``P`` crosses the midpoint of
    the end amplitudes.
    """
    _check_existence_hypotheses(shock)
    ode = derive_profile_ode(shock, params)
    P_minus, P_plus = math.sqrt(shock.left.R), math.sqrt(shock.right.R)
    fp_minus = classify_fixed_point(P_minus, ode)
    fp_plus = classify_fixed_point(P_plus, ode)
    if (fp_minus.kind == "saddle") == (fp_plus.kind == "saddle"):
        raise NoConnectionError(
            f"expected exactly one saddle, got {fp_minus.kind!r} / {fp_plus.kind!r}"
        )
    if fp_minus.kind == "saddle":
        direction, saddle, target = 1, fp_minus, P_plus
        nu = max(saddle.eigenvalues, key=lambda e: e.real).real
    else:
        direction, saddle, target = -1, fp_plus, P_minus
        nu = min(saddle.eigenvalues, key=lambda e: e.real).real
    rate = abs(nu)
    delta0 = 1e-7 * abs(P_minus - P_plus)
    sign = math.copysign(1.0, target - saddle.P)
    result = None
    for trial in (sign, -sign):
        result = _shoot(ode, saddle.P, target, nu, direction, trial * delta0,
                        max_length, L1 + dy)
        if result is not None:
            delta = trial * delta0
            break
    if result is None:
        raise NoConnectionError("unstable manifold does not reach the other end state")
    segments, t_cross = result

    n = int(round(2 * L1 / dy)) + 1
    y = np.linspace(-L1, L1, n)
    t = t_cross + direction * y
    P = np.empty(n)
    dP = np.empty(n)
    before = t < segments[0][0]
    # linearized unstable manifold ahead of the integration start
    growth = np.exp(rate * t[before])
    P[before] = saddle.P + delta * growth
    dP[before] = nu * delta * growth
    for t0, t1, dense in segments:
        mask = (t >= t0) & (t <= t1)
        if mask.any():
            z = dense(t[mask])
            P[mask], dP[mask] = z[0], z[1]
    return _amplitude_jet_to_wave(y, P, dP, ode, shock, float(L1), float(dy))


def constant_wave(state: EndState, params, L1=40.0, dy=0.1):
    """A profile frozen at ``state`` (both ends equal); used as a
    constant-coefficient reference."""
    n = int(round(2 * L1 / dy)) + 1
    y = np.linspace(-L1, L1, n)
    shock = ShockData(left=state, right=state, s=params.s)
    ode = derive_profile_ode(shock, params)
    P = np.full(n, math.sqrt(state.R))
    return _amplitude_jet_to_wave(y, P, np.zeros(n), ode, shock, float(L1), float(dy))


_EVAL_FIELDS = ("P", "dP", "R", "dR", "d2R", "d3R", "U", "dU", "d2U")


def shift_and_eval(wave: TravelingWave, y0, y, names=_EVAL_FIELDS):
    """Piecewise-linear interpolant of ``wave`` translated by ``y0``, at ``y``.

    Outside ``[-L1 + y0, L1 + y0]`` the end-state values are returned (zero for
    derivatives).
    """
    x = np.asarray(y, dtype=float) - y0
    left, right = wave.ends.left, wave.ends.right
    ends = {
        "P": (math.sqrt(left.R), math.sqrt(right.R)),
        "R": (left.R, right.R),
        "U": (left.U, right.U),
    }
    out = {}
    for name in names:
        lo, hi = ends.get(name, (0.0, 0.0))
        out[name] = np.interp(x, wave.y, getattr(wave, name), left=lo, right=hi)
    return out


@dataclass(frozen=True, eq=False)
class CoefficientFields:
    """The coefficient fields ``f1..f6``, ``g1..g5`` sampled on the wave grid,
    plus the derivatives used by the high-frequency bounds."""

    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray
    f4: np.ndarray
    f5: np.ndarray
    f6: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    g3: np.ndarray
    g4: np.ndarray
    g5: np.ndarray
    df1: np.ndarray
    df2: np.ndarray
    df6: np.ndarray
    d2f6: np.ndarray


def coefficient_fields(wave: TravelingWave, params) -> CoefficientFields:
    k2, mu, s, gamma = params.kappa**2, params.mu, params.s, params.gamma
    R = wave.R_jet
    U = wave.U_jet
    f1 = -R.compose([
        lambda r: enthalpy_derivative(r, gamma, 1),
        lambda r: enthalpy_derivative(r, gamma, 2),
        lambda r: enthalpy_derivative(r, gamma, 3),
        lambda r: enthalpy_derivative(r, gamma, 4),
    ])
    f2 = s - U
    r_m12, r_m32, r_p12 = R**-0.5, R**-1.5, R**0.5
    f3 = 0.5 * k2 * ((r_m12 * r_m12.d.d).d - (r_m32 * r_p12.d.d).d)
    f4 = 0.5 * k2 * (r_m12 * r_m12.d.d + 2 * (r_m12 * r_m12.d).d - r_m32 * r_p12.d.d)
    f5 = -k2 * R.d / R**2
    f6 = (s - U) / R
    log_d = R.d / R
    g1 = mu * log_d.d
    g2 = mu * log_d
    RU_d = (R * U).d
    g3 = mu * ((U.d / R).d - (RU_d / R**2).d)
    g4 = mu * (U.d / R + (U / R).d - RU_d / R**2)
    # exact forms for the two invariants f2 = s - U, g5 R = mu U
    g5 = mu * wave.U / wave.R
    return CoefficientFields(
        f1=f1.value, f2=s - wave.U, f3=f3.value, f4=f4.value, f5=f5.value,
        f6=f6.value, g1=g1.value, g2=g2.value, g3=g3.value, g4=g4.value, g5=g5,
        df1=f1[1], df2=f2[1], df6=f6[1], d2f6=f6[2],
    )


def first_integral_residuals(wave: TravelingWave, params):
    """Max relative deviations of both first integrals and the end-state gaps."""
    s, mu, k2 = params.s, params.mu, params.kappa**2
    mass = np.max(np.abs(wave.R * (wave.U - s) - wave.A)) / abs(wave.A)
    bern = (
        -s * wave.U + 0.5 * wave.U**2 + enthalpy(wave.R, params.gamma)
        - mu * s * wave.dR / wave.R - k2 * wave.d2P / wave.P
    )
    bernoulli = np.max(np.abs(bern - wave.B0)) / max(abs(wave.B0), 1.0)
    left, right = wave.ends.left, wave.ends.right
    endpoint = max(
        abs(wave.R[0] - left.R), abs(wave.R[-1] - right.R),
        abs(wave.U[0] - left.U), abs(wave.U[-1] - right.U),
    )
    return {"mass": float(mass), "bernoulli": float(bernoulli), "endpoint": float(endpoint)}


def interior_extrema(values):
    """Indices of interior nodes where the discrete slope changes sign."""
    d = np.diff(values)
    return np.nonzero(d[:-1] * d[1:] < 0)[0] + 1


def write_profile_csv(wave: TravelingWave, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PROFILE_COLUMNS)
        cols = [getattr(wave, name) for name in PROFILE_COLUMNS]
        for row in zip(*cols):
            writer.writerow([repr(float(v)) for v in row])
