"""Evans function via the second-compound (exterior square) system.

The integrated-variable matrix ``M(y, lam)`` is affine in ``lam`` and the
compound lift is linear, so the lifted matrix splits as ``B0(y) + lam B1(y)``;
the batched integrator exploits this to advance many spectral parameters at
once.

Compound coordinates follow the basis ``(12, 13, 14, 23, 24, 34)``.
"""
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DegenerateEigenvalueError, EssentialSpectrumError, IntegrationError
from .essential import splitting_count
from .model import enthalpy_derivative
from .profile import TravelingWave

__all__ = [
    "AsymptoticData",
    "EvansSample",
    "asymptotic_matrix",
    "integrated_matrix",
    "integrated_matrix_parts",
    "compound_lift",
    "wedge",
    "pairing",
    "normalize_phase",
    "compound_asymptotics",
    "evans_eval",
    "evans_batch",
]

_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def asymptotic_matrix(state, lam, params):
    """Limit matrix at an end state (no profile derivatives)."""
    k2, mu, s = params.kappa**2, params.mu, params.s
    R, f2 = state.R, s - state.U
    rhp = R * enthalpy_derivative(R, params.gamma)
    M = np.zeros((4, 4), dtype=complex)
    M[0, 2] = 1
    M[1, 0] = -lam / R
    M[1, 2] = f2 / R
    M[2, 3] = 1
    M[3, 0] = 2 * f2 * lam / k2
    M[3, 1] = 2 * R * lam / k2
    M[3, 2] = 2 / k2 * (rhp - f2**2 + mu * lam)
    M[3, 3] = -2 * s * mu / k2
    return M


def integrated_matrix_parts(y, wave: TravelingWave, params, y0=0.0):
    """``(M0, M1)`` with ``M(y, lam) = M0 + lam * M1``; vectorized in ``y``.

    Profile quantities are the piecewise-linear interpolant of the nodal values,
    with constant end-state extension.
    """
    y = np.asarray(y, dtype=float)
    x = y - y0
    left, right = wave.ends.left, wave.ends.right
    R = np.interp(x, wave.y, wave.R, left=left.R, right=right.R)
    dR = np.interp(x, wave.y, wave.dR, left=0.0, right=0.0)
    d2R = np.interp(x, wave.y, wave.d2R, left=0.0, right=0.0)
    U = np.interp(x, wave.y, wave.U, left=left.U, right=right.U)
    dU = np.interp(x, wave.y, wave.dU, left=0.0, right=0.0)
    k2, mu, s = params.kappa**2, params.mu, params.s
    f2 = s - U
    rhp = R * enthalpy_derivative(R, params.gamma)
    dRU = dR * U + R * dU
    shape = y.shape + (4, 4)
    M0 = np.zeros(shape)
    M1 = np.zeros(shape)
    M0[..., 0, 2] = 1
    M0[..., 1, 2] = f2 / R
    M0[..., 2, 3] = 1
    M0[..., 3, 2] = 2 / k2 * (rhp - f2**2 + mu * dRU / R) + d2R / R - dR**2 / R**2
    M0[..., 3, 3] = -2 * mu * s / k2 + dR / R
    M1[..., 1, 0] = -1 / R
    M1[..., 3, 0] = 2 * f2 / k2
    M1[..., 3, 1] = 2 * R / k2
    M1[..., 3, 2] = 2 * mu / k2
    return M0, M1


def integrated_matrix(y, lam, wave, params, y0=0.0):
    M0, M1 = integrated_matrix_parts(y, wave, params, y0)
    return M0 + lam * M1


def compound_lift(M):
    """Second compound of ``M`` (shape ``(..., 4, 4)`` -> ``(..., 6, 6)``)."""
    M = np.asarray(M)
    m = lambda i, j: M[..., i - 1, j - 1]  # noqa: E731  (1-based, as displayed)
    B = np.zeros(M.shape[:-2] + (6, 6), dtype=M.dtype)
    z = np.zeros_like(M[..., 0, 0])
    B[..., 0, :] = np.stack([m(1, 1) + m(2, 2), m(2, 3), m(2, 4), -m(1, 3), -m(1, 4), z], -1)
    B[..., 1, :] = np.stack([m(3, 2), m(1, 1) + m(3, 3), m(3, 4), m(1, 2), z, -m(1, 4)], -1)
    B[..., 2, :] = np.stack([m(4, 2), m(4, 3), m(1, 1) + m(4, 4), z, m(1, 2), m(1, 3)], -1)
    B[..., 3, :] = np.stack([-m(3, 1), m(2, 1), z, m(2, 2) + m(3, 3), m(3, 4), -m(2, 4)], -1)
    B[..., 4, :] = np.stack([-m(4, 1), z, m(2, 1), m(4, 3), m(2, 2) + m(4, 4), m(2, 3)], -1)
    B[..., 5, :] = np.stack([z, -m(4, 1), m(3, 1), -m(4, 2), m(3, 2), m(3, 3) + m(4, 4)], -1)
    return B


def wedge(a, b):
    """Compound coordinates of ``a ^ b``."""
    a, b = np.asarray(a), np.asarray(b)
    return np.stack([a[..., i] * b[..., j] - a[..., j] * b[..., i] for i, j in _PAIRS], -1)


def pairing(phi_minus, phi_plus):
    """Six-term wedge pairing; equals ``det[a, b, c, d]`` for
    ``phi_minus = a ^ b`` and ``phi_plus = c ^ d``."""
    a, b = np.asarray(phi_minus), np.asarray(phi_plus)
    return (
        a[..., 0] * b[..., 5]
        - a[..., 1] * b[..., 4]
        + a[..., 2] * b[..., 3]
        + a[..., 3] * b[..., 2]
        - a[..., 4] * b[..., 1]
        + a[..., 5] * b[..., 0]
    )


def normalize_phase(v, rel=1e-8):
    """Unit norm with the first non-negligible component real and positive."""
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    idx = np.nonzero(np.abs(v) > rel)[0][0]
    return v * (abs(v[idx]) / v[idx])


@dataclass(frozen=True, eq=False)
class AsymptoticData:
    M_minus: np.ndarray
    M_plus: np.ndarray
    B_minus: np.ndarray
    B_plus: np.ndarray
    mu_minus: complex
    mu_plus: complex
    v_minus: np.ndarray
    v_plus: np.ndarray


def _select(B, largest, tol=1e-12):
    w, V = np.linalg.eig(B)
    key = w.real if largest else -w.real
    order = np.argsort(key)[::-1]
    best, second = order[0], order[1]
    if abs(key[best] - key[second]) <= tol * max(1.0, abs(w[best])):
        raise DegenerateEigenvalueError(
            f"two compound eigenvalues share the extreme real part: {w[best]}, {w[second]}"
        )
    return w[best], normalize_phase(V[:, best])


def compound_asymptotics(lam, shock, params, check_splitting=True) -> AsymptoticData:
    """Growth rates and unit eigenvectors of the lifted limit matrices."""
    if check_splitting:
        for state in (shock.left, shock.right):
            counts = splitting_count(lam, state, params)
            if counts != (2, 2):
                raise EssentialSpectrumError(
                    f"splitting {counts} at lambda={lam} for state {state}"
                )
    M_minus = asymptotic_matrix(shock.left, lam, params)
    M_plus = asymptotic_matrix(shock.right, lam, params)
    B_minus, B_plus = compound_lift(M_minus), compound_lift(M_plus)
    mu_minus, v_minus = _select(B_minus, largest=True)
    mu_plus, v_plus = _select(B_plus, largest=False)
    return AsymptoticData(
        M_minus=M_minus, M_plus=M_plus, B_minus=B_minus, B_plus=B_plus,
        mu_minus=mu_minus, mu_plus=mu_plus, v_minus=v_minus, v_plus=v_plus,
    )


@dataclass(frozen=True, eq=False)
class EvansSample:
    lam: complex
    E: complex
    phi_minus: np.ndarray
    phi_plus: np.ndarray


class _LiftedField:
    """Evaluates ``B0(y)``, ``B1(y)`` of the lifted integrated-variable matrix."""

    def __init__(self, wave, params):
        self.wave = wave
        self.params = params

    def __call__(self, y):
        M0, M1 = integrated_matrix_parts(y, self.wave, self.params)
        return compound_lift(M0), compound_lift(M1)


def evans_eval(lam, wave, shock, params, init_minus=None, init_plus=None, L1=None,
               mu_minus=None, mu_plus=None, rtol=1e-6, atol=1e-9, method="RK45"):
    """Evans function at a single ``lam``.

    Integrates ``phi' = (B(y, lam) - mu_minus) phi`` forward on ``[-L1, 0]`` and
    ``phi' = (B(y, lam) - mu_plus) phi`` backward on ``[0, L1]`` and pairs the
    results at ``y = 0``. Without explicit initial data the unit compound
    eigenvectors of the limit matrices are used.
    """
    lam = complex(lam)
    L1 = wave.L1 if L1 is None else L1
    if init_minus is None or init_plus is None or mu_minus is None or mu_plus is None:
        asym = compound_asymptotics(lam, shock, params)
        init_minus = asym.v_minus if init_minus is None else init_minus
        init_plus = asym.v_plus if init_plus is None else init_plus
        mu_minus = asym.mu_minus if mu_minus is None else mu_minus
        mu_plus = asym.mu_plus if mu_plus is None else mu_plus
    field = _LiftedField(wave, params)

    def make_rhs(mu):
        def rhs(y, phi):
            B0, B1 = field(y)
            return (B0 + lam * B1) @ phi - mu * phi

        return rhs

    phis = []
    for span, init, mu in (((-L1, 0.0), init_minus, mu_minus), ((L1, 0.0), init_plus, mu_plus)):
        sol = solve_ivp(make_rhs(mu), span, np.asarray(init, dtype=complex),
                        method=method, rtol=rtol, atol=atol)
        if not sol.success:
            raise IntegrationError(f"integration failed at lambda={lam}: {sol.message}", lam)
        phis.append(sol.y[:, -1])
    E = complex(pairing(phis[0], phis[1]))
    return EvansSample(lam=lam, E=E, phi_minus=phis[0], phi_plus=phis[1])


def evans_batch(lams, wave, params, init_minus, init_plus, mu_minus, mu_plus,
                L1=None, rtol=1e-6, atol=1e-9, method="RK45", chunk=512):
    """Vectorized :func:`evans_eval` over arrays of spectral parameters.

    Each chunk of ``lams`` is advanced as one stacked linear system, sharing step
    sizes; chunks are ordered as given, so neighbouring contour nodes share a
    chunk. Returns ``(E, phi_minus, phi_plus)``.
    """
    lams = np.asarray(lams, dtype=complex)
    init_minus = np.asarray(init_minus, dtype=complex).reshape(-1, 6)
    init_plus = np.asarray(init_plus, dtype=complex).reshape(-1, 6)
    mu_minus = np.asarray(mu_minus, dtype=complex)
    mu_plus = np.asarray(mu_plus, dtype=complex)
    L1 = wave.L1 if L1 is None else L1
    field = _LiftedField(wave, params)
    n = lams.size
    phi_m = np.empty((n, 6), dtype=complex)
    phi_p = np.empty((n, 6), dtype=complex)
    for start in range(0, n, chunk):
        sl = slice(start, min(start + chunk, n))
        lam = lams[sl][:, None]
        for span, init, mu, out in (
            ((-L1, 0.0), init_minus[sl], mu_minus[sl][:, None], phi_m),
            ((L1, 0.0), init_plus[sl], mu_plus[sl][:, None], phi_p),
        ):
            def rhs(y, flat, lam=lam, mu=mu):
                phi = flat.reshape(-1, 6)
                B0, B1 = field(y)
                return (phi @ B0.T + lam * (phi @ B1.T) - mu * phi).ravel()

            sol = solve_ivp(rhs, span, init.ravel(), method=method, rtol=rtol, atol=atol)
            if not sol.success:
                raise IntegrationError(
                    f"batched integration failed near lambda={lams[sl][0]}: {sol.message}",
                    lams[sl][0],
                )
            out[sl] = sol.y[:, -1].reshape(-1, 6)
    return pairing(phi_m, phi_p), phi_m, phi_p
