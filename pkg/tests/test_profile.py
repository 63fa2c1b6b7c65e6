import math
from types import SimpleNamespace

import numpy as np
import pytest

from qhdevans.errors import DomainError, InconsistentEndStatesError
from qhdevans.model import EndState, ModelParams, ShockData, make_shock, reference_shock
from qhdevans.profile import (
    PROFILE_COLUMNS,
    ProfileODE,
    classify_fixed_point,
    coefficient_fields,
    compute_profile,
    constant_wave,
    derive_profile_ode,
    first_integral_residuals,
    interior_extrema,
    shift_and_eval,
    write_profile_csv,
)


def fd4(f, h):
    return (-f[4:] + 8 * f[3:-1] - 8 * f[1:-3] + f[:-4]) / (12 * h)


def test_mass_flux_consistent(shock, params):
    ode = derive_profile_ode(shock, params)
    assert ode.A == pytest.approx(shock.left.R * (shock.left.U - params.s), rel=1e-8)


def test_fixed_points_of_vector_field(shock, params):
    ode = derive_profile_ode(shock, params)
    for P in (math.sqrt(shock.left.R), math.sqrt(shock.right.R)):
        np.testing.assert_allclose(ode.rhs(0.0, np.array([P, 0.0])), 0.0, atol=1e-12)


def test_inconsistent_ends_rejected(params):
    bad = ShockData(left=EndState(0.64, 0.3), right=EndState(0.36, -0.3), s=1.0)
    with pytest.raises(InconsistentEndStatesError):
        derive_profile_ode(bad, params)


def test_fixed_point_kinds(shock, params):
    ode = derive_profile_ode(shock, params)
    assert classify_fixed_point(0.6, ode).kind == "stable spiral"
    assert classify_fixed_point(0.8, ode).kind == "saddle"
    with pytest.raises(DomainError):
        classify_fixed_point(0.7, ode)


def test_large_damping_gives_node():
    p = ModelParams(mu=5.0)
    ode = derive_profile_ode(reference_shock(params=p), p)
    assert classify_fixed_point(0.6, ode).kind == "stable node"


def test_zero_damping_gives_center(shock):
    # mu = 0 is outside ModelParams; the vector field itself accepts it
    p = SimpleNamespace(gamma=1.5, mu=0.0, kappa=math.sqrt(2.0), s=1.0)
    base = derive_profile_ode(shock, ModelParams())
    ode = ProfileODE(A=base.A, B0=base.B0, params=p)
    fp = classify_fixed_point(0.6, ode)
    assert fp.kind == "center"
    assert all(abs(e.real) < 1e-14 for e in fp.eigenvalues)


def test_first_integrals_and_endpoints(wave, params):
    res = first_integral_residuals(wave, params)
    assert res["mass"] < 1e-6
    assert res["bernoulli"] < 1e-6
    assert res["endpoint"] < 1e-6


def test_profile_is_non_monotone(wave):
    assert interior_extrema(wave.R).size >= 1


def test_grid_and_phase(wave):
    assert wave.y.size == 801
    i0 = np.argmin(np.abs(wave.y))
    assert wave.P[i0] == pytest.approx(0.7, abs=0.02)


def test_derivative_closure(wave):
    h = wave.dy
    for f, d in ((wave.R, wave.dR), (wave.dR, wave.d2R), (wave.U, wave.dU)):
        err = np.max(np.abs(fd4(f, h) - d[2:-2])) / np.max(np.abs(d))
        assert err <= 1e-4


def test_mirrored_shock_gives_mirrored_orbit(wave, shock):
    mirror = make_shock(
        EndState(shock.right.R, -shock.right.U), EndState(shock.left.R, -shock.left.U),
        -shock.s, 1.5,
    )
    p = ModelParams(s=-1.0)
    other = compute_profile(mirror, p)
    assert other.R.max() == pytest.approx(wave.R.max(), rel=1e-6)
    assert other.R.min() == pytest.approx(wave.R.min(), rel=1e-6)


def test_short_domain_not_converged(shock, params):
    short = compute_profile(shock, params, L1=5.0)
    assert first_integral_residuals(short, params)["endpoint"] > 1e-6


def test_shift_and_eval(wave):
    vals = shift_and_eval(wave, 0.0, wave.y)
    assert np.array_equal(vals["R"], wave.R)
    far = shift_and_eval(wave, 10.0, np.array([-35.0, 55.0]))
    assert far["R"][0] == wave.ends.left.R and far["R"][1] == wave.ends.right.R
    assert far["dR"][1] == 0.0
    inside = shift_and_eval(wave, 10.0, np.array([-30.0, 50.0]))
    assert inside["R"][0] == wave.R[0] and inside["R"][1] == wave.R[-1]


def test_coefficient_fields_constant_profile(params):
    state = EndState(0.36, -0.3)
    cf = coefficient_fields(constant_wave(state, params), params)
    for name in ("f3", "f4", "f5", "g1", "g2", "g3", "g4"):
        np.testing.assert_allclose(getattr(cf, name), 0.0, atol=1e-14)
    np.testing.assert_allclose(cf.f2, params.s - state.U)


def test_coefficient_limits(wave, fields, params):
    from qhdevans.model import enthalpy_derivative

    assert fields.f1[-1] == pytest.approx(-enthalpy_derivative(wave.ends.right.R, params.gamma),
                                          rel=1e-6)
    np.testing.assert_allclose(fields.g2, params.mu * wave.dR / wave.R, rtol=1e-12)


def test_g2_against_fine_difference(shock, params):
    """g2 = mu R'/R checked against a centered difference of R at spacing 1e-4."""
    fine = compute_profile(shock, params, L1=1.0, dy=1e-4)
    cf = coefficient_fields(fine, params)
    mid = fine.y.size // 2
    fd = (fine.R[mid + 1] - fine.R[mid - 1]) / (2e-4)
    assert cf.g2[mid] == pytest.approx(params.mu * fd / fine.R[mid], rel=1e-5)


def test_profile_csv(tmp_path, wave):
    path = tmp_path / "p.csv"
    write_profile_csv(wave, path)
    lines = path.read_text().splitlines()
    assert lines[0].split(",") == list(PROFILE_COLUMNS)
    assert len(lines) == 802
    assert float(lines[1].split(",")[3]) == wave.R[0]
