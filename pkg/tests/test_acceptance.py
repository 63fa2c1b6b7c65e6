"""Acceptance criteria for the reference dispersive shock.

Each test records one PASS/FAIL line (shown in the terminal summary) and then
asserts, so a failing criterion is visible both ways.
"""
import math
import time
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from qhdevans.contour import (
    ContourSpec,
    cauchy_check,
    evaluate_contour,
    kato_extend,
    kato_init,
    make_contour,
    small_contour_scan,
    winding_number,
)
from qhdevans.errors import UnderResolvedWarning
from qhdevans.essential import essential_stability_check, splitting_count
from qhdevans.evans import compound_lift, evans_eval
from qhdevans.hfbound import certified_radius, condition_at
from qhdevans.model import (
    EndState,
    LaxFamily,
    ModelParams,
    ShockData,
    make_shock,
    solve_rankine_hugoniot,
    sound_speed,
)
from qhdevans.profile import (
    compute_profile,
    constant_wave,
    first_integral_residuals,
    interior_extrema,
)

from test_evans import vandermonde_data


def report(record_property, number, ok, detail, elapsed, limit):
    ok = ok and elapsed < limit
    line = (f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}  "
            f"[{elapsed:.2f} s, limit {limit:g} s]")
    record_property("acceptance", line)
    print(line)
    assert ok, line


def test_c01_rankine_hugoniot(record_property):
    t = time.perf_counter()
    p = ModelParams()
    hits = []
    for U_plus, U_minus in solve_rankine_hugoniot(0.36, 0.64, p):
        shock = make_shock(EndState(0.64, U_minus), EndState(0.36, U_plus), p.s, p.gamma)
        if shock.lax_family is LaxFamily.LAX2:
            hits.append((U_plus, U_minus))
    elapsed = time.perf_counter() - t
    ok = any(abs(a + 0.32) <= 0.01 and abs(b - 0.25) <= 0.01 for a, b in hits)
    report(record_property, 1, ok, f"Lax 2 branches (U+, U-) = {hits}", elapsed, 1)


def test_c02_sonicity(record_property):
    t = time.perf_counter()
    p = ModelParams()
    c = sound_speed(0.36, p.gamma)
    ratio = p.s * p.mu / p.kappa
    elapsed = time.perf_counter() - t
    ok = abs(c - 0.95) <= 0.005 and abs(ratio - 0.7071) <= 1e-4
    report(record_property, 2, ok, f"c_s(R+) = {c:.5f}, s mu / k = {ratio:.6f}", elapsed, 1)


def test_c03_profile_quality(record_property, shock, params):
    t = time.perf_counter()
    wave = compute_profile(shock, params)
    res = first_integral_residuals(wave, params)
    n_ext = interior_extrema(wave.R).size
    elapsed = time.perf_counter() - t
    ok = (res["mass"] < 1e-6 and res["bernoulli"] < 1e-6 and res["endpoint"] < 1e-6
          and n_ext >= 1 and wave.y[-1] == pytest.approx(40.0))
    detail = (f"mass {res['mass']:.2e}, momentum {res['bernoulli']:.2e}, "
              f"endpoint {res['endpoint']:.2e}, interior extrema {n_ext}")
    report(record_property, 3, ok, detail, elapsed, 10)


def test_c04_essential_spectrum(record_property):
    t = time.perf_counter()
    p = ModelParams(mu=0.1)
    rep = essential_stability_check(EndState(0.5, -0.746), p, np.linspace(-20, 20, 401))
    elapsed = time.perf_counter() - t
    ok = (rep["max_real_part"] <= 0 and rep["max_real_part_nonzero_xi"] < 0
          and rep["all_agree"])
    detail = (f"max Re {rep['max_real_part']:.3e}, off xi=0 "
              f"{rep['max_real_part_nonzero_xi']:.3e}, criteria agree {rep['all_agree']}")
    report(record_property, 4, ok, detail, elapsed, 5)


def test_c05_consistent_splitting(record_property, shock, params):
    t = time.perf_counter()
    rng = np.random.default_rng(5)
    lams = rng.uniform(0.01, 20, 100) + 1j * rng.uniform(-20, 20, 100)
    counts = {splitting_count(lam, state, params)
              for lam in lams for state in (shock.left, shock.right)}
    elapsed = time.perf_counter() - t
    report(record_property, 5, counts == {(2, 2)}, f"splittings seen {sorted(counts)}",
           elapsed, 5)


def test_c06_vandermonde_oracle(record_property, shock, params):
    t = time.perf_counter()
    state = shock.right
    wave = constant_wave(state, params)
    frozen = ShockData(left=state, right=state, s=params.s)
    ratios = []
    for lam in (1.0, 2 + 1j, 5.0):
        phi_m, phi_p, mu_m, mu_p, prod = vandermonde_data(lam, state, params)
        E = evans_eval(lam, wave, frozen, params, phi_m, phi_p, mu_minus=mu_m, mu_plus=mu_p,
                       rtol=1e-10, atol=1e-13).E
        # E / prod alone carries the lambda-dependent eigenvector normalization k^2 / (2 R lam)
        ratios.append(E / (params.kappa**2 / (2 * state.R * lam) * prod))
    spread = max(abs(r / ratios[0] - 1) for r in ratios)
    elapsed = time.perf_counter() - t
    report(record_property, 6, spread < 1e-6,
           f"normalized ratios {np.round(ratios, 9).tolist()}, spread {spread:.2e}",
           elapsed, 30)


def test_c07_high_frequency_bound(record_property, wave, fields, params):
    t = time.perf_counter()
    rep = certified_radius(wave, fields, params, y0=10.0, dy=0.1)
    at_2c = condition_at(2 * rep.C, wave, fields, params, y0=10.0, dy=0.1)
    elapsed = time.perf_counter() - t
    ok = rep.condition_value < 1 and at_2c < rep.condition_value and 3e3 <= rep.C <= 1e5
    detail = (f"C = {rep.C:.1f}, condition {rep.condition_value:.5f} at C, "
              f"{at_2c:.5f} at 2C")
    report(record_property, 7, ok, detail, elapsed, 60)


def test_c08_evans_symmetries(record_property, wave, shock, params):
    t = time.perf_counter()
    real_err = max(abs(E.imag) / abs(E) for E in
                   (evans_eval(lam, wave, shock, params).E for lam in (0.5, 5.0, 9.0)))
    conj_err = 0.0
    for lam in (1 + 2j, 3 - 4j):
        a = evans_eval(lam, wave, shock, params).E
        b = evans_eval(np.conj(lam), wave, shock, params).E
        conj_err = max(conj_err, abs(b - np.conj(a)) / abs(a))
    elapsed = time.perf_counter() - t
    report(record_property, 8, real_err < 1e-5 and conj_err < 1e-5,
           f"real axis |Im E|/|E| {real_err:.2e}, conjugation {conj_err:.2e}", elapsed, 60)


@pytest.mark.slow
def test_c09_semicircle_winding(record_property, wave, shock, params):
    t = time.perf_counter()
    contour = make_contour(ContourSpec(kind="semicircle", radii=(10.0,), n_points=4000))
    ev = evaluate_contour(contour, wave, shock, params)
    res = winding_number(ev.E)
    elapsed = time.perf_counter() - t
    ok = res.winding == 0 and res.max_phase_step < math.pi / 2 and ev.lam.size >= 4000
    detail = (f"winding {res.winding}, max phase step {res.max_phase_step:.3g}, "
              f"{ev.lam.size} points")
    report(record_property, 9, ok, detail, elapsed, 600)


def test_c10_small_contour(record_property, wave, shock, params):
    t = time.perf_counter()
    scan = small_contour_scan(wave, shock, params, radius=1e-6)
    elapsed = time.perf_counter() - t
    ok = scan["max_rel_deviation"] < 1e-2 and scan["min_abs"] > 0
    detail = f"max relative deviation {scan['max_rel_deviation']:.2e}, min |E| {scan['min_abs']:.4g}"
    report(record_property, 10, ok, detail, elapsed, 120)


def _cauchy_run(wave, shock, params, outer, n_points):
    contour = make_contour(ContourSpec(kind="annulus", radii=(5.0, outer), n_points=n_points))
    ev = evaluate_contour(contour, wave, shock, params, chunk=2048)
    a = outer - 20
    rm, mm = kato_extend(ev.kato_minus, a, shock, params)
    rp, mp = kato_extend(ev.kato_plus, a, shock, params)
    direct = evans_eval(a, wave, shock, params, rm, rp, mu_minus=mm, mu_plus=mp)
    return ev, cauchy_check(ev.lam, ev.E, a, direct)[2]


@pytest.mark.slow
def test_c11_cauchy_desk(record_property, wave, shock, params):
    t = time.perf_counter()
    ev, rel = _cauchy_run(wave, shock, params, 1e3, 100_000)
    elapsed = time.perf_counter() - t
    report(record_property, 11, rel < 1e-2 and ev.lam.size >= 100_000,
           f"annulus (5, 1e3), {ev.lam.size} points, a = 980: relative error {rel:.3e}",
           elapsed, 1800)


@pytest.mark.full_scale
def test_c11_cauchy_full_resolution(record_property, wave, shock, params):
    t = time.perf_counter()
    ev, rel = _cauchy_run(wave, shock, params, 1.5e4, 1_000_000)
    elapsed = time.perf_counter() - t
    report(record_property, 11, rel < 5e-4,
           f"annulus (5, 1.5e4), {ev.lam.size} points, a = 14980: relative error {rel:.3e}",
           elapsed, 6 * 3600)


entries = st.floats(-3, 3, allow_nan=False)


def _compound_sum_property():
    @settings(max_examples=100, deadline=None)
    @given(A=arrays(np.float64, (4, 4), elements=entries),
           B=arrays(np.float64, (4, 4), elements=entries))
    def check(A, B):
        M = A + 1j * B
        ev = np.linalg.eigvals(M)
        lifted = np.linalg.eigvals(compound_lift(M))
        scale = 1 + np.max(np.abs(M))
        for i in range(4):
            for j in range(i + 1, 4):
                assert np.min(np.abs(lifted - ev[i] - ev[j])) < 1e-6 * scale
    check()


def _projector_property(shock, params):
    worst = 0.0

    @settings(max_examples=50, deadline=None)
    @given(re=st.floats(0.05, 50), im=st.floats(-50, 50), side=st.sampled_from("-+"))
    def check(re, im, side):
        nonlocal worst
        P = kato_init([complex(re, im)], side, shock, params).projector(0)
        err = np.linalg.norm(P @ P - P) / np.linalg.norm(P)
        worst = max(worst, err)
        assert err < 1e-12
    check()
    return worst


def _winding_scaling_property():
    base = 2 * np.exp(2j * np.pi * np.arange(64) / 64) - 0.5

    @settings(max_examples=100, deadline=None)
    @given(re=st.floats(-5, 5), im=st.floats(-5, 5))
    def check(re, im):
        c = complex(re, im)
        if abs(c) < 1e-3:
            return
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UnderResolvedWarning)
            assert winding_number(c * base).winding == winding_number(base).winding
    check()


def _closure_errors(wave):
    h = wave.dy
    second, fourth = 0.0, 0.0
    for f, d in ((wave.R, wave.dR), (wave.dR, wave.d2R), (wave.U, wave.dU)):
        scale = np.max(np.abs(d))
        c2 = (f[2:] - f[:-2]) / (2 * h)
        c4 = (-f[4:] + 8 * f[3:-1] - 8 * f[1:-3] + f[:-4]) / (12 * h)
        second = max(second, np.max(np.abs(c2 - d[1:-1])) / scale)
        fourth = max(fourth, np.max(np.abs(c4 - d[2:-2])) / scale)
    return second, fourth


def test_c12_property_suites(record_property, wave, shock, params):
    timings = {}
    t = time.perf_counter()
    _compound_sum_property()
    timings["compound"] = time.perf_counter() - t
    t = time.perf_counter()
    worst = _projector_property(shock, params)
    timings["projector"] = time.perf_counter() - t
    t = time.perf_counter()
    _winding_scaling_property()
    timings["winding"] = time.perf_counter() - t
    t = time.perf_counter()
    second, fourth = _closure_errors(wave)
    timings["closure"] = time.perf_counter() - t
    ok = fourth <= 1e-4 and max(timings.values()) < 30
    detail = (f"compound pair sums ok, projector idempotency {worst:.1e}, winding scaling ok, "
              f"closure error {fourth:.1e} (five-point), {second:.1e} (three-point); "
              f"slowest suite {max(timings.values()):.1f} s")
    report(record_property, 12, ok, detail, sum(timings.values()), 120)
