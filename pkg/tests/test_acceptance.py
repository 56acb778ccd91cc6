"""Headline acceptance checks.

One test per release criterion; conftest prints a PASS/FAIL line for each in
the terminal summary. These tests intentionally re-derive their expectations
in place (closed forms, brute-force sums, dense scans) instead of trusting
the library code under test.
"""

import math
import time
from types import SimpleNamespace

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from optomech.cavity import (
    CavityParams,
    GivenMeanDetuning,
    OperatingPoint,
    bistability_slope,
    solve_operating_point,
)
from optomech.cli import main
from optomech.overlap import (
    OpticalMode,
    overlap_analytic,
    overlap_factors,
    overlap_quadrature_sweep,
)
from optomech.resonator import ModeIndex, acoustic_waist
from optomech.response import (
    ConstantLossAngle,
    EffectiveResponse,
    TruncationNotConverged,
    TruncationPolicy,
    effective_mass,
    effective_susceptibility,
    modal_susceptibility,
    thermal_force_spectrum,
)
from optomech.spectra import (
    noise_coefficients,
    optimum_spectrum,
    quadrature_spectrum,
    reference_response,
    squeeze_scan,
)

from conftest import GAMMA, P_IN, Q_FACTOR, WAVELENGTH

K_B = 1.380649e-23
WAVEVECTOR = 2.0 * math.pi / WAVELENGTH


@pytest.fixture(scope="module")
def waist_cases(catalog, loss):
    """Operating chain at the reference waist and the two variants."""
    omega_m = catalog.omega_m
    cav = CavityParams(gamma=GAMMA, tau=GAMMA / omega_m)
    anchor = GivenMeanDetuning(-0.2 * GAMMA)
    cases = {}
    for waist in (100e-6, 200e-6, 400e-6):
        opt = OpticalMode(wavelength=WAVELENGTH, waist=waist)
        resp = EffectiveResponse(catalog, opt, loss=loss)
        points = solve_operating_point(cav, P_IN, WAVELENGTH, anchor, resp.chi0)
        assert len(points) == 1
        cases[waist] = SimpleNamespace(opt=opt, resp=resp, op=points[0], cav=cav)
    return cases


def test_dc_susceptibility_value_and_runtime(catalog, optics, loss):
    started = time.perf_counter()
    resp = EffectiveResponse(
        catalog, optics, loss=loss, policy=TruncationPolicy(rel_tol=1e-3)
    )
    chi0 = resp.chi0
    elapsed = time.perf_counter() - started

    assert chi0 == pytest.approx(1.4e-8, rel=0.05)
    assert elapsed < 10.0
    info = resp.dc_info
    assert info.converged
    assert info.grid_equivalent_modes >= 1_000_000


def test_nonlinear_phase_and_slope_chain(waist_cases):
    bands = {
        200e-6: (0.28, 0.015, 0.93, 0.01),
        400e-6: (0.11, 0.01, 0.99, 0.01),
        100e-6: (0.62, 0.01, 0.79, 0.01),
    }
    for waist, (psi_nl, tol_psi, sigma, tol_sigma) in bands.items():
        op = waist_cases[waist].op
        assert op.psi_nl / GAMMA == pytest.approx(psi_nl, abs=tol_psi)
        assert op.sigma_norm == pytest.approx(sigma, abs=tol_sigma)
        assert op.stability.value == "stable"
        # The reported slope must be the S-curve derivative at the same point.
        sigma_direct, _ = bistability_slope(GAMMA, op.psi_bar, op.psi_nl)
        assert op.sigma_norm == sigma_direct


def test_mode_catalog_fundamentals(catalog):
    assert catalog.w1 == pytest.approx(3.785e-3, rel=0.02)
    assert catalog.w1 == pytest.approx(3.8e-3, rel=0.02)
    assert catalog.omega_m / (2.0 * math.pi) == pytest.approx(1.987e6, rel=0.02)
    assert catalog.omega_m / (2.0 * math.pi) == pytest.approx(2.0e6, rel=0.02)
    assert catalog.m1 == pytest.approx(3.7e-5, rel=0.01)


def test_effective_mass_values_and_monotonicity(catalog):
    report_380 = effective_mass(
        catalog, OpticalMode(wavelength=WAVELENGTH, waist=380e-6)
    )
    assert 0.7e-6 < report_380.m_eff < 1.3e-6
    report_100 = effective_mass(
        catalog, OpticalMode(wavelength=WAVELENGTH, waist=100e-6)
    )
    assert 0.14e-6 < report_100.m_eff < 0.26e-6

    ratios = np.geomspace(1.0, 40.0, 20)
    masses = []
    for ratio in ratios:
        report = effective_mass(
            catalog, OpticalMode(wavelength=WAVELENGTH, waist=catalog.w1 / ratio)
        )
        assert report.m_opt <= report.m_eff
        masses.append(report.m_eff)
    # ratio up means waist down, so the mass must fall strictly
    assert (np.diff(masses) < 0).all()


def test_shot_noise_normalization(catalog):
    omega_m = catalog.omega_m
    cav = CavityParams(gamma=GAMMA, tau=GAMMA / omega_m)
    psi_bar = -0.2 * GAMMA
    sigma, stab = bistability_slope(GAMMA, psi_bar, 0.0)
    op = OperatingPoint(
        psi_bar=psi_bar,
        psi0=psi_bar,
        psi_nl=0.0,
        intensity=0.0,
        alpha=0.0,
        sigma_norm=sigma,
        stability=stab,
    )
    resp = reference_response("kerr", 1.4e-8)
    omegas = np.linspace(0.4, 10.0, 25) * cav.bandwidth
    cp = noise_coefficients(op, cav, resp, WAVEVECTOR, omegas)
    cm = noise_coefficients(op, cav, resp, WAVEVECTOR, -omegas)
    worst = 0.0
    for theta in np.arange(720) * math.pi / 720.0:
        s = quadrature_spectrum(cp, cm, 0.0, theta)
        worst = max(worst, float(np.max(np.abs(s - 1.0))))
    assert worst <= 1e-12


def test_symplectic_and_purity_identities(catalog):
    omega_m = catalog.omega_m
    cav = CavityParams(gamma=GAMMA, tau=GAMMA / omega_m)
    resp = reference_response("kerr", 1.4e-8)
    checked = 0
    # psi_nl <= gamma keeps every stable point away from the turning point;
    # closer to sigma = 0 the identities still hold but their float64
    # evaluation loses digits as 1/sigma^4.
    for psi_bar in np.linspace(-3.0, 3.0, 10) * GAMMA:
        for psi_nl in np.linspace(0.01, 1.0, 10) * GAMMA:
            sigma, stab = bistability_slope(GAMMA, psi_bar, psi_nl)
            if sigma <= 0.0:
                continue
            checked += 1
            op = OperatingPoint(
                psi_bar=psi_bar,
                psi0=psi_bar - psi_nl,
                psi_nl=psi_nl,
                intensity=1.0,
                alpha=1.0,
                sigma_norm=sigma,
                stability=stab,
            )
            coeffs = noise_coefficients(op, cav, resp, WAVEVECTOR, 0.0)
            sym = abs(coeffs.c1) ** 2 - abs(coeffs.c2) ** 2
            assert abs(sym - 1.0) <= 1e-12

            s_opt, theta_opt = optimum_spectrum(coeffs, coeffs, 0.0)
            s_max = quadrature_spectrum(
                coeffs, coeffs, 0.0, float(theta_opt) + math.pi / 2.0
            )
            assert float(s_opt) * float(s_max) == pytest.approx(1.0, abs=1e-9)
    assert checked >= 90


def test_oracle_equivalences(catalog, geometry, optics, loss):
    # Closed-form overlap against the adaptive quadrature, deep into the
    # geometric tail. Below 1e-60 a relative comparison is meaningless in
    # float64 (and the sweep clamps there), so the check switches to
    # agreement with zero at the same floor.
    floor = 1e-60
    p_max = 200
    for ratio in (0.01, 0.05, 0.1, 0.5, 1.0):
        opt = OpticalMode(wavelength=WAVELENGTH, waist=ratio * catalog.w1)
        for n in range(1, 11):
            got = overlap_quadrature_sweep(
                opt, geometry, n, p_max, rel_tol=1e-10, abs_floor=1e-63
            )
            pref, q = overlap_factors(opt, acoustic_waist(geometry, n))
            if abs(q) < 1e-12:
                # Vanishing bracket (w0^2 = 2 w_n^2 up to rounding): the
                # closed form is pure cancellation noise past p = 0, so the
                # tail is only meaningfully compared against zero.
                assert got[0] == pytest.approx(pref, rel=1e-8)
                assert np.max(np.abs(got[1:])) <= 1e-10
                continue
            expected = pref * q ** np.arange(p_max + 1, dtype=float)
            big = np.abs(expected) >= floor
            np.testing.assert_allclose(got[big], expected[big], rtol=1e-8)
            assert np.max(np.abs(got[~big]), initial=0.0) <= 2.0 * floor

    # Analytic quadrature-angle minimizer against a dense scan plus local
    # refinement.
    omega_m = catalog.omega_m
    cav = CavityParams(gamma=GAMMA, tau=GAMMA / omega_m)
    resp = EffectiveResponse(catalog, optics, loss=loss)
    points = solve_operating_point(
        cav, P_IN, WAVELENGTH, GivenMeanDetuning(-0.2 * GAMMA), resp.chi0
    )
    op = points[0]
    omega = 0.5 * omega_m
    cp = noise_coefficients(op, cav, resp, WAVEVECTOR, omega)
    cm = noise_coefficients(op, cav, resp, WAVEVECTOR, -omega)
    s_t = float(thermal_force_spectrum(resp, 4.0, omega))
    s_opt, theta_opt = optimum_spectrum(cp, cm, s_t)
    s_opt, theta_opt = float(s_opt), float(theta_opt)

    thetas = np.linspace(0.0, math.pi, 10001)
    samples = np.array([float(quadrature_spectrum(cp, cm, s_t, t)) for t in thetas])
    best = int(np.argmin(samples))
    span = thetas[1] - thetas[0]
    refined = minimize_scalar(
        lambda t: float(quadrature_spectrum(cp, cm, s_t, t)),
        bounds=(thetas[best] - span, thetas[best] + span),
        method="bounded",
        options={"xatol": 1e-14},
    )
    assert s_opt == pytest.approx(refined.fun, abs=1e-10)
    assert 0.0 <= theta_opt < math.pi
    assert float(quadrature_spectrum(cp, cm, s_t, theta_opt)) == pytest.approx(
        s_opt, abs=1e-12
    )

    # Brute-force 16-term reference against the summation engine on the same
    # 4 x 4 rectangle. rel_tol far below float64 keeps the engine from
    # stopping early, so the capped partial covers the full rectangle.
    policy = TruncationPolicy(rel_tol=1e-15, n_max=4, p_max=3)
    for omega in (0.0, 0.7 * omega_m):
        with pytest.raises(TruncationNotConverged) as excinfo:
            effective_susceptibility(
                catalog, optics, loss=loss, policy=policy, omega=omega
            )
        engine = excinfo.value.value
        assert excinfo.value.info.modes_summed == 16

        real_parts, imag_parts = [], []
        for n in range(1, 5):
            for p in range(4):
                mode = catalog.mode(n, p)
                ov = overlap_analytic(optics, geometry, ModeIndex(n, p))
                term = ov**2 * modal_susceptibility(mode, loss, omega)
                real_parts.append(term.real)
                imag_parts.append(term.imag)
        brute = complex(math.fsum(real_parts), math.fsum(imag_parts))
        assert abs(engine - brute) <= 1e-13 * abs(brute)


def test_fdt_closure_three_modes(catalog, geometry, optics):
    loss = ConstantLossAngle(Q_FACTOR)
    temperature = 4.0
    modes = [catalog.mode(1, 0), catalog.mode(1, 1), catalog.mode(2, 0)]
    weights = [
        overlap_analytic(optics, geometry, m.index) ** 2 for m in modes
    ]
    omegas = np.linspace(0.1, 1.4, 50) * catalog.omega_m
    for omega in omegas:
        chi_eff, _ = effective_susceptibility(modes, optics, loss=loss, omega=omega)
        direct = -(2.0 * K_B * temperature / omega) * (1.0 / chi_eff).imag

        recon = 0.0
        phi = loss.loss_angle(omega)
        for mode, weight in zip(modes, weights):
            chi_n = modal_susceptibility(mode, loss, omega)
            force = (
                2.0 * K_B * temperature / omega * mode.mass * mode.omega**2 * phi
            )
            recon += weight * abs(chi_n) ** 2 * force
        recon /= abs(chi_eff) ** 2
        assert recon == pytest.approx(direct, rel=1e-6)


def test_spectrum_shape_against_references(catalog, waist_cases):
    omega_m = catalog.omega_m
    case = waist_cases[200e-6]

    # Cold cavity: below 0.3 W_M the structured mirror behaves as a Kerr
    # medium to within 5 percent.
    low = np.linspace(0.02, 0.3, 15) * omega_m
    full_cold = squeeze_scan(
        case.op, case.cav, case.resp, WAVEVECTOR, low, 0.0, workers=2
    )
    kerr = reference_response("kerr", case.resp.chi0)
    kerr_cold = squeeze_scan(case.op, case.cav, kerr, WAVEVECTOR, low, 0.0)
    assert np.max(np.abs(full_cold.s_opt / kerr_cold.s_opt - 1.0)) <= 0.05

    # Warm cavity: thermal noise destroys squeezing at the first acoustic
    # resonance but leaves a dip below unity further down.
    omega_10 = catalog.mode(1, 0).omega
    near = np.linspace(0.98, 1.02, 21) * omega_10
    warm_near = squeeze_scan(
        case.op, case.cav, case.resp, WAVEVECTOR, near, 4.0, workers=2
    )
    assert np.max(warm_near.s_opt) > 1.0

    band = np.linspace(0.02, 0.95, 25) * omega_m
    minima = {}
    for waist, c in waist_cases.items():
        scan = squeeze_scan(c.op, c.cav, c.resp, WAVEVECTOR, band, 4.0, workers=2)
        minima[waist] = float(np.min(scan.s_opt))
    assert minima[200e-6] < 1.0
    # tighter focus picks out fewer modes and squeezes deeper
    assert minima[100e-6] < minima[200e-6] < minima[400e-6]


def test_cli_determinism_across_workers(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "numerics.freq_grid.min = 0.05\n"
        "numerics.freq_grid.max = 1.2\n"
        "numerics.freq_grid.points = 12\n"
    )
    blobs = {"susceptibility": set(), "squeeze": set()}
    for command in blobs:
        for run, workers in (("a", "1"), ("b", "4"), ("c", "1"), ("d", "4")):
            out = tmp_path / f"{command}_{run}"
            code = main(
                [
                    command,
                    "--config",
                    str(cfg),
                    "--out",
                    str(out),
                    "--workers",
                    workers,
                ]
            )
            assert code == 0
            blobs[command].add((out / f"{command}.csv").read_bytes())
        assert len(blobs[command]) == 1
