"""Effective susceptibility engine, thermal force spectra, effective mass.

The certified catalog sum is checked against brute-force term-by-term
evaluation on small rectangles, against its own error bound, and against
the fluctuation-dissipation identity on a toy catalog.
"""

import math

import numpy as np
import pytest

from optomech import (
    ConstantLossAngle,
    EffectiveResponse,
    KerrResponse,
    MassReport,
    ModeIndex,
    OpticalMode,
    SingleOscillator,
    TruncationNotConverged,
    TruncationPolicy,
    ViscousLossAngle,
    effective_mass,
    effective_susceptibility,
    modal_susceptibility,
    optical_mass,
    overlap_analytic,
    thermal_force_spectrum,
    thermal_force_spectrum_from_chi,
)

from conftest import Q_FACTOR, WAVELENGTH

K_B = 1.380649e-23  # CODATA 2018


def brute_force_chi(catalog, opt, loss, omega, n_cap, p_cap):
    """Independent rectangle sum, one term at a time with math.fsum."""
    re_parts, im_parts = [], []
    for n in range(1, n_cap + 1):
        for p in range(0, p_cap + 1):
            mode = catalog.mode(n, p)
            ov = overlap_analytic(opt, catalog.geometry, ModeIndex(n, p))
            term = ov * ov * modal_susceptibility(mode, loss, omega)
            re_parts.append(term.real)
            im_parts.append(term.imag)
    return complex(math.fsum(re_parts), math.fsum(im_parts))


# ---------------------------------------------------------------------------
# loss models


def test_constant_loss_angle_is_odd():
    loss = ConstantLossAngle(Q_FACTOR)
    assert loss.loss_angle(1.0) == pytest.approx(1.0 / Q_FACTOR, rel=1e-15)
    assert loss.loss_angle(-123.0) == -loss.loss_angle(123.0)
    assert loss.loss_angle(0.0) == 0.0
    np.testing.assert_allclose(
        loss.loss_angle(np.array([-2.0, 0.0, 5.0])),
        np.array([-1.0, 0.0, 1.0]) / Q_FACTOR,
    )
    with pytest.raises(ValueError):
        ConstantLossAngle(0.0)


def test_viscous_loss_angle_linear_in_frequency():
    omega_ref = 2 * math.pi * 2e6
    loss = ViscousLossAngle(Q_FACTOR, omega_ref)
    assert loss.loss_angle(omega_ref) == pytest.approx(1.0 / Q_FACTOR, rel=1e-15)
    assert loss.loss_angle(0.25 * omega_ref) == pytest.approx(
        0.25 / Q_FACTOR, rel=1e-15
    )
    assert loss.loss_angle(-omega_ref) == -loss.loss_angle(omega_ref)
    with pytest.raises(ValueError):
        ViscousLossAngle(Q_FACTOR, 0.0)


# ---------------------------------------------------------------------------
# modal susceptibility


def test_modal_susceptibility_limits(catalog, loss):
    mode = catalog.mode(1, 0)
    stiffness = mode.mass * mode.omega**2

    dc = modal_susceptibility(mode, loss, 0.0)
    assert dc.real == pytest.approx(1.0 / stiffness, rel=1e-9)
    assert dc.imag == 0.0  # loss angle vanishes at zero frequency

    on_res = modal_susceptibility(mode, loss, mode.omega)
    assert on_res.real == pytest.approx(0.0, abs=1e-20)
    assert on_res.imag == pytest.approx(Q_FACTOR / stiffness, rel=1e-12)

    far = modal_susceptibility(mode, loss, 1e3 * mode.omega)
    assert far.real == pytest.approx(-1.0 / (mode.mass * (1e3 * mode.omega) ** 2), rel=1e-5)


def test_modal_susceptibility_lossless(catalog):
    mode = catalog.mode(2, 1)
    val = modal_susceptibility(mode, None, 0.3 * mode.omega)
    assert val.imag == 0.0
    assert val.real == pytest.approx(
        1.0 / (mode.mass * (mode.omega**2 - (0.3 * mode.omega) ** 2)), rel=1e-13
    )


# ---------------------------------------------------------------------------
# catalog sum vs brute force


def test_single_mode_catalog_is_one_term(catalog, optics, loss):
    mode = catalog.mode(1, 0)
    ov = overlap_analytic(optics, catalog.geometry, ModeIndex(1, 0))
    omega = 0.4 * catalog.omega_m
    value, info = effective_susceptibility([mode], optics, loss, omega=omega)
    expected = ov * ov * modal_susceptibility(mode, loss, omega)
    assert value == pytest.approx(expected, rel=1e-15)
    assert info.modes_summed == 1
    assert info.converged


def test_engine_equals_brute_force_on_capped_rectangle(catalog, optics, loss):
    policy = TruncationPolicy(rel_tol=1e-12, n_max=4, p_max=3)
    for omega in (0.0, 0.7 * catalog.omega_m):
        oracle = brute_force_chi(catalog, optics, loss, omega, 4, 3)
        with pytest.raises(TruncationNotConverged) as err:
            effective_susceptibility(catalog, optics, loss, policy, omega)
        got = err.value.value
        assert abs(got - oracle) <= 1e-13 * abs(oracle)
        assert not err.value.info.converged
        assert err.value.info.modes_summed == 16

        listed, _ = effective_susceptibility(
            [catalog.mode(n, p) for n in range(1, 5) for p in range(4)],
            optics,
            loss,
            omega=omega,
        )
        assert abs(listed - oracle) <= 1e-13 * abs(oracle)


def test_hermitian_symmetry_and_passivity(response, catalog):
    omegas = catalog.omega_m * np.array([0.3, 0.9, 1.7])
    grid = response.chi_grid(np.concatenate([-omegas, omegas]))
    np.testing.assert_array_equal(grid[:3], np.conj(grid[3:]))
    assert (grid[3:].imag > 0).all()

    omega = 0.52 * catalog.omega_m
    assert response.chi(-omega) == pytest.approx(response.chi(omega).conjugate(), rel=1e-14)


def test_grid_agrees_with_scalar_path(response, catalog):
    omegas = catalog.omega_m * np.array([0.1, 0.45, 0.8, 1.2, 2.5])
    grid = response.chi_grid(omegas)
    tol = 2 * response.policy.rel_tol * abs(response.chi0)
    for w, g in zip(omegas, grid):
        assert abs(g - response.chi(float(w))) <= tol


def test_chi_grid_worker_count_invariance(response, catalog):
    omegas = np.linspace(0.05, 2.2, 41) * catalog.omega_m
    one = response.chi_grid(omegas, workers=1)
    four = response.chi_grid(omegas, workers=4)
    np.testing.assert_array_equal(one, four)
    np.testing.assert_array_equal(one, response.chi_grid(omegas, workers=1))


def test_truncation_soundness(catalog, optics, loss):
    # halving the tolerance moves the answer by less than the coarse tolerance,
    # and the certified error bound covers the distance to a tighter reference
    values = {}
    for tol in (1e-2, 5e-3, 1e-3, 1e-4):
        resp = EffectiveResponse(
            catalog, optics, loss=loss, policy=TruncationPolicy(rel_tol=tol)
        )
        values[tol] = (resp.chi0, resp.dc_info.error_bound)
    for coarse, fine in ((1e-2, 5e-3), (1e-3, 5e-4)):
        if fine not in values:
            resp = EffectiveResponse(
                catalog, optics, loss=loss, policy=TruncationPolicy(rel_tol=fine)
            )
            values[fine] = (resp.chi0, resp.dc_info.error_bound)
        drift = abs(values[coarse][0] - values[fine][0])
        assert drift < coarse * abs(values[fine][0])

    ref = values[1e-4][0]
    for tol in (1e-2, 1e-3):
        chi0, bound = values[tol]
        assert abs(chi0 - ref) <= bound + 1e-4 * abs(ref)
        assert bound <= tol * abs(chi0)


def test_dc_info_bookkeeping(response):
    info = response.dc_info
    assert info.converged
    assert info.modes_summed > 0
    assert info.families > 0
    assert info.deepest_p > 0
    assert info.grid_equivalent_modes >= info.modes_summed
    assert 0 < info.error_bound <= response.policy.rel_tol * response.chi0


def test_capped_policy_reports_partial_values(catalog, optics, loss):
    policy = TruncationPolicy(rel_tol=1e-3, n_max=3, p_max=2)
    resp = EffectiveResponse(catalog, optics, loss=loss, policy=policy)
    assert not resp.dc_info.converged
    oracle = brute_force_chi(catalog, optics, loss, 0.0, 3, 2)
    assert resp.chi0 == pytest.approx(oracle.real, rel=1e-13)

    omega = 0.1 * catalog.omega_m
    with pytest.raises(TruncationNotConverged) as err:
        resp.chi(omega)
    assert err.value.value == pytest.approx(
        brute_force_chi(catalog, optics, loss, omega, 3, 2), rel=1e-12
    )

    omegas = np.array([0.1, 0.2]) * catalog.omega_m
    with pytest.raises(TruncationNotConverged) as err:
        resp.chi_grid(omegas)
    assert np.asarray(err.value.value).shape == (2,)


def test_policy_validation():
    with pytest.raises(ValueError):
        TruncationPolicy(rel_tol=0.0)
    with pytest.raises(ValueError):
        TruncationPolicy(rel_tol=1.5)
    with pytest.raises(ValueError):
        TruncationPolicy(n_max=0)
    with pytest.raises(ValueError):
        TruncationPolicy(p_max=-1)


def test_viscous_loss_response(catalog, optics):
    loss = ViscousLossAngle(Q_FACTOR, catalog.omega_m)
    resp = EffectiveResponse(catalog, optics, loss=loss)
    assert resp.chi0 > 0
    val = resp.chi(0.5 * catalog.omega_m)
    assert math.isfinite(abs(val))
    assert val.imag > 0


# ---------------------------------------------------------------------------
# thermal force spectrum


def test_single_oscillator_thermal_closed_form(catalog):
    mass, omega_m = 1e-6, catalog.omega_m
    osc = SingleOscillator(mass, omega_m, ConstantLossAngle(Q_FACTOR))
    assert osc.chi0 == pytest.approx(1.0 / (mass * omega_m**2), rel=1e-15)
    assert osc.chi_tilde(0.0) == pytest.approx(1.0, rel=1e-15)

    temperature = 4.0
    rng = np.random.default_rng(5)
    for omega in rng.uniform(0.05, 3.0, size=20) * omega_m:
        got = thermal_force_spectrum(osc, temperature, float(omega))
        expected = 2 * K_B * temperature * mass * omega_m**2 / (Q_FACTOR * omega)
        assert got == pytest.approx(expected, rel=1e-12)


def test_thermal_spectrum_edges(response, catalog):
    omegas = np.array([0.2, 0.9, 1.4]) * catalog.omega_m
    assert np.all(thermal_force_spectrum(response, 0.0, omegas) == 0.0)
    with pytest.raises(ValueError):
        thermal_force_spectrum(response, -1.0, omegas)
    with pytest.raises(ValueError):
        thermal_force_spectrum_from_chi(1.0 + 1.0j, 4.0, 0.0)

    spectrum = thermal_force_spectrum(response, 4.0, omegas)
    assert (spectrum > 0).all()  # passivity: Im(1/chi) < 0 for omega > 0

    # even in frequency: chi(-w) = conj(chi(w)) flips Im(1/chi), and so does 1/w
    sym = thermal_force_spectrum(response, 4.0, -omegas)
    np.testing.assert_allclose(sym, spectrum, rtol=1e-12)

    scalar = thermal_force_spectrum(response, 4.0, float(omegas[1]))
    assert scalar == pytest.approx(spectrum[1], rel=1e-10)


def test_fdt_reconstruction_three_modes(catalog, optics, loss):
    # independent modal Langevin forces must reassemble into the effective
    # force spectrum predicted by Im(1/chi_eff)
    indices = [(1, 0), (1, 1), (2, 0)]
    modes = [catalog.mode(n, p) for n, p in indices]
    weights = [
        overlap_analytic(optics, catalog.geometry, ModeIndex(n, p)) ** 2
        for n, p in indices
    ]
    temperature = 4.0
    omegas = np.linspace(0.1, 2.4, 12) * catalog.omega_m
    for omega in omegas:
        chis = [modal_susceptibility(m, loss, float(omega)) for m in modes]
        chi_eff = sum(w * c for w, c in zip(weights, chis))

        direct = thermal_force_spectrum_from_chi(chi_eff, temperature, float(omega))
        phi = loss.loss_angle(float(omega))
        recon = sum(
            w * abs(c) ** 2 * (2 * K_B * temperature / omega) * m.mass * m.omega**2 * phi
            for w, c, m in zip(weights, chis, modes)
        ) / abs(chi_eff) ** 2
        assert recon == pytest.approx(direct, rel=1e-9)


# ---------------------------------------------------------------------------
# masses


def test_optical_mass_closed_form(geometry, material, optics):
    expected = (12 / math.pi**2) * (math.pi / 4) * 2200.0 * 1.5e-3 * (200e-6) ** 2
    assert optical_mass(geometry, material, optics) == pytest.approx(expected, rel=1e-13)


def test_mass_report_ordering(catalog, optics):
    report = effective_mass(catalog, optics)
    assert isinstance(report, MassReport)
    assert report.m_1 == pytest.approx(catalog.m1, rel=1e-15)
    assert report.m_opt <= report.m_eff
    # one-term lower bound on chi_eff[0] gives an upper bound on M_eff
    ov2 = overlap_analytic(optics, catalog.geometry, ModeIndex(1, 0)) ** 2
    upper = catalog.m1 * (catalog.mode(1, 0).omega / catalog.omega_m) ** 2 / ov2
    assert report.m_eff <= upper


def test_mass_matches_response_and_decreases_with_waist(catalog, optics, response):
    report = effective_mass(catalog, optics)
    assert response.effective_mass() == pytest.approx(
        report.m_eff, rel=2 * response.policy.rel_tol
    )

    masses = []
    for ratio in np.geomspace(1.0, 40.0, 6):
        opt = OpticalMode(wavelength=WAVELENGTH, waist=float(catalog.w1 / ratio))
        masses.append(effective_mass(catalog, opt).m_eff)
    assert (np.diff(masses) < 0).all()  # shrinking the waist lowers the mass


def test_effective_mass_raises_on_caps(catalog, optics):
    with pytest.raises(TruncationNotConverged) as err:
        effective_mass(catalog, optics, TruncationPolicy(rel_tol=1e-3, n_max=2, p_max=1))
    assert err.value.value.real > 0


# ---------------------------------------------------------------------------
# reference responses


def test_kerr_response_is_flat():
    resp = KerrResponse(chi0=1.4e-8)
    assert resp.chi0 == 1.4e-8
    assert resp.chi(12345.6) == 1.4e-8
    assert resp.chi_tilde(9e6) == 1.0
    np.testing.assert_array_equal(
        resp.chi_grid(np.array([0.0, 1.0, 2.0])), np.full(3, 1.4e-8)
    )


def test_single_oscillator_response_shape(catalog):
    osc = SingleOscillator(1e-6, catalog.omega_m, ConstantLossAngle(Q_FACTOR))
    omegas = catalog.omega_m * np.array([0.5, 1.0, 1.5])
    grid = osc.chi_grid(omegas)
    assert grid[1].imag == pytest.approx(Q_FACTOR * osc.chi0, rel=1e-9)  # on resonance
    np.testing.assert_array_equal(osc.chi_grid(-omegas), np.conj(grid))
    assert osc.chi(float(omegas[2])) == pytest.approx(complex(grid[2]), rel=1e-15)
