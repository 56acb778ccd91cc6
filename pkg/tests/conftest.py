"""Shared fixtures and the acceptance-criteria summary hook.

The heavy objects (mode catalog, effective response) are session scoped:
they are immutable and every module reads the same defaults, so building
them once keeps the suite fast.
"""

import pytest

from optomech import (
    ConstantLossAngle,
    EffectiveResponse,
    MaterialProperties,
    OpticalMode,
    PlanoConvexCatalog,
    PlanoConvexGeometry,
)

# Fused-silica resonator and drive defaults used throughout the suite.
RHO = 2200.0
C_L = 5960.0
C_T = 3760.0
Q_FACTOR = 1e6
H0 = 1.5e-3
R_CURV = 0.15
WAVELENGTH = 800e-9
WAIST = 200e-6
GAMMA = 1e-5
P_IN = 0.010


@pytest.fixture(scope="session")
def material():
    return MaterialProperties(rho=RHO, c_l=C_L, c_t=C_T, q_factor=Q_FACTOR)


@pytest.fixture(scope="session")
def geometry():
    return PlanoConvexGeometry(h0=H0, r_curv=R_CURV)


@pytest.fixture(scope="session")
def catalog(geometry, material):
    return PlanoConvexCatalog(geometry, material)


@pytest.fixture(scope="session")
def optics():
    return OpticalMode(wavelength=WAVELENGTH, waist=WAIST)


@pytest.fixture(scope="session")
def loss():
    return ConstantLossAngle(Q_FACTOR)


@pytest.fixture(scope="session")
def response(catalog, optics, loss):
    return EffectiveResponse(catalog, optics, loss=loss)


# ---------------------------------------------------------------------------
# Acceptance reporting: one PASS/FAIL line per criterion after the run.

_CRITERIA = [
    (
        "test_dc_susceptibility_value_and_runtime",
        "chi_eff[0] within 5% of 1.4e-8 m/N; certified million-term sum under 10 s",
    ),
    (
        "test_nonlinear_phase_and_slope_chain",
        "operating point psi_nl/gamma and sigma_norm bands at 10 mW "
        "(waists 100/200/400 um)",
    ),
    (
        "test_mode_catalog_fundamentals",
        "fundamental mode: w_1, Omega_M/2pi and M_1 hit their targets",
    ),
    (
        "test_effective_mass_values_and_monotonicity",
        "effective mass values, strict monotonicity in waist, M_opt <= M_eff",
    ),
    (
        "test_shot_noise_normalization",
        "undriven cold cavity: S_theta = 1 to 1e-12 on (0, 10 Omega_cav]",
    ),
    (
        "test_symplectic_and_purity_identities",
        "|c1|^2 - |c2|^2 = 1 and Kerr S_min*S_max = 1 at Omega = 0",
    ),
    (
        "test_oracle_equivalences",
        "oracles agree: overlap quadrature, theta minimizer, 16-term brute force",
    ),
    (
        "test_fdt_closure_three_modes",
        "fluctuation-dissipation closure on a 3-mode catalog to 1e-6",
    ),
    (
        "test_spectrum_shape_against_references",
        "spectrum shape: Kerr limit at low Omega, thermal excess on resonance, "
        "waist ordering",
    ),
    (
        "test_cli_determinism_across_workers",
        "byte-identical CSVs for repeated runs with 1 and 4 workers",
    ),
]
_CRITERION_LABELS = dict(_CRITERIA)
_acceptance_outcomes: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1].split("[")[0]
    if name not in _CRITERION_LABELS:
        return
    if report.when == "call":
        _acceptance_outcomes[name] = "PASS" if report.passed else "FAIL"
    elif report.when == "setup" and not report.passed:
        _acceptance_outcomes[name] = "SKIP" if report.skipped else "FAIL"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_outcomes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for idx, (name, label) in enumerate(_CRITERIA, 1):
        outcome = _acceptance_outcomes.get(name, "NOT RUN")
        terminalreporter.write_line(f"{outcome:7s} {idx:2d}. {label}")
