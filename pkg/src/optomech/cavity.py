"""Mean field of the detuned cavity with a compliant back mirror.

Writing the round-trip detuning as psi and the amplitude decay as gamma
(both small, single-mode regime), the stationary intracavity photon flux
I = |alpha|^2 obeys

    I (gamma^2 + psi_bar^2) = 2 gamma (lambda / h c) P_in,

where the mean detuning psi_bar = psi_0 + psi_NL self-consistently includes
the radiation-pressure shift

    psi_NL = 4 hbar k^2 chi_eff[0] I

from the static mirror displacement. Scaling x = psi_NL/gamma turns the
balance at fixed empty-cavity detuning psi_0 into the cubic

    x^3 + 2 psi0 x^2 + (1 + psi0^2) x - kappa = 0,
    kappa = 4 hbar k^2 chi_eff[0] * 2 (lambda/hc) P_in / gamma^2,

whose S-curve carries one or three positive branches; kappa >= 0 admits no
negative root. The normalized slope

    sigma = d kappa / d x = (gamma^2 + psi_bar^2 + 2 psi_bar psi_NL) / gamma^2

is the cubic's derivative: sigma > 0 on the outer (stable) branches,
sigma < 0 on the middle (unstable) one, sigma = 0 at the turning points.
sigma also rescales the effective cavity response in the noise spectra, so
operating points carry it along.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT, HBAR, PLANCK

__all__ = [
    "CavityParams",
    "Stability",
    "OperatingPoint",
    "GivenMeanDetuning",
    "GivenEmptyDetuning",
    "mean_intensity",
    "nonlinear_phase",
    "bistability_slope",
    "solve_operating_point",
]

# sigma is O(1) on the normalized curve; below this it is a turning point.
_TURNING_TOL = 1e-12


@dataclass(frozen=True)
class CavityParams:
    """Single-mode cavity: round-trip amplitude loss gamma, round-trip time tau."""

    gamma: float
    tau: float

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma < 0.1:
            raise ValueError(
                f"gamma must be in (0, 0.1) for the single-mode mean-field "
                f"treatment, got {self.gamma}"
            )
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")

    @property
    def finesse(self) -> float:
        return math.pi / self.gamma

    @property
    def bandwidth(self) -> float:
        """Amplitude decay rate gamma/tau, in rad/s."""
        return self.gamma / self.tau


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    TURNING_POINT = "turning_point"


@dataclass(frozen=True)
class OperatingPoint:
    """One self-consistent stationary state of the driven cavity.

    Detunings are round-trip phases (same units as gamma); intensity is the
    intracavity photon flux in 1/s and alpha its square root.
    """

    psi_bar: float
    psi0: float
    psi_nl: float
    intensity: float
    alpha: float
    sigma_norm: float
    stability: Stability


@dataclass(frozen=True)
class GivenMeanDetuning:
    """Anchor the solved state at the dressed detuning psi_bar (unique point)."""

    psi_bar: float


@dataclass(frozen=True)
class GivenEmptyDetuning:
    """Anchor at the empty-cavity detuning psi_0 (up to three points)."""

    psi0: float


def mean_intensity(
    cav: CavityParams, psi_bar: float, p_in: float, wavelength: float
) -> float:
    """Photon flux I = 2 gamma (lambda/hc) P_in / (gamma^2 + psi_bar^2), in 1/s."""
    if p_in < 0:
        raise ValueError(f"input power must be >= 0, got {p_in}")
    flux_in = wavelength / (PLANCK * C_LIGHT) * p_in
    return 2.0 * cav.gamma * flux_in / (cav.gamma ** 2 + psi_bar ** 2)


def nonlinear_phase(chi_eff0: float, intensity: float, wavevector: float) -> float:
    """Radiation-pressure detuning psi_NL = 4 hbar k^2 chi_eff[0] I."""
    return 4.0 * HBAR * wavevector ** 2 * chi_eff0 * intensity


def bistability_slope(
    gamma: float, psi_bar: float, psi_nl: float
) -> tuple[float, Stability]:
    """Normalized S-curve slope sigma and its stability classification."""
    sigma = (gamma ** 2 + psi_bar ** 2 + 2.0 * psi_bar * psi_nl) / gamma ** 2
    if abs(sigma) < _TURNING_TOL:
        return sigma, Stability.TURNING_POINT
    return sigma, Stability.STABLE if sigma > 0 else Stability.UNSTABLE


def _assemble(
    cav: CavityParams, psi0: float, psi_nl: float, intensity: float
) -> OperatingPoint:
    psi_bar = psi0 + psi_nl
    sigma, stab = bistability_slope(cav.gamma, psi_bar, psi_nl)
    return OperatingPoint(
        psi_bar=psi_bar,
        psi0=psi0,
        psi_nl=psi_nl,
        intensity=intensity,
        alpha=math.sqrt(intensity),
        sigma_norm=sigma,
        stability=stab,
    )


def solve_operating_point(
    cav: CavityParams,
    p_in: float,
    wavelength: float,
    anchor: GivenMeanDetuning | GivenEmptyDetuning,
    chi_eff0: float,
) -> list[OperatingPoint]:
    """Stationary states for the given anchor, sorted by ascending intensity.

    With the dressed detuning anchored the state is unique (the operator has
    already chosen a branch); with the empty-cavity detuning anchored all
    real non-negative roots of the bistability cubic are returned.
    """
    if p_in < 0:
        raise ValueError(f"input power must be >= 0, got {p_in}")
    gamma = cav.gamma
    k = 2.0 * math.pi / wavelength
    coupling = 4.0 * HBAR * k ** 2 * chi_eff0  # psi_NL per unit flux

    if isinstance(anchor, GivenMeanDetuning):
        intensity = mean_intensity(cav, anchor.psi_bar, p_in, wavelength)
        psi_nl = coupling * intensity
        return [_assemble(cav, anchor.psi_bar - psi_nl, psi_nl, intensity)]

    psi0 = anchor.psi0
    flux_in = wavelength / (PLANCK * C_LIGHT) * p_in
    if coupling == 0.0:
        # Rigid mirror: the balance is linear.
        intensity = mean_intensity(cav, psi0, p_in, wavelength)
        return [_assemble(cav, psi0, 0.0, intensity)]

    s0 = psi0 / gamma
    kappa = coupling * 2.0 * flux_in / gamma ** 2
    roots = np.roots([1.0, 2.0 * s0, 1.0 + s0 ** 2, -kappa])

    def f(x: float) -> float:
        return x * (x * (x + 2.0 * s0) + 1.0 + s0 ** 2) - kappa

    def fprime(x: float) -> float:
        return 3.0 * x ** 2 + 4.0 * s0 * x + 1.0 + s0 ** 2

    xs: list[float] = []
    scale = max(1.0, kappa)
    for root in roots:
        if abs(root.imag) > 1e-8 * (abs(root.real) + 1.0):
            continue
        x = float(root.real)
        if x < -1e-12 * scale:
            continue  # kappa >= 0 admits no negative branch
        for _ in range(50):
            deriv = fprime(x)
            if abs(deriv) < 1e-9:
                break  # turning point; the companion-matrix root stands
            step = f(x) / deriv
            x -= step
            if abs(step) <= 1e-15 * max(abs(x), 1e-300):
                break
        x = max(x, 0.0)
        if all(abs(x - seen) > 1e-8 * max(1.0, abs(x)) for seen in xs):
            xs.append(x)

    if not xs:
        raise RuntimeError(
            f"no stationary state found for psi0/gamma={s0:g}, kappa={kappa:g}"
        )
    points = []
    for x in sorted(xs):
        psi_nl = x * gamma
        points.append(_assemble(cav, psi0, psi_nl, psi_nl / coupling))
    return points
