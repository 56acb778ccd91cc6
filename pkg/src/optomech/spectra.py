"""Quadrature noise spectra of the field reflected by the compliant cavity.

Conventions. Fourier transforms use x[W] = int x(t) e^{iWt} dt, and spectra
are symmetrized: <x[W] y[W']> = 2 pi delta(W + W') S_xy[W]. The input field
fluctuation delta a_in carries vacuum noise, <delta a_in[W] delta a_in*[W']>
symmetrized = pi delta(W + W'), so a quadrature of the free field has unit
spectrum (shot noise). The thermal force F_T is real with spectrum S_T[W]
given by the fluctuation-dissipation theorem (thermal_force_spectrum).

Linearized round trip. Around a stationary state (alpha, psi_bar) the
intracavity fluctuation obeys, in Fourier space,

    (gamma - i psi_bar - i W tau) delta a
        = sqrt(2 gamma) delta a_in
          + i alpha ( 2 k chi_eff[W] (2 hbar k alpha (delta a + delta a*)) + 2 k chi_eff[W] F_T ),

the mirror having been eliminated: displacement = chi_eff[W] times radiation
pressure 2 hbar k alpha (delta a + delta a*) plus F_T, and a displacement dx
detunes the round trip by 2 k dx. With psi_NL = 4 hbar k^2 chi_eff[0] I and
chit[W] = chi_eff[W]/chi_eff[0], solving the pair (delta a, delta a*) and
feeding delta a_out = sqrt(2 gamma) delta a - delta a_in gives

    delta a_out[W] = c1[W] delta a_in[W] + c2[W] delta a_in*[W] + c_T[W] F_T[W],

    Delta[W] = (gamma - i W tau)^2 + psi_bar^2 + 2 psi_bar psi_NL chit[W]
    c1[W] = [ (gamma + i psi_bar)(gamma + i psi_bar + 2 i psi_NL chit[W])
              + (W tau)^2 ] / Delta[W]
    c2[W] = 2 i gamma psi_NL chit[W] / Delta[W]
    c_T[W] = 2 i sqrt(2 gamma) k alpha (gamma + i psi_bar - i W tau)
             chi_eff[W] / Delta[W]

(delta a_in* denotes the transform of the conjugate field, evaluated at W).
Without optomechanical coupling |c1| = 1 at every frequency: an empty lossless
cavity only rotates the phase. At W = 0 the photon-number identity
|c1|^2 - |c2|^2 = 1 holds whenever the operating point is on a branch
(Delta[0] = sigma gamma^2 != 0).

Homodyne spectrum. The theta quadrature of the output,
X_theta[W] = e^{-i theta} delta a_out[W] + e^{i theta} delta a_out~[W] with
delta a_out~[W] = conj-amplitude transform = (c2[-W])* delta a_in[W] + ...,
collects amplitude and conjugate routes:

    A_theta[W] = e^{-i theta} c1[W] + e^{i theta} conj(c2[-W])
    C_theta[W] = e^{-i theta} c_T[W] + e^{i theta} conj(c_T[-W])
    S_theta[W] = (|A_theta[W]|^2 + |A_theta[-W]|^2) / 2 + |C_theta[W]|^2 S_T[W]

using that F_T is real (its two routes interfere coherently) while the two
vacuum routes at +W and -W are independent. Expanding the squares,

    S_theta = a + Re( b e^{2 i theta} ),
    a = ( |c1+|^2 + |c1-|^2 + |c2+|^2 + |c2-|^2 ) / 2
        + ( |cT+|^2 + |cT-|^2 ) S_T
    b = conj( c1+ c2- + c1- c2+ + 2 cT+ cT- S_T ),

(+/- marking evaluation at +W/-W), so the extremal quadratures are
S_opt = a - |b| at theta_opt = (pi - arg b)/2 and S_max = a + |b| at
theta_opt + pi/2. S_opt < 1 is squeezing of the reflected field.

All responses handed to this module must satisfy chi(-W) = conj chi(W)
(real-time response); the catalog, single-oscillator and Kerr responses do.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .cavity import CavityParams, OperatingPoint, Stability
from .response import (
    KerrResponse,
    SingleOscillator,
    TruncationNotConverged,
    thermal_force_spectrum_from_chi,
)

__all__ = [
    "NoiseCoefficients",
    "DegenerateDenominatorError",
    "noise_coefficients",
    "quadrature_spectrum",
    "optimum_spectrum",
    "QuadratureSpectrum",
    "squeeze_scan",
    "reference_response",
]


class DegenerateDenominatorError(RuntimeError):
    """The cavity response denominator vanished (turning-point operating point)."""


@dataclass(frozen=True)
class NoiseCoefficients:
    """Scattering of input vacuum and thermal force into the output field."""

    c1: np.ndarray
    c2: np.ndarray
    c_t: np.ndarray
    delta: np.ndarray


def _coefficients_from_chi(
    op: OperatingPoint,
    cav: CavityParams,
    wavevector: float,
    omega: np.ndarray,
    chi: np.ndarray,
    chi0: float,
) -> NoiseCoefficients:
    gamma = cav.gamma
    chit = chi / chi0
    wt = omega * cav.tau
    gp = gamma + 1j * op.psi_bar
    delta = (gamma - 1j * wt) ** 2 + op.psi_bar ** 2 + 2.0 * op.psi_bar * op.psi_nl * chit
    if np.any(np.abs(delta) < 1e-12 * gamma ** 2):
        raise DegenerateDenominatorError(
            "cavity response denominator vanished; the operating point sits "
            "at a turning point of the bistability curve"
        )
    c1 = (gp * (gp + 2j * op.psi_nl * chit) + wt ** 2) / delta
    c2 = 2j * gamma * op.psi_nl * chit / delta
    c_t = (
        2j
        * np.sqrt(2.0 * gamma)
        * wavevector
        * op.alpha
        * (gp - 1j * wt)
        * chi
        / delta
    )
    return NoiseCoefficients(c1=c1, c2=c2, c_t=c_t, delta=delta)


def noise_coefficients(
    op: OperatingPoint,
    cav: CavityParams,
    resp,
    wavevector: float,
    omega,
) -> NoiseCoefficients:
    """c1, c2, c_T at the given frequencies (scalar or array).

    Warns once when the operating point is on the unstable branch: the
    linearized spectra are then formal (fluctuations grow instead of
    relaxing).
    """
    if op.stability is Stability.UNSTABLE:
        warnings.warn(
            "operating point lies on the unstable branch; linearized spectra "
            "do not describe a stationary state",
            stacklevel=2,
        )
    arr = np.asarray(omega, dtype=float)
    if arr.ndim == 0:
        chi = np.asarray(resp.chi(float(arr)))
    else:
        chi = resp.chi_grid(arr)
    return _coefficients_from_chi(op, cav, wavevector, arr, chi, resp.chi0)


def _spectrum_ab(
    cp: NoiseCoefficients, cm: NoiseCoefficients, s_t
) -> tuple[np.ndarray, np.ndarray]:
    """Isotropic part a and interference amplitude b of S_theta = a + Re(b e^2it)."""
    a = 0.5 * (
        np.abs(cp.c1) ** 2
        + np.abs(cm.c1) ** 2
        + np.abs(cp.c2) ** 2
        + np.abs(cm.c2) ** 2
    ) + (np.abs(cp.c_t) ** 2 + np.abs(cm.c_t) ** 2) * s_t
    b = np.conj(cp.c1 * cm.c2 + cm.c1 * cp.c2 + 2.0 * cp.c_t * cm.c_t * s_t)
    return a, b


def quadrature_spectrum(
    coeffs_plus: NoiseCoefficients,
    coeffs_minus: NoiseCoefficients,
    s_t,
    theta: float,
) -> np.ndarray:
    """Symmetrized output spectrum of the theta quadrature, in shot-noise units.

    coeffs_plus/coeffs_minus are the noise coefficients at +W and -W; s_t is
    the thermal force spectrum at |W|.
    """
    a, b = _spectrum_ab(coeffs_plus, coeffs_minus, s_t)
    return np.real(a + np.real(b * np.exp(2j * theta)))


def optimum_spectrum(
    coeffs_plus: NoiseCoefficients,
    coeffs_minus: NoiseCoefficients,
    s_t,
) -> tuple[np.ndarray, np.ndarray]:
    """Minimal spectrum over theta and the angle reaching it.

    Returns (s_opt, theta_opt) with theta_opt in [0, pi); where the spectrum
    is theta-independent (|b| negligible) theta_opt is reported as 0.
    """
    a, b = _spectrum_ab(coeffs_plus, coeffs_minus, s_t)
    mag = np.abs(b)
    s_opt = np.real(a) - mag
    theta_opt = np.mod((np.pi - np.angle(b)) / 2.0, np.pi)
    theta_opt = np.where(mag <= 1e-15 * np.real(a), 0.0, theta_opt)
    return s_opt, theta_opt


@dataclass(frozen=True)
class QuadratureSpectrum:
    """Squeezing scan over a frequency grid (angles in rad, spectra in shot units)."""

    omegas: np.ndarray
    s_opt: np.ndarray
    theta_opt: np.ndarray
    thetas: np.ndarray | None
    s_theta: np.ndarray | None  # shape (omegas, thetas) when thetas given


def squeeze_scan(
    op: OperatingPoint,
    cav: CavityParams,
    resp,
    wavevector: float,
    omegas,
    temperature: float,
    thetas=None,
    workers: int = 1,
) -> QuadratureSpectrum:
    """Optimal squeezing across a frequency grid, plus fixed-angle spectra.

    The response is evaluated once on the +W grid; chi(-W) = conj chi(W)
    supplies the mirror grid. If the response hit its truncation caps the
    scan is completed with the partial values and TruncationNotConverged is
    re-raised carrying the finished QuadratureSpectrum as .value.
    """
    if op.stability is Stability.UNSTABLE:
        warnings.warn(
            "operating point lies on the unstable branch; linearized spectra "
            "do not describe a stationary state",
            stacklevel=2,
        )
    omegas = np.asarray(omegas, dtype=float)
    trunc: TruncationNotConverged | None = None
    try:
        chi_p = resp.chi_grid(omegas, workers=workers)
    except TruncationNotConverged as exc:
        chi_p = np.asarray(exc.value)
        trunc = exc
    cp = _coefficients_from_chi(op, cav, wavevector, omegas, chi_p, resp.chi0)
    cm = _coefficients_from_chi(
        op, cav, wavevector, -omegas, np.conj(chi_p), resp.chi0
    )
    s_t = thermal_force_spectrum_from_chi(chi_p, temperature, omegas)
    s_opt, theta_opt = optimum_spectrum(cp, cm, s_t)
    if thetas is not None:
        thetas = np.asarray(thetas, dtype=float)
        a, b = _spectrum_ab(cp, cm, s_t)
        s_theta = np.real(
            a[:, None] + np.real(b[:, None] * np.exp(2j * thetas[None, :]))
        )
    else:
        s_theta = None
    result = QuadratureSpectrum(
        omegas=omegas, s_opt=s_opt, theta_opt=theta_opt, thetas=thetas, s_theta=s_theta
    )
    if trunc is not None:
        raise TruncationNotConverged(str(trunc), result, trunc.info)
    return result


def reference_response(
    kind: str, chi0: float, omega_m: float | None = None, loss=None
):
    """Reduced models sharing the DC response: 'kerr' or 'single_oscillator'.

    The Kerr reference keeps only the static spring (pure ponderomotive
    squeezing, no thermal noise); the single oscillator lumps the whole
    catalog into one mode of mass 1/(W_M^2 chi_eff[0]) at W_M.
    """
    if kind == "kerr":
        return KerrResponse(chi0)
    if kind == "single_oscillator":
        if omega_m is None:
            raise ValueError("single_oscillator reference needs omega_m")
        return SingleOscillator(1.0 / (omega_m ** 2 * chi0), omega_m, loss)
    raise ValueError(f"unknown reference kind {kind!r}")
