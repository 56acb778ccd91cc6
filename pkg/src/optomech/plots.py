"""Figure rendering for the CLI --plot flag. Headless (Agg) only."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_modes_plot",
    "save_susceptibility_plot",
    "save_mass_scan_plot",
    "save_operating_point_plot",
    "save_squeeze_plot",
    "save_bistability_plot",
]

_DPI = 150


def save_modes_plot(path, ns, ps, f_hz, overlaps) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    sc = ax.scatter(
        ns,
        np.asarray(f_hz) / 1e6,
        c=ps,
        s=12 + 120 * np.abs(overlaps),
        cmap="viridis",
    )
    fig.colorbar(sc, ax=ax, label="transverse order p")
    ax.set_xlabel("longitudinal index n")
    ax.set_ylabel("frequency [MHz]")
    ax.set_title("acoustic mode catalog (marker size: |overlap|)")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_susceptibility_plot(path, omega_norm, chi, chi0) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogy(omega_norm, np.abs(chi), label=r"$|\chi_{\rm eff}[\Omega]|$")
    ax.axhline(chi0, color="gray", lw=0.8, ls="--", label=r"$\chi_{\rm eff}[0]$")
    ax.set_xlabel(r"$\Omega/\Omega_M$")
    ax.set_ylabel(r"$|\chi_{\rm eff}|$ [m/N]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_mass_scan_plot(path, ratios, m_eff, m_opt, m_1) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(ratios, np.asarray(m_eff) * 1e6, label=r"$M_{\rm eff}$")
    ax.loglog(ratios, np.asarray(m_opt) * 1e6, "--", label=r"$M_{\rm opt}$")
    ax.axhline(m_1 * 1e6, color="gray", lw=0.8, ls=":", label=r"$M_1$")
    ax.set_xlabel(r"$w_1/w_0$")
    ax.set_ylabel("mass [mg]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_operating_point_plot(path, psi0_norm, intensity, points, gamma) -> None:
    """Steady-state intensity against empty-cavity detuning, solved points marked."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(psi0_norm, intensity, lw=1.0)
    for pt in points:
        ax.plot(
            pt.psi0 / gamma,
            pt.intensity,
            "o" if pt.stability.value == "stable" else "x",
            color="crimson",
        )
    ax.set_xlabel(r"$\Psi_0/\gamma$")
    ax.set_ylabel(r"$\bar I$ [1/s]")
    ax.set_title("cavity resonance curve at the configured drive")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_squeeze_plot(
    path,
    omega_norm,
    s_opt,
    s_theta0,
    s_theta90,
    thetas=None,
    s_angle=None,
    omega_star=None,
) -> None:
    if thetas is None:
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        axes = [ax]
    else:
        fig, axes = plt.subplots(1, 2, figsize=(9.5, 4.0))
    ax = axes[0]
    ax.semilogy(omega_norm, s_theta0, lw=0.8, label=r"$S_{\theta=0}$")
    ax.semilogy(omega_norm, s_theta90, lw=0.8, label=r"$S_{\theta=\pi/2}$")
    ax.semilogy(omega_norm, s_opt, lw=1.4, label=r"$S_{\rm opt}$")
    ax.axhline(1.0, color="gray", lw=0.8, ls="--")
    ax.set_xlabel(r"$\Omega/\Omega_M$")
    ax.set_ylabel("noise spectrum [shot units]")
    ax.legend()
    if thetas is not None:
        ax2 = axes[1]
        ax2.plot(thetas, s_angle, lw=1.0)
        ax2.axhline(1.0, color="gray", lw=0.8, ls="--")
        ax2.set_xlabel(r"$\theta$ [rad]")
        ax2.set_ylabel(
            rf"$S_\theta$ at $\Omega = {float(omega_star):.3g}\,\Omega_M$"
        )
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_bistability_plot(path, powers, intensities, stabilities) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    powers = np.asarray(powers)
    intensities = np.asarray(intensities)
    stable = np.array([s == "stable" for s in stabilities])
    ax.plot(
        powers[stable] * 1e3, intensities[stable], ".", ms=4, label="stable"
    )
    if np.any(~stable):
        ax.plot(
            powers[~stable] * 1e3,
            intensities[~stable],
            "x",
            ms=4,
            color="crimson",
            label="unstable",
        )
    ax.set_xlabel(r"$P_{\rm in}$ [mW]")
    ax.set_ylabel(r"$\bar I$ [1/s]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
