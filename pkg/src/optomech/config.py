"""Flat key = value configuration for the simulator CLI.

The file format is deliberately small: one dotted key per line, '#' starts a
comment, blank lines are ignored. Keys are grouped by prefix:

    material.rho_kg_m3 = 2200          # fused silica
    geometry.h0_m      = 1.5e-3
    cavity.psi_bar_over_gamma = -0.2
    numerics.freq_grid.points = 400

Every key has a default (the standard resonator of the examples), so an
empty file is a valid configuration. Two anchor pairs are mutually
exclusive: cavity.psi_bar_over_gamma XOR cavity.psi0_over_gamma chooses how
the operating point is anchored, and cavity.omega_cav_over_omega_m XOR
cavity.tau_s chooses how the round-trip time is fixed. Unknown keys,
duplicates and malformed values fail with the offending line number.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cavity import CavityParams, GivenEmptyDetuning, GivenMeanDetuning
from .overlap import OpticalMode
from .resonator import MaterialProperties, PlanoConvexGeometry
from .response import ConstantLossAngle, TruncationPolicy, ViscousLossAngle

__all__ = ["ConfigError", "FrequencyGrid", "SimulationConfig", "parse_config", "load_config"]


class ConfigError(Exception):
    """Malformed or inconsistent configuration."""


@dataclass(frozen=True)
class FrequencyGrid:
    """Grid in units of the fundamental frequency W_M."""

    min: float
    max: float
    points: int
    spacing: str

    def build(self, omega_m: float) -> np.ndarray:
        """Absolute angular frequencies in rad/s."""
        if self.spacing == "log":
            return omega_m * np.geomspace(self.min, self.max, self.points)
        return omega_m * np.linspace(self.min, self.max, self.points)


# key -> (kind, default); kind in {float, int, str}. None defaults mark the
# XOR anchor members resolved in parse_config.
_SCHEMA: dict[str, tuple[str, object]] = {
    "material.rho_kg_m3": ("float", 2200.0),
    "material.c_l_m_s": ("float", 5960.0),
    "material.c_t_m_s": ("float", 3760.0),
    "material.q_factor": ("float", 1e6),
    "geometry.h0_m": ("float", 1.5e-3),
    "geometry.r_curv_m": ("float", 0.15),
    "optics.lambda_m": ("float", 800e-9),
    "optics.waist_m": ("float", 200e-6),
    "cavity.gamma": ("float", 1e-5),
    "cavity.omega_cav_over_omega_m": ("float", None),
    "cavity.tau_s": ("float", None),
    "cavity.psi_bar_over_gamma": ("float", None),
    "cavity.psi0_over_gamma": ("float", None),
    "drive.p_in_w": ("float", 0.010),
    "environment.temperature_k": ("float", 4.0),
    "numerics.rel_tol": ("float", 1e-3),
    "numerics.n_max": ("int", 1_000_000),
    "numerics.p_max": ("int", 1_000_000),
    "numerics.loss_model": ("str", "constant"),
    "numerics.freq_grid.min": ("float", 0.02),
    "numerics.freq_grid.max": ("float", 1.5),
    "numerics.freq_grid.points": ("int", 400),
    "numerics.freq_grid.spacing": ("str", "linear"),
    "numerics.theta_points": ("int", 720),
}

_LOSS_MODELS = ("constant", "viscous")
_SPACINGS = ("linear", "log")


@dataclass(frozen=True)
class SimulationConfig:
    """Resolved configuration; build domain objects through the to_* accessors."""

    rho: float
    c_l: float
    c_t: float
    q_factor: float
    h0: float
    r_curv: float
    wavelength: float
    waist: float
    gamma: float
    omega_cav_over_omega_m: float | None
    tau_s: float | None
    psi_bar_over_gamma: float | None
    psi0_over_gamma: float | None
    p_in: float
    temperature: float
    rel_tol: float
    n_max: int
    p_max: int
    loss_model: str
    freq_grid: FrequencyGrid
    theta_points: int

    def to_material(self) -> MaterialProperties:
        return MaterialProperties(
            rho=self.rho, c_l=self.c_l, c_t=self.c_t, q_factor=self.q_factor
        )

    def to_geometry(self) -> PlanoConvexGeometry:
        return PlanoConvexGeometry(h0=self.h0, r_curv=self.r_curv)

    def to_optics(self) -> OpticalMode:
        return OpticalMode(wavelength=self.wavelength, waist=self.waist)

    def to_policy(self) -> TruncationPolicy:
        return TruncationPolicy(
            rel_tol=self.rel_tol, n_max=self.n_max, p_max=self.p_max
        )

    def to_loss(self, omega_m: float):
        if self.loss_model == "viscous":
            return ViscousLossAngle(self.q_factor, omega_m)
        return ConstantLossAngle(self.q_factor)

    def tau(self, omega_m: float) -> float:
        """Round-trip time: explicit tau_s, or from the bandwidth ratio."""
        if self.tau_s is not None:
            return self.tau_s
        ratio = (
            self.omega_cav_over_omega_m
            if self.omega_cav_over_omega_m is not None
            else 1.0
        )
        return self.gamma / (ratio * omega_m)

    def to_cavity(self, omega_m: float) -> CavityParams:
        return CavityParams(gamma=self.gamma, tau=self.tau(omega_m))

    def anchor(self):
        if self.psi0_over_gamma is not None:
            return GivenEmptyDetuning(self.psi0_over_gamma * self.gamma)
        psi_bar = self.psi_bar_over_gamma if self.psi_bar_over_gamma is not None else -0.2
        return GivenMeanDetuning(psi_bar * self.gamma)

    def resolved_items(self) -> list[tuple[str, str]]:
        """Every effective key with its value, defaults filled in."""

        def fmt(kind: str, value) -> str:
            if kind == "float":
                return f"{value + 0.0:.8e}"
            return str(value)

        values = {
            "material.rho_kg_m3": self.rho,
            "material.c_l_m_s": self.c_l,
            "material.c_t_m_s": self.c_t,
            "material.q_factor": self.q_factor,
            "geometry.h0_m": self.h0,
            "geometry.r_curv_m": self.r_curv,
            "optics.lambda_m": self.wavelength,
            "optics.waist_m": self.waist,
            "cavity.gamma": self.gamma,
            "cavity.omega_cav_over_omega_m": self.omega_cav_over_omega_m,
            "cavity.tau_s": self.tau_s,
            "cavity.psi_bar_over_gamma": self.psi_bar_over_gamma,
            "cavity.psi0_over_gamma": self.psi0_over_gamma,
            "drive.p_in_w": self.p_in,
            "environment.temperature_k": self.temperature,
            "numerics.rel_tol": self.rel_tol,
            "numerics.n_max": self.n_max,
            "numerics.p_max": self.p_max,
            "numerics.loss_model": self.loss_model,
            "numerics.freq_grid.min": self.freq_grid.min,
            "numerics.freq_grid.max": self.freq_grid.max,
            "numerics.freq_grid.points": self.freq_grid.points,
            "numerics.freq_grid.spacing": self.freq_grid.spacing,
            "numerics.theta_points": self.theta_points,
        }
        # Show only the anchor actually in force.
        if self.tau_s is None:
            values["cavity.omega_cav_over_omega_m"] = (
                self.omega_cav_over_omega_m
                if self.omega_cav_over_omega_m is not None
                else 1.0
            )
            del values["cavity.tau_s"]
        else:
            del values["cavity.omega_cav_over_omega_m"]
        if self.psi0_over_gamma is None:
            values["cavity.psi_bar_over_gamma"] = (
                self.psi_bar_over_gamma
                if self.psi_bar_over_gamma is not None
                else -0.2
            )
            del values["cavity.psi0_over_gamma"]
        else:
            del values["cavity.psi_bar_over_gamma"]
        return [
            (key, fmt(_SCHEMA[key][0], values[key]))
            for key in _SCHEMA
            if key in values
        ]


def _convert(key: str, kind: str, text: str, lineno: int):
    if kind == "str":
        value = text.strip("\"'")
        return value
    try:
        number = float(text)
    except ValueError:
        raise ConfigError(
            f"line {lineno}: value for {key!r} is not a number: {text!r}"
        ) from None
    if kind == "int":
        if number != int(number):
            raise ConfigError(f"line {lineno}: {key!r} must be an integer, got {text!r}")
        return int(number)
    return number


def parse_config(text: str) -> SimulationConfig:
    """Parse configuration text; raises ConfigError with line numbers."""
    entries: dict[str, tuple[int, object]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(
                f"line {lineno}: duplicate key {key!r} (first given on line "
                f"{entries[key][0]})"
            )
        entries[key] = (lineno, _convert(key, _SCHEMA[key][0], value, lineno))

    def get(key: str):
        if key in entries:
            return entries[key][1]
        return _SCHEMA[key][1]

    def line_of(key: str) -> int:
        return entries[key][0]

    for first, second in (
        ("cavity.omega_cav_over_omega_m", "cavity.tau_s"),
        ("cavity.psi_bar_over_gamma", "cavity.psi0_over_gamma"),
    ):
        if first in entries and second in entries:
            raise ConfigError(
                f"line {line_of(second)}: {second!r} conflicts with {first!r} "
                f"(line {line_of(first)}); give exactly one"
            )

    def positive(key: str) -> None:
        if get(key) is not None and get(key) <= 0:
            raise ConfigError(f"{key} must be positive, got {get(key)}")

    for key in (
        "material.rho_kg_m3",
        "material.c_l_m_s",
        "material.c_t_m_s",
        "material.q_factor",
        "geometry.h0_m",
        "geometry.r_curv_m",
        "optics.lambda_m",
        "optics.waist_m",
        "cavity.tau_s",
        "cavity.omega_cav_over_omega_m",
    ):
        positive(key)
    if not 0.0 < get("cavity.gamma") < 0.1:
        raise ConfigError(f"cavity.gamma must be in (0, 0.1), got {get('cavity.gamma')}")
    if get("drive.p_in_w") < 0:
        raise ConfigError(f"drive.p_in_w must be >= 0, got {get('drive.p_in_w')}")
    if get("environment.temperature_k") < 0:
        raise ConfigError(
            f"environment.temperature_k must be >= 0, got "
            f"{get('environment.temperature_k')}"
        )
    if not 0.0 < get("numerics.rel_tol") < 1.0:
        raise ConfigError(
            f"numerics.rel_tol must be in (0, 1), got {get('numerics.rel_tol')}"
        )
    if get("numerics.n_max") < 1:
        raise ConfigError(f"numerics.n_max must be >= 1, got {get('numerics.n_max')}")
    if get("numerics.p_max") < 0:
        raise ConfigError(f"numerics.p_max must be >= 0, got {get('numerics.p_max')}")
    if get("numerics.loss_model") not in _LOSS_MODELS:
        raise ConfigError(
            f"numerics.loss_model must be one of {_LOSS_MODELS}, got "
            f"{get('numerics.loss_model')!r}"
        )
    if get("numerics.freq_grid.spacing") not in _SPACINGS:
        raise ConfigError(
            f"numerics.freq_grid.spacing must be one of {_SPACINGS}, got "
            f"{get('numerics.freq_grid.spacing')!r}"
        )
    gmin, gmax = get("numerics.freq_grid.min"), get("numerics.freq_grid.max")
    points = get("numerics.freq_grid.points")
    if points < 2:
        raise ConfigError(f"numerics.freq_grid.points must be >= 2, got {points}")
    if gmin < 0 or gmax <= gmin:
        raise ConfigError(
            f"frequency grid needs 0 <= min < max, got min={gmin}, max={gmax}"
        )
    if get("numerics.freq_grid.spacing") == "log" and gmin <= 0:
        raise ConfigError("log frequency spacing needs numerics.freq_grid.min > 0")
    if get("environment.temperature_k") > 0 and gmin <= 0:
        raise ConfigError(
            "numerics.freq_grid.min must be > 0 when temperature is nonzero "
            "(the thermal spectrum diverges at zero frequency)"
        )
    if get("numerics.theta_points") < 2:
        raise ConfigError(
            f"numerics.theta_points must be >= 2, got {get('numerics.theta_points')}"
        )

    return SimulationConfig(
        rho=get("material.rho_kg_m3"),
        c_l=get("material.c_l_m_s"),
        c_t=get("material.c_t_m_s"),
        q_factor=get("material.q_factor"),
        h0=get("geometry.h0_m"),
        r_curv=get("geometry.r_curv_m"),
        wavelength=get("optics.lambda_m"),
        waist=get("optics.waist_m"),
        gamma=get("cavity.gamma"),
        omega_cav_over_omega_m=get("cavity.omega_cav_over_omega_m"),
        tau_s=get("cavity.tau_s"),
        psi_bar_over_gamma=get("cavity.psi_bar_over_gamma"),
        psi0_over_gamma=get("cavity.psi0_over_gamma"),
        p_in=get("drive.p_in_w"),
        temperature=get("environment.temperature_k"),
        rel_tol=get("numerics.rel_tol"),
        n_max=get("numerics.n_max"),
        p_max=get("numerics.p_max"),
        loss_model=get("numerics.loss_model"),
        freq_grid=FrequencyGrid(
            min=gmin,
            max=gmax,
            points=points,
            spacing=get("numerics.freq_grid.spacing"),
        ),
        theta_points=get("numerics.theta_points"),
    )


def load_config(path: str) -> SimulationConfig:
    """Parse the configuration file at path (FileNotFoundError if absent)."""
    with open(path, "r", encoding="utf-8") as handle:
        return parse_config(handle.read())
