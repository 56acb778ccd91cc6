"""Compression acoustic modes of a plano-convex mirror substrate.

The resonator is a cylindrical substrate, flat on the coated front face and
convex on the back, with central thickness h0 much smaller than the curvature
radius R of the convex side. In that limit the compression modes confined
under the coating form a closed-form catalog indexed by a longitudinal
integer n >= 1 and a transverse integer p >= 0:

    u_np(r, z)   = exp(-r^2 / w_n^2) L_p(2 r^2 / w_n^2) cos(n pi z / h(r))
    w_n^2        = (2 h0 / n pi) sqrt(R h0)
    Omega_np^2   = Omega_M^2 [n^2 + (2/pi) sqrt(h0/R) n (2p + 1)]
    M_n          = (pi / 4) rho h0 w_n^2
    Omega_M      = pi c_l / h0
    h(r)         = h0 - r^2 / (2 R)

Displacements are normalized to unit peak amplitude at r = z = 0; the mode
mass M_n carries the volume integral instead, and depends only on n. Shear
modes induce no longitudinal displacement of the coated face and are not
modeled; the transverse sound velocity is stored for completeness but never
enters the compression-mode formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "MaterialProperties",
    "PlanoConvexGeometry",
    "ModeIndex",
    "AcousticMode",
    "fundamental_frequency",
    "frequency_splitting",
    "acoustic_waist",
    "mode_frequency",
    "mode_mass",
    "acoustic_mode",
    "laguerre",
    "laguerre_weighted",
    "displacement",
]


@dataclass(frozen=True)
class MaterialProperties:
    """Isotropic elastic solid.

    Attributes:
        rho: mass density in kg/m^3.
        c_l: longitudinal sound velocity in m/s.
        c_t: transverse sound velocity in m/s. Carried but unused (shear
            modes are outside the model).
        q_factor: mechanical quality factor of the fundamental mode.
    """

    rho: float
    c_l: float
    c_t: float
    q_factor: float

    def __post_init__(self) -> None:
        if self.rho <= 0:
            raise ValueError(f"density must be positive, got {self.rho}")
        if self.c_l <= 0:
            raise ValueError(f"longitudinal velocity must be positive, got {self.c_l}")
        if self.c_t < 0:
            raise ValueError(f"transverse velocity must be >= 0, got {self.c_t}")
        if self.q_factor <= 0:
            raise ValueError(f"quality factor must be positive, got {self.q_factor}")


@dataclass(frozen=True)
class PlanoConvexGeometry:
    """Plano-convex substrate: central thickness h0, back-face curvature radius r_curv.

    The mode formulas assume h0 << r_curv. Any 0 < h0 < r_curv is accepted;
    the ratio h0/r_curv is attached to run reports as paraxial metadata
    rather than enforced by a hard cutoff.
    """

    h0: float
    r_curv: float

    def __post_init__(self) -> None:
        if not 0 < self.h0 < self.r_curv:
            raise ValueError(
                f"need 0 < h0 < r_curv, got h0={self.h0}, r_curv={self.r_curv}"
            )

    @property
    def aspect_ratio(self) -> float:
        """h0 / r_curv, the small parameter of the paraxial mode catalog."""
        return self.h0 / self.r_curv

    @property
    def aperture_radius(self) -> float:
        """Radius where the local thickness h(r) reaches zero."""
        return math.sqrt(2.0 * self.r_curv * self.h0)

    def thickness(self, r: float) -> float:
        """Local thickness h(r) = h0 - r^2 / (2 r_curv)."""
        return self.h0 - r * r / (2.0 * self.r_curv)


@dataclass(frozen=True)
class ModeIndex:
    """Longitudinal index n >= 1 and transverse index p >= 0."""

    n: int
    p: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"longitudinal index must be >= 1, got {self.n}")
        if self.p < 0:
            raise ValueError(f"transverse index must be >= 0, got {self.p}")


@dataclass(frozen=True)
class AcousticMode:
    """One compression mode: index, acoustic waist, eigenfrequency, mass."""

    index: ModeIndex
    waist: float
    omega: float
    mass: float

    def __post_init__(self) -> None:
        if self.waist <= 0 or self.omega <= 0 or self.mass <= 0:
            raise ValueError("waist, omega and mass must all be positive")


def fundamental_frequency(geom: PlanoConvexGeometry, mat: MaterialProperties) -> float:
    """Angular frequency Omega_M = pi c_l / h0 of the fundamental thickness mode."""
    return math.pi * mat.c_l / geom.h0


def frequency_splitting(geom: PlanoConvexGeometry) -> float:
    """Transverse splitting parameter (2/pi) sqrt(h0 / r_curv).

    Consecutive p values of one longitudinal family are spaced by this
    fraction (times n) in Omega_np^2 / Omega_M^2.
    """
    return (2.0 / math.pi) * math.sqrt(geom.aspect_ratio)


def acoustic_waist(geom: PlanoConvexGeometry, n: int) -> float:
    """Acoustic waist w_n = sqrt((2 h0 / n pi) sqrt(r_curv h0)); w_n = w_1 / sqrt(n)."""
    if n < 1:
        raise ValueError(f"longitudinal index must be >= 1, got {n}")
    return math.sqrt((2.0 * geom.h0 / (n * math.pi)) * math.sqrt(geom.r_curv * geom.h0))


def mode_frequency(
    geom: PlanoConvexGeometry, mat: MaterialProperties, index: ModeIndex
) -> float:
    """Eigenfrequency Omega_np = Omega_M sqrt(n^2 + delta n (2p + 1)).

    delta = (2/pi) sqrt(h0/r_curv) is the transverse splitting; the spectrum
    is strictly increasing in both indices.
    """
    omega_m = fundamental_frequency(geom, mat)
    delta = frequency_splitting(geom)
    n, p = index.n, index.p
    return omega_m * math.sqrt(n * n + delta * n * (2 * p + 1))


def mode_mass(geom: PlanoConvexGeometry, mat: MaterialProperties, n: int) -> float:
    """Mode mass M_n = (pi/4) rho h0 w_n^2 = M_1 / n, independent of p."""
    w_n = acoustic_waist(geom, n)
    return 0.25 * math.pi * mat.rho * geom.h0 * w_n * w_n


def acoustic_mode(
    geom: PlanoConvexGeometry, mat: MaterialProperties, index: ModeIndex
) -> AcousticMode:
    """Assemble the AcousticMode record for one index."""
    return AcousticMode(
        index=index,
        waist=acoustic_waist(geom, index.n),
        omega=mode_frequency(geom, mat, index),
        mass=mode_mass(geom, mat, index.n),
    )


def laguerre(p: int, x: float) -> float:
    """Laguerre polynomial L_p(x) by the forward three-term recurrence.

    (k+1) L_{k+1} = (2k + 1 - x) L_k - k L_{k-1}, stable for the large p
    needed by the transverse mode profiles (series summation is not).
    """
    if p < 0:
        raise ValueError(f"order must be >= 0, got {p}")
    if p == 0:
        return 1.0
    prev, cur = 1.0, 1.0 - x
    for k in range(1, p):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur


def laguerre_weighted(p: int, x: float) -> float:
    """exp(-x/2) L_p(x), computed without forming either factor.

    The bare polynomial reaches exp(x/2) at large x and overflows near the
    rim of wide apertures; seeding the same recurrence with exp(-x/2) keeps
    every intermediate bounded by 1 in magnitude for x >= 0.
    """
    if p < 0:
        raise ValueError(f"order must be >= 0, got {p}")
    env = math.exp(-0.5 * x)
    if p == 0:
        return env
    prev, cur = env, (1.0 - x) * env
    for k in range(1, p):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur


def displacement(
    mode: AcousticMode, geom: PlanoConvexGeometry, r: float, z: float
) -> float:
    """Longitudinal displacement u_np(r, z), unit peak normalization.

    Valid on the body of the resonator: r inside the aperture (h(r) > 0) and
    0 <= z <= h(r). Points outside raise ValueError.
    """
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    h_r = geom.thickness(r)
    if h_r <= 0:
        raise ValueError(
            f"r={r} is outside the aperture (radius {geom.aperture_radius:.6g})"
        )
    if not 0 <= z <= h_r:
        raise ValueError(f"z={z} is outside the body, local thickness {h_r:.6g}")
    x = 2.0 * r * r / (mode.waist * mode.waist)
    transverse = laguerre_weighted(mode.index.p, x)
    return transverse * math.cos(mode.index.n * math.pi * z / h_r)
