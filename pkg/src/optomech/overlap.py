"""Gaussian cavity mode, radiation pressure profile, optical-acoustic overlaps.

The cavity beam is the fundamental Gaussian

    v0(r) = sqrt(2/pi) / w0 * exp(-r^2 / w0^2),

normalized so the intensity profile v0^2 integrates to one over the mirror
plane; the radiation pressure density for intracavity photon flux I is
2 hbar k I v0^2(r) with total force 2 hbar k I.

Overlaps <v0^2, u_np> are taken in the coated plane z = 0, where the cosine
factor is 1 and the thickness profile drops out. With q the bracket ratio,

    <v0^2, u_np> = [2 w_n^2 / (2 w_n^2 + w0^2)] * q^p,
    q            = (2 w_n^2 - w0^2) / (2 w_n^2 + w0^2),

so each longitudinal family is a geometric sequence in p. overlap_quadrature
recomputes the defining radial integral numerically and is the independent
check on that closed form; see its docstring for how the integral is made
tractable at large p, where the oscillating Laguerre factor cancels the
integrand down to |q|^p (1e-246 at the far corner of the validation grid).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf

from .resonator import ModeIndex, PlanoConvexGeometry, acoustic_waist
from .constants import HBAR

__all__ = [
    "OpticalMode",
    "QuadratureNotConverged",
    "intensity_profile",
    "radiation_pressure_profile",
    "total_radiation_force",
    "overlap_factors",
    "overlap_analytic",
    "overlap_quadrature",
    "overlap_quadrature_sweep",
]


@dataclass(frozen=True)
class OpticalMode:
    """Fundamental Gaussian beam: wavelength and waist, both in meters."""

    wavelength: float
    waist: float

    def __post_init__(self) -> None:
        if self.wavelength <= 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")
        if self.waist <= 0:
            raise ValueError(f"waist must be positive, got {self.waist}")

    @property
    def wavevector(self) -> float:
        """k = 2 pi / wavelength."""
        return 2.0 * math.pi / self.wavelength


class QuadratureNotConverged(RuntimeError):
    """Raised when the overlap quadrature exhausts its precision budget."""


def intensity_profile(opt: OpticalMode, r: float) -> float:
    """v0^2(r) = (2 / pi w0^2) exp(-2 r^2 / w0^2), in 1/m^2."""
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    w0sq = opt.waist * opt.waist
    return (2.0 / (math.pi * w0sq)) * math.exp(-2.0 * r * r / w0sq)


def radiation_pressure_profile(opt: OpticalMode, intensity: float, r: float) -> float:
    """Force surface density 2 hbar k I v0^2(r), in N/m^2, for photon flux I in 1/s."""
    if intensity < 0:
        raise ValueError(f"photon flux must be >= 0, got {intensity}")
    return 2.0 * HBAR * opt.wavevector * intensity * intensity_profile(opt, r)


def total_radiation_force(opt: OpticalMode, intensity: float) -> float:
    """Integrated radiation force 2 hbar k I, in N."""
    if intensity < 0:
        raise ValueError(f"photon flux must be >= 0, got {intensity}")
    return 2.0 * HBAR * opt.wavevector * intensity


def overlap_factors(opt: OpticalMode, w_n: float) -> tuple[float, float]:
    """Prefactor and p-ratio (pref, q) of the geometric overlap sequence.

    <v0^2, u_np> = pref * q^p for every p of the longitudinal family with
    acoustic waist w_n.
    """
    wn2 = w_n * w_n
    w02 = opt.waist * opt.waist
    denom = 2.0 * wn2 + w02
    return 2.0 * wn2 / denom, (2.0 * wn2 - w02) / denom


def overlap_analytic(
    opt: OpticalMode, geom: PlanoConvexGeometry, index: ModeIndex
) -> float:
    """Closed-form overlap <v0^2, u_np>; |value| <= 1, depends only on w0/w_n and p."""
    pref, q = overlap_factors(opt, acoustic_waist(geom, index.n))
    return pref * q**index.p


# ---------------------------------------------------------------------------
# Quadrature oracle.
#
# In the squared radius u = r^2 the overlap integral becomes
#
#   I_p = (2/w0^2) int_0^inf exp(-s u) L_p(2 u / w_n^2) du,   s = 2/w0^2 + 1/w_n^2,
#
# i.e. a polynomial of degree p against a decaying exponential weight. After
# y = s u this is pref * int_0^inf e^-y L_p(a y) dy with a = 2/(s w_n^2),
# which an m-point Gauss-Laguerre rule integrates exactly for p <= 2m - 1.
# The only error left is arithmetic: the terms sum to q^p through massive
# cancellation (the integrand oscillates), so everything runs in mpmath at a
# working precision chosen by a ladder. Two self-checks drive the ladder:
#
#   * cancellation: a value is resolved only if |sum| exceeds the roundoff
#     floor sum(|terms|) * 10^(15 - dps);
#   * rule agreement: m and m + 8 nodes must agree to 1e-2 * rel_tol.
#
# Values whose magnitude stays below abs_floor are exempt (true zeros at
# w0 = sqrt(2) w_n would otherwise escalate forever). Exhausting the dps
# ladder raises QuadratureNotConverged.
# ---------------------------------------------------------------------------

_MAX_DPS = 3200

_node_cache: dict[tuple[int, int], tuple[list, list]] = {}
# mpmath keeps precision in process-global state, so every workdps region in
# this module runs behind one re-entrant lock; without it a concurrent sweep
# perturbs another thread's rounding by an ulp.
_mp_lock = threading.RLock()


def _laguerre_pair_mp(p: int, x):
    """(L_p(x), L_{p-1}(x)) by forward recurrence in the active mp precision."""
    if p == 0:
        return mpf(1), mpf(0)
    prev, cur = mpf(1), 1 - x
    for k in range(1, p):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur, prev


def _gauss_laguerre_nodes(m: int, dps: int) -> tuple[list, list]:
    """Gauss-Laguerre nodes and weights at dps digits.

    float64 nodes from numpy seed a Newton iteration on L_m; weights use
    w_i = x_i / ((m+1) L_{m+1}(x_i))^2. Cached per (m, dps).
    """
    key = (m, dps)
    cached = _node_cache.get(key)
    if cached is not None:
        return cached
    with _mp_lock:
        cached = _node_cache.get(key)
        if cached is not None:
            return cached
        seeds, _ = np.polynomial.laguerre.laggauss(m)
        with mp.workdps(dps + 10):
            tol = mpf(10) ** (-(dps + 5))
            nodes, weights = [], []
            for seed in seeds:
                x = mpf(seed)
                for _ in range(100):
                    val, below = _laguerre_pair_mp(m, x)
                    # x L_m' = m (L_m - L_{m-1})
                    step = val * x / (m * (val - below))
                    x = x - step
                    if abs(step) < abs(x) * tol:
                        break
                top, _ = _laguerre_pair_mp(m + 1, x)
                nodes.append(x)
                weights.append(x / ((m + 1) * top) ** 2)
        _node_cache[key] = (nodes, weights)
        return nodes, weights


def _quadrature_sweep(a, p_max: int, m: int, dps: int):
    """sum_i w_i L_p(a y_i) and sum_i |w_i L_p(a y_i)| for p = 0..p_max."""
    with _mp_lock, mp.workdps(dps):
        nodes, weights = _gauss_laguerre_nodes(m, dps)
        xs = [a * y for y in nodes]
        values = [mp.fsum(weights)]
        magnitudes = [mp.fsum(abs(w) for w in weights)]
        if p_max >= 1:
            prev = [mpf(1)] * len(xs)
            cur = [1 - x for x in xs]
            values.append(mp.fsum(w * l for w, l in zip(weights, cur)))
            magnitudes.append(mp.fsum(abs(w * l) for w, l in zip(weights, cur)))
            for p in range(1, p_max):
                for i, x in enumerate(xs):
                    prev[i], cur[i] = (
                        cur[i],
                        ((2 * p + 1 - x) * cur[i] - p * prev[i]) / (p + 1),
                    )
                values.append(mp.fsum(w * l for w, l in zip(weights, cur)))
                magnitudes.append(mp.fsum(abs(w * l) for w, l in zip(weights, cur)))
        return values, magnitudes


def overlap_quadrature_sweep(
    opt: OpticalMode,
    geom: PlanoConvexGeometry,
    n: int,
    p_max: int,
    rel_tol: float = 1e-10,
    abs_floor: float = 1e-12,
) -> np.ndarray:
    """Quadrature overlaps of one longitudinal family, p = 0..p_max.

    All orders share one node set through the Laguerre recurrence, so a full
    sweep costs barely more than a single order. Values certified to rel_tol
    relative accuracy down to magnitude abs_floor; below the floor only
    |value| <= abs_floor is guaranteed.

    Raises QuadratureNotConverged if the precision ladder is exhausted.
    """
    if n < 1:
        raise ValueError(f"longitudinal index must be >= 1, got {n}")
    if p_max < 0:
        raise ValueError(f"p_max must be >= 0, got {p_max}")
    if not 0 < rel_tol < 1:
        raise ValueError(f"rel_tol must be in (0, 1), got {rel_tol}")
    if abs_floor <= 0:
        raise ValueError(f"abs_floor must be positive, got {abs_floor}")

    w_n = acoustic_waist(geom, n)
    pref, _ = overlap_factors(opt, w_n)
    wn2 = w_n * w_n
    w02 = opt.waist * opt.waist
    a = 2.0 * w02 / (2.0 * wn2 + w02)  # L_p argument scale; equals 1 - q

    m = max(64, p_max // 2 + 8)  # exactness needs 2m - 1 >= p_max
    dps = 50
    while dps <= _MAX_DPS:
        coarse, _ = _quadrature_sweep(mpf(a), p_max, m, dps)
        fine, mags = _quadrature_sweep(mpf(a), p_max, m + 8, dps)
        with _mp_lock, mp.workdps(dps):
            floor_scale = mpf(10) ** (15 - dps)
            for p in range(p_max + 1):
                floor = mags[p] * floor_scale
                if abs(fine[p]) < floor and float(pref * floor) > 1e-3 * abs_floor:
                    break  # cancellation not yet resolved
                gap = abs(coarse[p] - fine[p])
                span = max(abs(coarse[p]), abs(fine[p]))
                if gap > span * rel_tol * 1e-2 and float(pref * span) > abs_floor:
                    break  # rules disagree beyond target
            else:
                return np.array([float(pref * v) for v in fine])
        dps *= 2
    raise QuadratureNotConverged(
        f"overlap quadrature for n={n}, p<={p_max} did not resolve within "
        f"{_MAX_DPS} digits (rel_tol={rel_tol}, abs_floor={abs_floor})"
    )


def overlap_quadrature(
    opt: OpticalMode,
    geom: PlanoConvexGeometry,
    index: ModeIndex,
    rel_tol: float = 1e-10,
    abs_floor: float = 1e-12,
) -> float:
    """Numerically integrated overlap <v0^2, u_np>, the check on overlap_analytic."""
    sweep = overlap_quadrature_sweep(
        opt, geom, index.n, index.p, rel_tol=rel_tol, abs_floor=abs_floor
    )
    return float(sweep[index.p])
