"""Effective mechanical response seen by the cavity beam.

The beam reads the overlap-weighted displacement of every acoustic mode, so
the force-to-displacement transfer it sees is

    chi_np[W]  = 1 / ( M_np ( W_np^2 - W^2 - i W_np^2 Phi[W] ) ),
    chi_eff[W] = sum_np <v0^2, u_np>^2 chi_np[W],

with Phi the material loss angle. Phi must be odd in W so that
chi(-W) = conj chi(W) and the time response stays real.

The catalog sum converges slowly (the p tail of each longitudinal family is
geometric but shallow once w0 << w_n), so effective_susceptibility runs a
budgeted truncation with rigorous tail bounds instead of a fixed cutoff:

  * within family n the leftover weight is sum_{p>=P} ov^2 = pref^2 q^2P/(1-q^2)
    and every leftover mode has |chi| <= 1/(M_n max(W_nP^2 - W^2, W_nP^2 |Phi|)),
    so the inner tail is bounded in closed form;
  * families beyond n carry total weight sum_p ov^2 / M_n = w1^2/(2 w0^2 M_1)
    independent of n, and |chi| <= 1/(W_M^2 m^2 g) with
    g = max(1 - W^2/(W_M^2 m^2), |Phi|), so the outer tail is bounded by
    (w1^2 / 2 w0^2 M_1 W_M^2 g) / n after family n.

Each family gets the inner budget rel_tol * scale * (3/pi^2)/n^2 (these sum
to rel_tol*scale/2 over all n) and the outer loop stops once its bound drops
under the other half. The certified total error is inner + outer <=
rel_tol * scale. scale is max(|partial sum|, |chi_eff[0]|) when the
zero-frequency response is known: near antiresonances |chi_eff| dips by
orders of magnitude and a tolerance relative to the dip itself would demand
astronomically many modes, so the guarantee is anchored to the DC response
that sets every figure of merit downstream.

Hitting the n_max/p_max caps first raises TruncationNotConverged; the capped
partial sum and its error bound ride along on the exception, which also makes
small explicit rectangles (tiny caps) usable as cross-checks against the
exact list path.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .constants import K_BOLTZMANN
from .overlap import OpticalMode, overlap_factors
from .resonator import (
    AcousticMode,
    MaterialProperties,
    ModeIndex,
    PlanoConvexGeometry,
    acoustic_mode,
    acoustic_waist,
    frequency_splitting,
    fundamental_frequency,
    mode_mass,
)

__all__ = [
    "LossModel",
    "ConstantLossAngle",
    "ViscousLossAngle",
    "TruncationPolicy",
    "SumInfo",
    "TruncationNotConverged",
    "PlanoConvexCatalog",
    "modal_susceptibility",
    "effective_susceptibility",
    "EffectiveResponse",
    "SingleOscillator",
    "KerrResponse",
    "MassReport",
    "effective_mass",
    "optical_mass",
    "thermal_force_spectrum",
    "thermal_force_spectrum_from_chi",
]


class LossModel(ABC):
    """Structural loss angle Phi[W]; implementations must be odd in W."""

    @abstractmethod
    def loss_angle(self, omega):
        """Phi at angular frequency omega (scalar or ndarray)."""


class ConstantLossAngle(LossModel):
    """Frequency-independent damping Phi = sign(W)/Q."""

    def __init__(self, q_factor: float):
        if q_factor <= 0:
            raise ValueError(f"q_factor must be positive, got {q_factor}")
        self.q_factor = q_factor

    def loss_angle(self, omega):
        return np.sign(omega) / self.q_factor

    def __repr__(self) -> str:
        return f"ConstantLossAngle(q_factor={self.q_factor!r})"


class ViscousLossAngle(LossModel):
    """Velocity-proportional damping Phi = W / (Q W_ref); Phi(W_ref) = 1/Q."""

    def __init__(self, q_factor: float, omega_ref: float):
        if q_factor <= 0:
            raise ValueError(f"q_factor must be positive, got {q_factor}")
        if omega_ref <= 0:
            raise ValueError(f"omega_ref must be positive, got {omega_ref}")
        self.q_factor = q_factor
        self.omega_ref = omega_ref

    def loss_angle(self, omega):
        return omega / (self.q_factor * self.omega_ref)

    def __repr__(self) -> str:
        return (
            f"ViscousLossAngle(q_factor={self.q_factor!r}, "
            f"omega_ref={self.omega_ref!r})"
        )


@dataclass(frozen=True)
class TruncationPolicy:
    """Certified relative tolerance plus hard caps on the mode rectangle.

    Caps are inclusive: families n <= n_max and orders p <= p_max may be
    summed. rel_tol is relative to max(|partial|, |chi_eff[0]|); see the
    module docstring.
    """

    rel_tol: float = 1e-3
    n_max: int = 1_000_000
    p_max: int = 1_000_000

    def __post_init__(self) -> None:
        if not 0 < self.rel_tol < 1:
            raise ValueError(f"rel_tol must be in (0, 1), got {self.rel_tol}")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if self.p_max < 0:
            raise ValueError(f"p_max must be >= 0, got {self.p_max}")


@dataclass(frozen=True)
class SumInfo:
    """Bookkeeping of one truncated catalog sum."""

    modes_summed: int
    families: int
    deepest_p: int
    grid_equivalent_modes: int
    error_bound: float
    converged: bool


class TruncationNotConverged(RuntimeError):
    """Caps were hit before the error bound met the policy tolerance.

    Attributes:
        value: partial sum over the capped rectangle (complex, or ndarray
            for grid evaluations).
        info:  SumInfo with converged=False and the residual error bound.
    """

    def __init__(self, message: str, value, info: SumInfo):
        super().__init__(message)
        self.value = value
        self.info = info


@dataclass(frozen=True)
class PlanoConvexCatalog:
    """Complete Gaussian mode family of one plano-convex resonator."""

    geometry: PlanoConvexGeometry
    material: MaterialProperties

    @property
    def omega_m(self) -> float:
        """Fundamental thickness frequency pi c_l / h0, in rad/s."""
        return fundamental_frequency(self.geometry, self.material)

    @property
    def delta(self) -> float:
        """Transverse splitting parameter (2/pi) sqrt(h0/R)."""
        return frequency_splitting(self.geometry)

    @property
    def w1(self) -> float:
        """Acoustic waist of the n = 1 family, in m."""
        return acoustic_waist(self.geometry, 1)

    @property
    def m1(self) -> float:
        """Modal mass of the n = 1 family, in kg."""
        return mode_mass(self.geometry, self.material, 1)

    def mode(self, n: int, p: int) -> AcousticMode:
        return acoustic_mode(self.geometry, self.material, ModeIndex(n, p))


def modal_susceptibility(mode: AcousticMode, loss: LossModel | None, omega: float):
    """Single-mode response chi = 1/(M (W_n^2 - W^2 - i W_n^2 Phi)), in m/N."""
    phi = loss.loss_angle(omega) if loss is not None else 0.0
    om2 = mode.omega * mode.omega
    return 1.0 / (mode.mass * (om2 - omega * omega - 1j * om2 * phi))


# Inner p loop grows its block geometrically; 8192 keeps the worst
# single-block overshoot past the stopping depth small.
_BLOCK_MIN = 64
_BLOCK_MAX = 8192


@dataclass
class _GridCatalog:
    """Flattened mode rectangle from a sizing run, reusable across frequencies."""

    omega_star: float
    a: np.ndarray  # overlap^2 / M_n per mode
    om2: np.ndarray  # W_np^2 per mode
    fam_weight: np.ndarray  # leftover sum_p ov^2 / M_n per family
    fam_om2_next: np.ndarray  # first unsummed W_np^2 per family
    om_m2: float
    outer_coeff: float
    n_stop: int
    info: SumInfo


def _certified_sum(
    catalog: PlanoConvexCatalog,
    opt: OpticalMode,
    loss: LossModel | None,
    policy: TruncationPolicy,
    omega: float,
    chi0_ref: float = 0.0,
    scale_override: float | None = None,
    collect: bool = False,
):
    """Budgeted catalog sum. Returns (total, info, grid catalog or None).

    Never raises on caps; info.converged reports the outcome so callers can
    decide between raising and salvaging the partial sum.
    """
    om_m = catalog.omega_m
    om_m2 = om_m * om_m
    delta = catalog.delta
    m1 = catalog.m1
    w1sq = catalog.w1 ** 2
    w0sq = opt.waist ** 2
    phi = float(loss.loss_angle(omega)) if loss is not None else 0.0
    abs_phi = abs(phi)
    wsq = omega * omega
    rel = policy.rel_tol
    inner_coeff = rel * (3.0 / math.pi ** 2)  # per-family budgets sum to rel/2
    outer_coeff = w1sq / (2.0 * w0sq * m1 * om_m2)

    if collect:
        a_parts: list[np.ndarray] = []
        om2_parts: list[np.ndarray] = []
        fam_weight: list[float] = []
        fam_next: list[float] = []

    total = 0.0 + 0.0j
    inner_spent = 0.0
    modes_summed = 0
    deepest = -1
    capped = False
    outer_bound = math.inf

    n = 0
    while True:
        n += 1
        if n > policy.n_max:
            n -= 1
            capped = True
            break
        wn2 = w1sq / n
        m_n = m1 / n
        dsum = 2.0 * wn2 + w0sq
        pref = 2.0 * wn2 / dsum
        q = (2.0 * wn2 - w0sq) / dsum
        q2 = q * q
        weight_total = pref * pref / (1.0 - q2)
        base = float(n * n)
        slope = delta * n  # W_np^2 = W_M^2 (base + slope (2p+1))
        budget = inner_coeff / (n * n)

        family = 0.0 + 0.0j
        p_next = 0
        block = _BLOCK_MIN
        while True:
            remw = weight_total * q2 ** p_next
            om2_next = om_m2 * (base + slope * (2 * p_next + 1))
            gap = om2_next - wsq
            dmax = max(gap, abs_phi * om2_next) if gap > 0.0 else abs_phi * om2_next
            bound = remw / (m_n * dmax) if dmax > 0.0 else math.inf
            if scale_override is not None:
                scale = scale_override
            else:
                scale = max(abs(total + family), chi0_ref)
            if bound <= budget * scale:
                break
            if p_next > policy.p_max:
                capped = True
                break
            p_end = min(p_next + block, policy.p_max + 1)
            ps = np.arange(p_next, p_end)
            ov2 = (pref * pref) * q2 ** ps
            om2 = om_m2 * (base + slope * (2 * ps + 1))
            a = ov2 / m_n
            family += complex(np.sum(a / (om2 - wsq - 1j * (om2 * phi))))
            if collect:
                a_parts.append(a)
                om2_parts.append(om2)
            modes_summed += p_end - p_next
            deepest = max(deepest, p_end - 1)
            p_next = p_end
            block = min(2 * block, _BLOCK_MAX)

        total += family
        inner_spent += bound
        if collect:
            fam_weight.append(remw / m_n)
            fam_next.append(om2_next)

        gap_out = 1.0 - wsq / (om_m2 * (n + 1) ** 2)
        g = max(gap_out, abs_phi) if gap_out > 0.0 else abs_phi
        outer_bound = outer_coeff / (g * n) if g > 0.0 else math.inf
        if scale_override is not None:
            scale = scale_override
        else:
            scale = max(abs(total), chi0_ref)
        # A p-capped family does not stop the n loop: the caps define a
        # rectangle and the whole allowed rectangle is summed before raising.
        if outer_bound <= 0.5 * rel * scale:
            break

    families = n
    info = SumInfo(
        modes_summed=modes_summed,
        families=families,
        deepest_p=deepest,
        grid_equivalent_modes=families * (deepest + 1),
        error_bound=inner_spent + outer_bound,
        converged=not capped,
    )
    grid = None
    if collect:
        grid = _GridCatalog(
            omega_star=abs(omega),
            a=np.concatenate(a_parts) if a_parts else np.zeros(0),
            om2=np.concatenate(om2_parts) if om2_parts else np.zeros(0),
            fam_weight=np.asarray(fam_weight),
            fam_om2_next=np.asarray(fam_next),
            om_m2=om_m2,
            outer_coeff=outer_coeff,
            n_stop=families,
            info=info,
        )
    return total, info, grid


def _explicit_sum(
    modes: Sequence[AcousticMode],
    opt: OpticalMode,
    loss: LossModel | None,
    omega: float,
):
    """Exact overlap-weighted sum over an explicit mode list."""
    reals: list[float] = []
    imags: list[float] = []
    fams: set[int] = set()
    deepest = -1
    for mode in modes:
        pref, q = overlap_factors(opt, mode.waist)
        ov = pref * q ** mode.index.p
        term = (ov * ov) * modal_susceptibility(mode, loss, omega)
        reals.append(term.real)
        imags.append(term.imag)
        fams.add(mode.index.n)
        deepest = max(deepest, mode.index.p)
    total = complex(math.fsum(reals), math.fsum(imags))
    info = SumInfo(
        modes_summed=len(modes),
        families=len(fams),
        deepest_p=deepest,
        grid_equivalent_modes=len(modes),
        error_bound=0.0,
        converged=True,
    )
    return total, info


def effective_susceptibility(
    catalog: PlanoConvexCatalog | Sequence[AcousticMode],
    opt: OpticalMode,
    loss: LossModel | None = None,
    policy: TruncationPolicy | None = None,
    omega: float = 0.0,
):
    """chi_eff[omega] with convergence bookkeeping; returns (value, SumInfo).

    catalog may be a PlanoConvexCatalog (full family, budgeted truncation) or
    an explicit sequence of AcousticMode (exact finite sum, no truncation).
    Raises TruncationNotConverged, carrying the partial sum, when the policy
    caps cut the budgeted sum short.
    """
    if not isinstance(catalog, PlanoConvexCatalog):
        return _explicit_sum(catalog, opt, loss, omega)
    if policy is None:
        policy = TruncationPolicy()
    chi0_ref = 0.0
    if omega != 0.0:
        # Anchor the tolerance to the DC response even for one-off calls.
        dc, _, _ = _certified_sum(catalog, opt, loss, policy, 0.0)
        chi0_ref = abs(dc)
    total, info, _ = _certified_sum(
        catalog, opt, loss, policy, omega, chi0_ref=chi0_ref
    )
    if not info.converged:
        raise TruncationNotConverged(
            f"catalog sum at omega={omega:g} rad/s hit caps "
            f"(n_max={policy.n_max}, p_max={policy.p_max}) with error bound "
            f"{info.error_bound:.3e}",
            total,
            info,
        )
    return total, info


class EffectiveResponse:
    """chi_eff of a full catalog with cached DC anchor and grid evaluation.

    The zero-frequency sum runs once at construction; chi() and chi_grid()
    certify against max(|chi|, |chi_eff[0]|) as described in the module
    docstring. If the DC sum itself is capped the partial value still anchors
    later calls, and every capped evaluation raises with its own payload.
    """

    def __init__(
        self,
        catalog: PlanoConvexCatalog,
        opt: OpticalMode,
        loss: LossModel | None = None,
        policy: TruncationPolicy | None = None,
    ):
        self.catalog = catalog
        self.opt = opt
        self.loss = loss
        self.policy = policy if policy is not None else TruncationPolicy()
        dc, info, _ = _certified_sum(catalog, opt, loss, self.policy, 0.0)
        self._chi0 = dc.real  # loss angle is odd, so Phi(0) = 0 and chi0 is real
        self._dc_info = info
        self._grid: _GridCatalog | None = None

    @property
    def chi0(self) -> float:
        """chi_eff[0] in m/N (partial sum if the DC run was capped)."""
        return self._chi0

    @property
    def dc_info(self) -> SumInfo:
        return self._dc_info

    def grid_info(self) -> SumInfo | None:
        """Sizing-run bookkeeping of the cached grid catalog, if prepared."""
        return self._grid.info if self._grid is not None else None

    def chi(self, omega: float) -> complex:
        """chi_eff[omega], certified to the policy tolerance."""
        total, info, _ = _certified_sum(
            self.catalog,
            self.opt,
            self.loss,
            self.policy,
            omega,
            chi0_ref=abs(self._chi0),
        )
        if not info.converged:
            raise TruncationNotConverged(
                f"catalog sum at omega={omega:g} rad/s hit caps with error "
                f"bound {info.error_bound:.3e}",
                total,
                info,
            )
        return total

    def chi_tilde(self, omega: float) -> complex:
        """Dimensionless chi_eff[omega] / chi_eff[0]."""
        return self.chi(omega) / self._chi0

    def effective_mass(self) -> float:
        """M_eff = 1 / (W_M^2 chi_eff[0]), in kg."""
        return 1.0 / (self.catalog.omega_m ** 2 * self._chi0)

    def prepare(self, omegas) -> None:
        """Size the reusable mode rectangle for every |omega| on the grid.

        The tail bounds weaken monotonically as |omega| grows toward the
        first unsummed resonance, so one sizing run at max|omega| covers the
        whole grid; chi_grid still re-verifies the bound per frequency and
        falls back to a scalar certified sum where needed.
        """
        omegas = np.asarray(omegas, dtype=float)
        omega_star = float(np.max(np.abs(omegas))) if omegas.size else 0.0
        if self._grid is not None and self._grid.omega_star >= omega_star:
            return
        _, _, grid = _certified_sum(
            self.catalog,
            self.opt,
            self.loss,
            self.policy,
            omega_star,
            scale_override=max(abs(self._chi0), np.finfo(float).tiny),
            collect=True,
        )
        self._grid = grid

    def _grid_point(self, omega: float):
        """(value, certified) for one frequency against the cached rectangle."""
        cat = self._grid
        phi = float(self.loss.loss_angle(omega)) if self.loss is not None else 0.0
        wsq = omega * omega
        value = complex(np.sum(cat.a / (cat.om2 - wsq - 1j * (cat.om2 * phi))))
        lossterm = abs(phi) * cat.fam_om2_next
        gap = cat.fam_om2_next - wsq
        d = np.where(gap > 0.0, np.maximum(gap, lossterm), lossterm)
        if np.any(d <= 0.0):
            return value, False
        resid = float(np.sum(cat.fam_weight / d))
        gap_out = 1.0 - wsq / (cat.om_m2 * (cat.n_stop + 1) ** 2)
        g = max(gap_out, abs(phi)) if gap_out > 0.0 else abs(phi)
        if g <= 0.0:
            return value, False
        resid += cat.outer_coeff / (g * cat.n_stop)
        scale = max(abs(value), abs(self._chi0))
        return value, resid <= self.policy.rel_tol * scale

    def chi_grid(self, omegas, workers: int = 1) -> np.ndarray:
        """chi_eff over a frequency grid, reusing one sized mode rectangle.

        Results are independent of the worker count: frequencies are
        partitioned into fixed chunks and each is evaluated by the same
        arithmetic regardless of which thread runs it.

        Raises TruncationNotConverged with the full (partial) grid as .value
        if any frequency hit the caps.
        """
        omegas = np.asarray(omegas, dtype=float)
        flat = omegas.ravel()
        self.prepare(flat)
        out = np.empty(flat.shape, dtype=complex)
        failures: list[SumInfo] = []

        def run(idx: int) -> None:
            value, ok = self._grid_point(float(flat[idx]))
            if not ok:
                value, info, _ = _certified_sum(
                    self.catalog,
                    self.opt,
                    self.loss,
                    self.policy,
                    float(flat[idx]),
                    chi0_ref=abs(self._chi0),
                )
                if not info.converged:
                    failures.append(info)
            out[idx] = value

        def run_chunk(lo: int) -> None:
            for idx in range(lo, min(lo + 32, flat.size)):
                run(idx)

        starts = range(0, flat.size, 32)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(run_chunk, starts))
        else:
            for lo in starts:
                run_chunk(lo)

        result = out.reshape(omegas.shape)
        if failures:
            worst = max(failures, key=lambda i: i.error_bound)
            raise TruncationNotConverged(
                f"{len(failures)} of {flat.size} grid frequencies hit caps "
                f"(worst error bound {worst.error_bound:.3e})",
                result,
                worst,
            )
        return result


class SingleOscillator:
    """One damped mode with unit coupling: the few-parameter reference response."""

    def __init__(self, mass: float, omega_m: float, loss: LossModel | None = None):
        if mass <= 0:
            raise ValueError(f"mass must be positive, got {mass}")
        if omega_m <= 0:
            raise ValueError(f"omega_m must be positive, got {omega_m}")
        self.mass = mass
        self.omega_m = omega_m
        self.loss = loss

    @property
    def chi0(self) -> float:
        return 1.0 / (self.mass * self.omega_m ** 2)

    def chi(self, omega: float) -> complex:
        phi = self.loss.loss_angle(omega) if self.loss is not None else 0.0
        om2 = self.omega_m ** 2
        return 1.0 / (self.mass * (om2 - omega * omega - 1j * om2 * phi))

    def chi_tilde(self, omega: float) -> complex:
        return self.chi(omega) / self.chi0

    def prepare(self, omegas) -> None:
        pass

    def chi_grid(self, omegas, workers: int = 1) -> np.ndarray:
        omegas = np.asarray(omegas, dtype=float)
        phi = self.loss.loss_angle(omegas) if self.loss is not None else 0.0
        om2 = self.omega_m ** 2
        return 1.0 / (self.mass * (om2 - omegas * omegas - 1j * om2 * phi))


class KerrResponse:
    """Instantaneous response chi = chi0 at every frequency.

    The mirror follows the force with no dynamics and no dissipation, so the
    cavity reduces to a pure Kerr medium; thermal_force_spectrum vanishes
    identically because Im chi = 0.
    """

    def __init__(self, chi0: float = 1.0):
        if chi0 <= 0:
            raise ValueError(f"chi0 must be positive, got {chi0}")
        self.chi0 = chi0

    def chi(self, omega: float) -> complex:
        return complex(self.chi0)

    def chi_tilde(self, omega: float) -> complex:
        return 1.0 + 0.0j

    def prepare(self, omegas) -> None:
        pass

    def chi_grid(self, omegas, workers: int = 1) -> np.ndarray:
        omegas = np.asarray(omegas, dtype=float)
        return np.full(omegas.shape, self.chi0, dtype=complex)


@dataclass(frozen=True)
class MassReport:
    """Effective, optimal and n = 1 modal masses, in kg."""

    m_eff: float
    m_opt: float
    m_1: float
    info: SumInfo


def optical_mass(
    geom: PlanoConvexGeometry, mat: MaterialProperties, opt: OpticalMode
) -> float:
    """Lower bound (12/pi^2)(pi/4) rho h0 w0^2 on the effective mass, in kg.

    Reached when every family contributes its full geometric weight at zero
    detuning; real catalogs stay above it.
    """
    return (12.0 / math.pi ** 2) * (math.pi / 4.0) * mat.rho * geom.h0 * opt.waist ** 2


def effective_mass(
    catalog: PlanoConvexCatalog,
    opt: OpticalMode,
    policy: TruncationPolicy | None = None,
) -> MassReport:
    """Mass report from the DC catalog sum: M_eff = 1/(W_M^2 chi_eff[0])."""
    if policy is None:
        policy = TruncationPolicy()
    dc, info, _ = _certified_sum(catalog, opt, None, policy, 0.0)
    if not info.converged:
        raise TruncationNotConverged(
            f"DC catalog sum hit caps with error bound {info.error_bound:.3e}",
            dc,
            info,
        )
    return MassReport(
        m_eff=1.0 / (catalog.omega_m ** 2 * dc.real),
        m_opt=optical_mass(catalog.geometry, catalog.material, opt),
        m_1=catalog.m1,
        info=info,
    )


def thermal_force_spectrum_from_chi(chi, temperature: float, omega):
    """S_T[W] = -(2 k_B T / W) Im(1/chi[W]) from precomputed chi values, in N^2 s."""
    if temperature < 0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    omega = np.asarray(omega, dtype=float)
    if temperature == 0.0:
        zero = np.zeros(omega.shape)
        return float(zero) if zero.ndim == 0 else zero
    if np.any(omega == 0.0):
        raise ValueError("thermal spectrum diverges at omega = 0 for T > 0")
    s = -(2.0 * K_BOLTZMANN * temperature / omega) * np.imag(1.0 / np.asarray(chi))
    return float(s) if s.ndim == 0 else s


def thermal_force_spectrum(resp, temperature: float, omega):
    """Langevin force spectrum of the response's dissipation at temperature T.

    The fluctuation-dissipation theorem fixes the force noise a thermal bath
    must exert through whatever loss channel shapes Im chi:
    S_T[W] = -(2 k_B T / W) Im(1/chi_eff[W]). Accepts scalar or array omega.
    """
    if temperature < 0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    arr = np.asarray(omega, dtype=float)
    if temperature == 0.0:
        zero = np.zeros(arr.shape)
        return float(zero) if zero.ndim == 0 else zero
    if arr.ndim == 0:
        return thermal_force_spectrum_from_chi(
            resp.chi(float(arr)), temperature, float(arr)
        )
    return thermal_force_spectrum_from_chi(resp.chi_grid(arr), temperature, arr)
