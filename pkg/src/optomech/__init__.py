"""Optomechanics of a plano-convex acoustic resonator closing an optical cavity.

The package computes the Gaussian acoustic mode catalog of a plano-convex
resonator, the effective mechanical susceptibility and effective mass seen by
a cavity beam, the bistable mean field of the detuned cavity, and the
quadrature noise spectra (ponderomotive squeezing and thermal excess) of the
reflected field. The `optomech` command line exposes the same computations as
deterministic CSV datasets.
"""

from .cavity import (
    CavityParams,
    GivenEmptyDetuning,
    GivenMeanDetuning,
    OperatingPoint,
    Stability,
    bistability_slope,
    mean_intensity,
    nonlinear_phase,
    solve_operating_point,
)
from .config import ConfigError, FrequencyGrid, SimulationConfig, load_config, parse_config
from .constants import C_LIGHT, HBAR, K_BOLTZMANN, PLANCK
from .overlap import (
    OpticalMode,
    QuadratureNotConverged,
    intensity_profile,
    overlap_analytic,
    overlap_factors,
    overlap_quadrature,
    overlap_quadrature_sweep,
    radiation_pressure_profile,
    total_radiation_force,
)
from .resonator import (
    AcousticMode,
    MaterialProperties,
    ModeIndex,
    PlanoConvexGeometry,
    acoustic_mode,
    acoustic_waist,
    displacement,
    frequency_splitting,
    fundamental_frequency,
    laguerre,
    laguerre_weighted,
    mode_frequency,
    mode_mass,
)
from .response import (
    ConstantLossAngle,
    EffectiveResponse,
    KerrResponse,
    LossModel,
    MassReport,
    PlanoConvexCatalog,
    SingleOscillator,
    SumInfo,
    TruncationNotConverged,
    TruncationPolicy,
    ViscousLossAngle,
    effective_mass,
    effective_susceptibility,
    modal_susceptibility,
    optical_mass,
    thermal_force_spectrum,
    thermal_force_spectrum_from_chi,
)
from .spectra import (
    DegenerateDenominatorError,
    NoiseCoefficients,
    QuadratureSpectrum,
    noise_coefficients,
    optimum_spectrum,
    quadrature_spectrum,
    reference_response,
    squeeze_scan,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "AcousticMode",
    "CavityParams",
    "ConfigError",
    "ConstantLossAngle",
    "DegenerateDenominatorError",
    "EffectiveResponse",
    "FrequencyGrid",
    "GivenEmptyDetuning",
    "GivenMeanDetuning",
    "KerrResponse",
    "LossModel",
    "MassReport",
    "MaterialProperties",
    "ModeIndex",
    "NoiseCoefficients",
    "OperatingPoint",
    "OpticalMode",
    "PlanoConvexCatalog",
    "PlanoConvexGeometry",
    "QuadratureNotConverged",
    "QuadratureSpectrum",
    "SimulationConfig",
    "SingleOscillator",
    "Stability",
    "SumInfo",
    "TruncationNotConverged",
    "TruncationPolicy",
    "ViscousLossAngle",
    "C_LIGHT",
    "HBAR",
    "K_BOLTZMANN",
    "PLANCK",
    "acoustic_mode",
    "acoustic_waist",
    "bistability_slope",
    "displacement",
    "effective_mass",
    "effective_susceptibility",
    "frequency_splitting",
    "fundamental_frequency",
    "intensity_profile",
    "laguerre",
    "laguerre_weighted",
    "load_config",
    "mean_intensity",
    "modal_susceptibility",
    "mode_frequency",
    "mode_mass",
    "noise_coefficients",
    "nonlinear_phase",
    "optical_mass",
    "optimum_spectrum",
    "overlap_analytic",
    "overlap_factors",
    "overlap_quadrature",
    "overlap_quadrature_sweep",
    "parse_config",
    "quadrature_spectrum",
    "radiation_pressure_profile",
    "reference_response",
    "solve_operating_point",
    "squeeze_scan",
    "thermal_force_spectrum",
    "thermal_force_spectrum_from_chi",
    "total_radiation_force",
]
