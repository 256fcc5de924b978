"""Exact and approximate non-Markovianity of single-mode Gaussian QBM channels."""

from .bath import KernelSample, SpectralDensity, j_eval, kernel_cos_thermal, kernel_sin
from .coeffs import (
    AsymptoticCoefficients,
    ChannelParams,
    CoefficientTable,
    ConfigurationError,
    RangeError,
    asymptotic_coeffs,
    build_table,
    gamma_increment,
)
from .gchannel import (
    ChannelMap,
    GaussianState,
    ValidationError,
    ZMatrix,
    ZSpectrum,
    channel_map,
    char_function,
    evolve_cov,
    intermediate_map,
    rotation,
    wbar,
    z_eigenvalues,
    z_matrix,
    z_matrix_firstorder,
)
from .nonmark import (
    Channel,
    PunctualNM,
    WitnessResult,
    distance_witness,
    np_asymptotic,
    np_from_spectrum,
    np_integrated,
    np_pd,
    np_qbm_exact,
    np_rwa,
)
from .specfun import SpecFunResult, chi, expint_ei, shi

__version__ = "0.1.0"
