"""Holomorphic functions on the Riemann surface of the logarithm.

Generalized power series, the Stirling remainder phi, Gamma and zeta, the
level curves of the Stirling phase, and domain colouring.
"""
from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    LogSurfError,
    ParameterError,
    PoleError,
    PreconditionError,
    QuadratureError,
    WindowExitError,
)
from .gamma import (
    GammaContext,
    RegionSpec,
    a_lower_bound,
    classify_Un,
    classify_Vn,
    dmod_dx,
    dmod_dy,
    find_x0,
    g_tilde,
    gamma,
    loggamma,
    phase_A,
    phase_Ag,
)
from .genseries import (
    MixedSeries,
    ZetaSeries,
    crossing_probe,
    eval_series,
    series_norm,
    split_real_imag,
    unit_norm_radius,
    zeta_eval,
)
from .stirling import StirlingEngine, bernoulli, phi, phi2, phi_asymptotic, phi_binet, stirling_series
from .surface import (
    LogPoint,
    LogVector,
    SectorClass,
    SectorSpec,
    chart_E,
    chart_L,
    derive_inner_specs,
    in_sector,
    lift_pi0,
    log_power,
    project_pi,
    rotate_scale,
)

__version__ = "0.1.0"
