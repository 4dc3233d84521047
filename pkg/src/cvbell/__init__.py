"""Phase-space analysis of noisy two-mode squeezed light.

Exact Gaussian Wigner dynamics of a two-mode squeezing process with
internal damping, purity and separability verdicts, displaced-parity
Bell tests, and the Werner-type and phase-diffused mixtures built on
top of the squeezed state.  The ``cvbell`` console script exposes
everything as reproducible CSV/JSON reports.
"""

from .analysis import (
    PurityReport,
    SeparabilityMap,
    SeparabilityReport,
    is_pure,
    separability_closed_pair,
    separability_eigenvalues,
    separability_map,
)
from .bell import (
    BellEvaluation,
    BellSettings,
    BellSurface,
    MaximizeResult,
    SlopeResult,
    bell_closed_form,
    bell_combination,
    bell_surface,
    maximize_bell,
    model_evaluator,
    parity_correlation,
    small_j_slope,
)
from .dynamics import (
    DriftDiffusionPair,
    SteadyStateReport,
    coefficient_arrays,
    covariance_ode_oracle,
    diffusion_matrix,
    drift_eigenvalues,
    drift_matrix,
    evolve_coefficients,
    propagate_covariance,
    propagate_green,
    steady_state,
)
from .errors import ConvergenceError, CrossCheckError
from .mixtures import (
    MixtureSpec,
    ThresholdReport,
    component_bell_curve,
    finite_dim_werner_threshold,
    mixture_bell,
    mixture_bell_curve,
    mixture_evaluator,
    mixture_wigner,
    phase_average_quadrature_oracle,
    phase_averaged_wigner,
    pure_bell_curve,
    thermal_marginal,
    werner_violation_threshold,
    werner_wigner,
)
from .numerics import (
    TOLERANCES,
    QuadratureRule,
    Tolerances,
    bessel_i0,
    bessel_i0_log,
    gauss_legendre,
    matrix_exp4,
    nelder_mead_minimize,
    one_minus_exp_over,
    periodic_trapezoid,
    rk4_lyapunov,
    sym4_eigenvalues,
)
from .phase_space import (
    CovarianceMatrix,
    GaussianForm,
    SqueezedStateParams,
    TwoModePoint,
    covariance_xvec,
    form_from_covariance_xvec,
    nm_from_v,
    precision_xvec,
    v_from_w,
    w_matrix_from_form,
    wigner_gaussian_eval,
    wigner_pure_2mss,
)
from .reports import ReportRecord, parse_csv, render, to_csv, to_json

__version__ = "0.1.0"

__all__ = [
    "BellEvaluation",
    "BellSettings",
    "BellSurface",
    "ConvergenceError",
    "CovarianceMatrix",
    "CrossCheckError",
    "DriftDiffusionPair",
    "GaussianForm",
    "MaximizeResult",
    "MixtureSpec",
    "PurityReport",
    "QuadratureRule",
    "ReportRecord",
    "SeparabilityMap",
    "SeparabilityReport",
    "SlopeResult",
    "SqueezedStateParams",
    "SteadyStateReport",
    "ThresholdReport",
    "Tolerances",
    "TwoModePoint",
    "TOLERANCES",
    "bell_closed_form",
    "bell_combination",
    "bell_surface",
    "bessel_i0",
    "bessel_i0_log",
    "coefficient_arrays",
    "component_bell_curve",
    "covariance_ode_oracle",
    "covariance_xvec",
    "diffusion_matrix",
    "drift_eigenvalues",
    "drift_matrix",
    "evolve_coefficients",
    "finite_dim_werner_threshold",
    "form_from_covariance_xvec",
    "gauss_legendre",
    "is_pure",
    "matrix_exp4",
    "maximize_bell",
    "mixture_bell",
    "mixture_bell_curve",
    "mixture_evaluator",
    "mixture_wigner",
    "model_evaluator",
    "nelder_mead_minimize",
    "nm_from_v",
    "one_minus_exp_over",
    "parity_correlation",
    "parse_csv",
    "periodic_trapezoid",
    "phase_average_quadrature_oracle",
    "phase_averaged_wigner",
    "precision_xvec",
    "propagate_covariance",
    "propagate_green",
    "pure_bell_curve",
    "render",
    "rk4_lyapunov",
    "separability_closed_pair",
    "separability_eigenvalues",
    "separability_map",
    "small_j_slope",
    "steady_state",
    "sym4_eigenvalues",
    "thermal_marginal",
    "to_csv",
    "to_json",
    "v_from_w",
    "w_matrix_from_form",
    "werner_violation_threshold",
    "werner_wigner",
    "wigner_gaussian_eval",
    "wigner_pure_2mss",
]
