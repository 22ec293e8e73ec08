"""Overlap coefficients between two Weibull distributions.

Thin Python layer over the C++ core: exact coefficients by quadrature,
maximum-likelihood fits, the moment-form and kernel estimators of the
Weitzman coefficient, and the seeded Monte Carlo harness.
"""

from ._core import (
    AccuracyError,
    DegenerateSampleError,
    DeltaEstimate,
    DivergentIntegralError,
    DomainError,
    FitResult,
    NonConvergenceError,
    ParseError,
    ScenarioAbortError,
    WeibullParams,
    WovlError,
    __version__,
    cdf,
    coefficient_exact,
    compute_metrics,
    crossings,
    delta_exact,
    delta_kernel,
    delta_parametric,
    estimate_parametric,
    fit_mle,
    fit_mle_equal_shape,
    kde_pdf,
    log_pdf,
    mean,
    ovl_values,
    pdf,
    quantile,
    render_markdown,
    run_scenario,
    sample,
    silverman_bandwidth,
    simulate,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
