"""Moment monotonicity of the Weibull, Gamma and Log-normal families.

Closed-form and quadrature moments, the shape-only moment ratio
ln[E(X^n)^m / E(X^m)^n] with its derivatives, grid sweeps that check
E(X^n)^(1/n) >= E(X^m)^(1/m), and method-of-moments fits that exploit the
scale parameter dropping out of that ratio.
"""
from .distributions import (
    DistributionParams,
    Family,
    GammaParams,
    LogNormalParams,
    OrderPair,
    WeibullParams,
    log_moment,
    moment,
    moment_oracle,
    normalization_oracle,
    pdf,
    root_moment,
    sample,
)
from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    MomentMonoError,
    NonIdentifiableError,
)
from .estimation import (
    BisectionConfig,
    EstimateResult,
    SampleMoments,
    empirical_moment,
    fit_from_data,
    fit_gamma,
    fit_lognormal,
    fit_weibull,
    solve_monotone_decreasing,
)
from .ratio import (
    RatioDiagnostics,
    digamma_inequality_margin,
    gamma_log_ratio,
    gamma_log_ratio_derivative,
    gamma_stirling_log_ratio,
    lognormal_log_gap,
    weibull_log_ratio,
    weibull_ratio_derivative,
)
from .specfn import QuadratureConfig, digamma, gamma_oracle, log_gamma, trigamma_oracle
from .verification import SweepGrid, SweepReport, ViolationRecord, run_all

__version__ = "0.1.0"
