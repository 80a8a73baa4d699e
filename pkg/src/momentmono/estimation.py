"""Method-of-moments fits built on the shape-only moment ratio.

Because ln R depends on the shape parameter alone, the shape is found by
inverting a strictly decreasing scalar function with bisection, and the
scale is then back-solved from the lower-order moment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .distributions import (
    DistributionParams,
    Family,
    GammaParams,
    LogNormalParams,
    OrderPair,
    WeibullParams,
)
from .errors import BracketError, ConvergenceError, DomainError, NonIdentifiableError
from .ratio import gamma_log_ratio, lognormal_log_gap, weibull_log_ratio
from .specfn import log_gamma

__all__ = [
    "SampleMoments",
    "BisectionConfig",
    "BisectionInfo",
    "EstimateResult",
    "DEFAULT_ORDERS",
    "empirical_moment",
    "sample_moments",
    "solve_monotone_decreasing",
    "fit_weibull",
    "fit_gamma",
    "fit_lognormal",
    "fit_from_data",
]

DEFAULT_ORDERS = OrderPair(2.0, 1.0)

_EXPANSION_FACTOR = 4.0
_MAX_EXPANSIONS = 60


@dataclass(frozen=True)
class SampleMoments:
    """Empirical raw moments of orders n and m from ``count`` observations."""

    m_n: float
    m_m: float
    orders: OrderPair = DEFAULT_ORDERS
    count: int = 2

    def __post_init__(self):
        for name in ("m_n", "m_m"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"{name} must be positive and finite, got {v!r}")
        if self.count < 2:
            raise DomainError(f"need at least 2 observations, got {self.count}")

    @property
    def log_ratio(self) -> float:
        """Sample analogue of ln R: m ln m_n - n ln m_m."""
        o = self.orders
        return o.m * math.log(self.m_n) - o.n * math.log(self.m_m)


@dataclass(frozen=True)
class BisectionConfig:
    abs_tol: float = 1e-12
    residual_tol: float = 1e-10
    max_iterations: int = 200
    initial_bracket: tuple[float, float] = (1e-2, 1e2)

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and self.residual_tol > 0.0):
            raise DomainError("tolerances must be positive")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise DomainError("max_iterations must be a positive integer")
        lo, hi = self.initial_bracket
        if not 0.0 < lo < hi < math.inf:
            raise DomainError(f"initial bracket needs 0 < lo < hi, got {self.initial_bracket!r}")


@dataclass(frozen=True)
class BisectionInfo:
    residual: float
    iterations: int
    bracket: tuple[float, float]


@dataclass(frozen=True)
class EstimateResult:
    params: DistributionParams
    residual: float
    iterations: int
    bracket_used: tuple[float, float] = field(default=(math.nan, math.nan))


def empirical_moment(data: Sequence[float], i: float) -> float:
    """(1/N) sum x_j^i with exactly rounded summation (math.fsum)."""
    x = np.asarray(data, dtype=float).ravel()
    if x.size == 0:
        raise DomainError("data is empty")
    if not np.all(np.isfinite(x)) or np.any(x <= 0.0):
        raise DomainError("data must be positive and finite")
    i = float(i)
    if not (math.isfinite(i) and i > 0.0):
        raise DomainError(f"moment order must be positive and finite, got {i!r}")
    return math.fsum(np.power(x, i).tolist()) / x.size


def sample_moments(data: Sequence[float], orders: OrderPair = DEFAULT_ORDERS) -> SampleMoments:
    x = np.asarray(data, dtype=float).ravel()
    return SampleMoments(
        empirical_moment(x, orders.n), empirical_moment(x, orders.m), orders, int(x.size)
    )


def _expand_bracket(g, target, lo, hi):
    g_lo, g_hi = g(lo), g(hi)
    for _ in range(_MAX_EXPANSIONS):
        if g_lo >= target >= g_hi:
            return lo, hi, g_lo, g_hi
        if g_lo < target:
            lo /= _EXPANSION_FACTOR
            g_lo = g(lo)
        if g_hi > target:
            hi *= _EXPANSION_FACTOR
            g_hi = g(hi)
    if g_lo >= target >= g_hi:
        return lo, hi, g_lo, g_hi
    raise BracketError(
        f"target {target!r} outside g([{lo:.3g}, {hi:.3g}]) = [{g_hi!r}, {g_lo!r}]"
    )


def solve_monotone_decreasing(
    g: Callable[[float], float],
    target: float,
    cfg: BisectionConfig = BisectionConfig(),
    full_output: bool = False,
):
    """Solve g(x) = target for a strictly decreasing g on (0, inf).

    The initial bracket is widened geometrically (x4 per step, at most 60
    steps) until g(lo) >= target >= g(hi), then bisected until the bracket
    is narrower than ``abs_tol`` or stops shrinking in floating point.
    Monotonicity makes every step keep the root inside the bracket.

    Returns the root, or ``(root, BisectionInfo)`` when ``full_output``.
    """
    target = float(target)
    if not math.isfinite(target):
        raise DomainError(f"target must be finite, got {target!r}")
    lo, hi, g_lo, g_hi = _expand_bracket(g, target, *cfg.initial_bracket)
    bracket = (lo, hi)

    iterations = 0
    while hi - lo > cfg.abs_tol:
        if iterations >= cfg.max_iterations:
            raise ConvergenceError(
                f"bisection did not converge in {cfg.max_iterations} iterations "
                f"(bracket [{lo!r}, {hi!r}])"
            )
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        iterations += 1
        g_mid = g(mid)
        if g_mid == target:
            lo = hi = mid
            g_lo = g_hi = g_mid
            break
        if g_mid > target:
            lo, g_lo = mid, g_mid
        else:
            hi, g_hi = mid, g_mid

    if abs(g_lo - target) <= abs(g_hi - target):
        root, residual = lo, abs(g_lo - target)
    else:
        root, residual = hi, abs(g_hi - target)
    if residual > cfg.residual_tol:
        raise ConvergenceError(
            f"bisection stalled with |g(x) - target| = {residual:.3g} > {cfg.residual_tol:.3g}"
        )
    if full_output:
        return root, BisectionInfo(residual, iterations, bracket)
    return root


def _require_identifiable(t: float, what: str) -> None:
    if not t > 0.0:
        raise NonIdentifiableError(
            f"sample {what} = {t!r} is not above the infimum 0; no finite shape reproduces it"
        )


def fit_weibull(moments: SampleMoments, cfg: BisectionConfig = BisectionConfig()) -> EstimateResult:
    """Weibull (k, lambda) from two raw moments; lambda never enters the k equation."""
    o = moments.orders
    t = moments.log_ratio
    _require_identifiable(t, "log ratio")
    k, info = solve_monotone_decreasing(
        lambda k: weibull_log_ratio(k, o), t, cfg, full_output=True
    )
    lam = math.exp((math.log(moments.m_m) - log_gamma(1.0 + o.m / k)) / o.m)
    return EstimateResult(WeibullParams(k, lam), info.residual, info.iterations, info.bracket)


def fit_gamma(moments: SampleMoments, cfg: BisectionConfig = BisectionConfig()) -> EstimateResult:
    """Gamma (alpha, beta) from two raw moments; beta never enters the alpha equation."""
    o = moments.orders
    t = moments.log_ratio
    _require_identifiable(t, "log ratio")
    alpha, info = solve_monotone_decreasing(
        lambda a: gamma_log_ratio(a, o), t, cfg, full_output=True
    )
    beta = math.exp((math.log(moments.m_m) - log_gamma(o.m + alpha) + log_gamma(alpha)) / o.m)
    return EstimateResult(GammaParams(alpha, beta), info.residual, info.iterations, info.bracket)


def fit_lognormal(moments: SampleMoments) -> EstimateResult:
    """Log-normal (mu, sigma) in closed form: ln G = sigma^2 (n - m) / 2."""
    o = moments.orders
    ln_n, ln_m = math.log(moments.m_n), math.log(moments.m_m)
    log_gap = ln_n / o.n - ln_m / o.m
    _require_identifiable(log_gap, "log gap")
    var = 2.0 * log_gap / (o.n - o.m)
    mu = ln_m / o.m - 0.5 * var * o.m
    sigma = math.sqrt(var)
    residual = abs(lognormal_log_gap(sigma, o) - log_gap)
    return EstimateResult(LogNormalParams(mu, sigma), residual, 0)


def fit_from_data(
    data: Sequence[float],
    family: Family | str,
    orders: OrderPair = DEFAULT_ORDERS,
    cfg: BisectionConfig = BisectionConfig(),
) -> EstimateResult:
    family = Family(family)
    moments = sample_moments(data, orders)
    if family is Family.WEIBULL:
        return fit_weibull(moments, cfg)
    if family is Family.GAMMA:
        return fit_gamma(moments, cfg)
    return fit_lognormal(moments)
