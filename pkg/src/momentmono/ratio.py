"""Shape-only moment ratios and their derivatives.

For orders n > m > 0 the ratio R = E(X^n)^m / E(X^m)^n satisfies R >= 1
exactly when E(X^n)^(1/n) >= E(X^m)^(1/m).  Everything here works with
ln R (ln G for the Log-normal gap), because R itself overflows long before
its logarithm does.  None of the functions take the scale parameter: it
drops out of R identically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import OrderPair
from .errors import DomainError
from .specfn import digamma, log_gamma, log_gamma_shift

__all__ = [
    "RatioDiagnostics",
    "weibull_log_ratio",
    "weibull_ratio_derivative",
    "digamma_inequality_margin",
    "gamma_log_ratio",
    "gamma_log_ratio_derivative",
    "gamma_stirling_log_ratio",
    "lognormal_log_gap",
    "diagnose",
]

STIRLING_MIN_ALPHA = 10.0


def _shape(value: float, name: str) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0.0):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


def weibull_log_ratio(k: float, orders: OrderPair) -> float:
    """ln R = m lnGamma(1 + n/k) - n lnGamma(1 + m/k)."""
    k = _shape(k, "k")
    n, m = orders.n, orders.m
    return m * log_gamma(1.0 + n / k) - n * log_gamma(1.0 + m / k)


def weibull_ratio_derivative(k: float, orders: OrderPair) -> float:
    """d(ln R)/dk = (m n / k^2) [psi(1 + m/k) - psi(1 + n/k)].

    Same sign as dR/dk because R > 0.
    """
    k = _shape(k, "k")
    n, m = orders.n, orders.m
    return m * n / (k * k) * (digamma(1.0 + m / k) - digamma(1.0 + n / k))


def digamma_inequality_margin(k: float, orders: OrderPair) -> float:
    """psi(1 + m/k) - psi(1 + n/k).

    Dividing Gamma(1+n/k) Gamma'(1+m/k) - Gamma(1+m/k) Gamma'(1+n/k) by the
    positive product Gamma(1+n/k) Gamma(1+m/k) gives this difference, so
    the two share a sign; it is negative whenever psi is increasing.
    """
    k = _shape(k, "k")
    return digamma(1.0 + orders.m / k) - digamma(1.0 + orders.n / k)


def gamma_log_ratio(alpha: float, orders: OrderPair) -> float:
    """ln R = m lnGamma(n+a) - n lnGamma(m+a) + (n-m) lnGamma(a).

    Evaluated as m S(n) - n S(m) with S(d) = lnGamma(a+d) - lnGamma(a) - d ln a;
    the d ln a terms cancel exactly, which keeps the result accurate as
    ln R -> 0 for large alpha.
    """
    alpha = _shape(alpha, "alpha")
    n, m = orders.n, orders.m
    return m * log_gamma_shift(alpha, n) - n * log_gamma_shift(alpha, m)


def gamma_log_ratio_derivative(alpha: float, orders: OrderPair) -> float:
    """m psi(n + a) - n psi(m + a) + (n - m) psi(a), i.e. d(ln R)/d(alpha)."""
    alpha = _shape(alpha, "alpha")
    n, m = orders.n, orders.m
    return m * digamma(n + alpha) - n * digamma(m + alpha) + (n - m) * digamma(alpha)


def gamma_stirling_log_ratio(alpha: float, orders: OrderPair) -> float:
    """ln R with every Gamma replaced by sqrt(2 pi) x^(x - 1/2) e^(-x).

    With s(x) = ln(2 pi)/2 + (x - 1/2) ln x - x this is
    m s(n+a) - n s(m+a) + (n-m) s(a).  The constant and the ln a pieces
    cancel algebraically, leaving m T(n) - n T(m) with
    T(d) = (a + d - 1/2) ln(1 + d/a) - d.
    """
    alpha = float(alpha)
    if not (math.isfinite(alpha) and alpha >= STIRLING_MIN_ALPHA):
        raise DomainError(f"Stirling form needs alpha >= {STIRLING_MIN_ALPHA}, got {alpha!r}")
    n, m = orders.n, orders.m

    def t(d: float) -> float:
        return (alpha + d - 0.5) * math.log1p(d / alpha) - d

    return m * t(n) - n * t(m)


def lognormal_log_gap(sigma: float, orders: OrderPair) -> float:
    """ln G = ln[E(X^n)^(1/n) / E(X^m)^(1/m)] = sigma^2 (n - m) / 2."""
    sigma = _shape(sigma, "sigma")
    return 0.5 * sigma * sigma * (orders.n - orders.m)


@dataclass(frozen=True)
class RatioDiagnostics:
    """ln R (or ln G) and its shape derivative at one point."""

    log_ratio: float
    derivative: float
    shape_value: float
    orders: OrderPair


def diagnose(family: str, shape: float, orders: OrderPair) -> RatioDiagnostics:
    family = str(getattr(family, "value", family))
    if family == "weibull":
        lr = weibull_log_ratio(shape, orders)
        d = weibull_ratio_derivative(shape, orders)
    elif family == "gamma":
        lr = gamma_log_ratio(shape, orders)
        d = gamma_log_ratio_derivative(shape, orders)
    elif family == "lognormal":
        lr = lognormal_log_gap(shape, orders)
        d = shape * (orders.n - orders.m)
    else:
        raise DomainError(f"unknown family {family!r}")
    return RatioDiagnostics(lr, d, float(shape), orders)
