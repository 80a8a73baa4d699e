"""Weibull, Gamma and Log-normal parameter records, densities and moments.

Moments are computed in log space and only exponentiated on request, since
Gamma(1 + n/k) leaves double range long before the moment ratios do.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError
from .specfn import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    log_gamma,
    log_gamma_shift,
    quad,
)

__all__ = [
    "Family",
    "WeibullParams",
    "GammaParams",
    "LogNormalParams",
    "DistributionParams",
    "OrderPair",
    "family_of",
    "pdf",
    "log_moment",
    "moment",
    "root_moment",
    "moment_oracle",
    "normalization_oracle",
    "sample",
]

LOG_FLOAT_MAX = math.log(np.finfo(float).max)


class Family(str, enum.Enum):
    WEIBULL = "weibull"
    GAMMA = "gamma"
    LOGNORMAL = "lognormal"


def _positive(value: float, name: str) -> None:
    if not (math.isfinite(value) and value > 0.0):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class WeibullParams:
    k: float
    lam: float

    def __post_init__(self):
        _positive(self.k, "k")
        _positive(self.lam, "lambda")

    @property
    def shape(self) -> float:
        return self.k

    @property
    def scale(self) -> float:
        return self.lam


@dataclass(frozen=True)
class GammaParams:
    alpha: float
    beta: float

    def __post_init__(self):
        _positive(self.alpha, "alpha")
        _positive(self.beta, "beta")

    @property
    def shape(self) -> float:
        return self.alpha

    @property
    def scale(self) -> float:
        return self.beta


@dataclass(frozen=True)
class LogNormalParams:
    mu: float
    sigma: float

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu!r}")
        _positive(self.sigma, "sigma")

    @property
    def shape(self) -> float:
        return self.sigma

    @property
    def scale(self) -> float:
        """The median exp(mu), the multiplicative scale of the family."""
        return math.exp(self.mu)


DistributionParams = Union[WeibullParams, GammaParams, LogNormalParams]

_FAMILIES = {
    WeibullParams: Family.WEIBULL,
    GammaParams: Family.GAMMA,
    LogNormalParams: Family.LOGNORMAL,
}


def family_of(params: DistributionParams) -> Family:
    try:
        return _FAMILIES[type(params)]
    except KeyError:
        raise TypeError(f"not a distribution parameter record: {params!r}") from None


@dataclass(frozen=True)
class OrderPair:
    """Moment orders ``n > m > 0``; real orders are allowed."""

    n: float
    m: float

    def __post_init__(self):
        if not (math.isfinite(self.n) and math.isfinite(self.m)):
            raise DomainError("moment orders must be finite")
        if not self.n > self.m > 0.0:
            raise DomainError(f"moment orders need n > m > 0, got n={self.n!r}, m={self.m!r}")

    @classmethod
    def parse(cls, text: str) -> "OrderPair":
        """Build from ``"n,m"``."""
        try:
            n, m = (float(part) for part in text.split(","))
        except ValueError:
            raise DomainError(f"orders must look like 'n,m', got {text!r}") from None
        return cls(n, m)


def _order(i: float) -> float:
    i = float(i)
    if not (math.isfinite(i) and i > 0.0):
        raise DomainError(f"moment order must be positive and finite, got {i!r}")
    return i


def pdf(params: DistributionParams, x: float) -> float:
    """Probability density at ``x``; zero on x < 0 for every family."""
    x = float(x)
    if x < 0.0:
        return 0.0
    if isinstance(params, WeibullParams):
        k, lam = params.k, params.lam
        if x == 0.0:
            return math.inf if k < 1.0 else (1.0 / lam if k == 1.0 else 0.0)
        z = x / lam
        return k / lam * math.exp((k - 1.0) * math.log(z) - z**k)
    if isinstance(params, GammaParams):
        a, b = params.alpha, params.beta
        if x == 0.0:
            return math.inf if a < 1.0 else (1.0 / b if a == 1.0 else 0.0)
        return math.exp((a - 1.0) * math.log(x) - x / b - a * math.log(b) - log_gamma(a))
    if isinstance(params, LogNormalParams):
        if x == 0.0:
            return 0.0
        u = (math.log(x) - params.mu) / params.sigma
        return math.exp(-0.5 * u * u) / (math.sqrt(2.0 * math.pi) * params.sigma * x)
    raise TypeError(f"not a distribution parameter record: {params!r}")


def log_moment(params: DistributionParams, i: float) -> float:
    """ln E(X^i) from the closed forms."""
    i = _order(i)
    if isinstance(params, WeibullParams):
        return i * math.log(params.lam) + log_gamma(1.0 + i / params.k)
    if isinstance(params, GammaParams):
        # ln Gamma(i + a) - ln Gamma(a) written so the i ln a piece is explicit
        a = params.alpha
        return i * (math.log(params.beta) + math.log(a)) + log_gamma_shift(a, i)
    if isinstance(params, LogNormalParams):
        return params.mu * i + 0.5 * params.sigma**2 * i * i
    raise TypeError(f"not a distribution parameter record: {params!r}")


def moment(params: DistributionParams, i: float) -> float:
    """Raw moment E(X^i); raises OverflowError when it exceeds double range."""
    lm = log_moment(params, i)
    if lm > LOG_FLOAT_MAX:
        raise OverflowError(f"ln E(X^{i}) = {lm:.6g} exceeds double range")
    return math.exp(lm)


def root_moment(params: DistributionParams, i: float) -> float:
    """E(X^i)^(1/i), evaluated as exp(ln E(X^i) / i)."""
    i = _order(i)
    lr = log_moment(params, i) / i
    if lr > LOG_FLOAT_MAX:
        raise OverflowError(f"root moment of order {i} exceeds double range")
    return math.exp(lr)


def _peak(params: DistributionParams, i: float) -> float:
    """Maximiser of x^(i+1) f(x), i.e. the bulk of x^i f(x) on a log axis."""
    if isinstance(params, WeibullParams):
        k = params.k
        return params.lam * ((i + k) / k) ** (1.0 / k)
    if isinstance(params, GammaParams):
        return params.beta * (i + params.alpha)
    return math.exp(params.mu + i * params.sigma**2)


def _integrate_power(params: DistributionParams, i: float, cfg: QuadratureConfig) -> float:
    # [0, c] with x = c u and [c, inf) with x = c / u, both onto [0, 1]
    c = _peak(params, i)

    def near(u: float) -> float:
        x = c * u
        if x <= 0.0:
            return 0.0
        return x**i * pdf(params, x) * c

    def far(u: float) -> float:
        if u <= 0.0:
            return 0.0
        x = c / u
        p = pdf(params, x)
        if p == 0.0:
            return 0.0
        return math.exp(i * math.log(x) + math.log(p) + math.log(c) - 2.0 * math.log(u))

    return quad(near, 0.0, 1.0, cfg) + quad(far, 0.0, 1.0, cfg)


def moment_oracle(
    params: DistributionParams, i: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """E(X^i) by adaptive quadrature of x^i f(x) over [0, inf).

    Intended for moderate parameters (|ln E(X^i)| up to a few hundred,
    i <= 8); it shares no code with the closed forms beyond the density.
    """
    i = _order(i)
    if i > 8.0:
        raise DomainError(f"moment_oracle supports i <= 8, got {i!r}")
    return _integrate_power(params, i, cfg)


def normalization_oracle(
    params: DistributionParams, cfg: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Total probability mass by quadrature of the density; should be 1."""
    return _integrate_power(params, 0.0, cfg)


def _open_uniform(rng: np.random.Generator, size: int) -> np.ndarray:
    # 53-bit grid shifted by half a step: strictly inside (0, 1)
    bits = rng.integers(0, 1 << 53, size=size, dtype=np.uint64)
    return (bits.astype(np.float64) + 0.5) * 2.0**-53


def _marsaglia_tsang(rng: np.random.Generator, alpha: float, count: int) -> np.ndarray:
    """Standard Gamma(alpha, 1) variates by Marsaglia-Tsang squeeze/rejection."""
    boost = alpha < 1.0
    a = alpha + 1.0 if boost else alpha
    d = a - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(count)
    filled = 0
    while filled < count:
        need = count - filled
        batch = need + need // 20 + 16
        z = rng.standard_normal(batch)
        u = _open_uniform(rng, batch)
        v = (1.0 + c * z) ** 3
        ok = v > 0.0
        with np.errstate(invalid="ignore", divide="ignore"):
            lv = np.log(np.where(ok, v, 1.0))
        z2 = z * z
        accept = ok & (
            (u < 1.0 - 0.0331 * z2 * z2) | (np.log(u) < 0.5 * z2 + d * (1.0 - v + lv))
        )
        got = (d * v[accept])[:need]
        out[filled : filled + got.size] = got
        filled += got.size
    if boost:
        out *= _open_uniform(rng, count) ** (1.0 / alpha)
    return out


def sample(params: DistributionParams, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` variates, reproducible for a given ``seed``.

    The stream comes from a Philox counter-based generator.  Weibull uses
    the inverse CDF lam * (-ln U)^(1/k), Log-normal exp(mu + sigma Z) and
    Gamma the Marsaglia-Tsang method (with the U^(1/alpha) boost for
    alpha < 1).
    """
    if int(count) != count or count < 1:
        raise DomainError(f"count must be a positive integer, got {count!r}")
    if int(seed) != seed or not 0 <= seed < 2**64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    count = int(count)
    rng = np.random.Generator(np.random.Philox(int(seed)))
    if isinstance(params, WeibullParams):
        u = _open_uniform(rng, count)
        return params.lam * (-np.log(u)) ** (1.0 / params.k)
    if isinstance(params, GammaParams):
        return params.beta * _marsaglia_tsang(rng, params.alpha, count)
    if isinstance(params, LogNormalParams):
        return np.exp(params.mu + params.sigma * rng.standard_normal(count))
    raise TypeError(f"not a distribution parameter record: {params!r}")
