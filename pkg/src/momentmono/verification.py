"""Grid sweeps that check the moment-monotonicity inequalities numerically.

Each check walks its grid in a fixed order and returns a :class:`SweepReport`.
Failed assertions are recorded as :class:`ViolationRecord` data rather than
raised, so a sweep always runs to completion.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .distributions import (
    Family,
    GammaParams,
    LogNormalParams,
    OrderPair,
    WeibullParams,
    moment,
    moment_oracle,
    normalization_oracle,
    root_moment,
)
from .errors import ConvergenceError, DomainError
from .ratio import (
    digamma_inequality_margin,
    gamma_log_ratio,
    gamma_log_ratio_derivative,
    gamma_stirling_log_ratio,
    lognormal_log_gap,
    weibull_log_ratio,
    weibull_ratio_derivative,
)
from .specfn import DEFAULT_QUADRATURE, QuadratureConfig

__all__ = [
    "SweepGrid",
    "ViolationRecord",
    "SweepReport",
    "DEFAULT_ORDER_PAIRS",
    "all_pairs",
    "NONNEGATIVITY_TOL",
    "default_grid",
    "oracle_grid",
    "check_theorem_monotonicity",
    "check_derivative_signs",
    "check_digamma_inequality",
    "check_limits",
    "gamma_limit_tolerance",
    "check_moment_oracle",
    "run_all",
]

NONNEGATIVITY_TOL = 1e-9
FD_TOL = 1e-5
FD_ABS_LIMIT = 1e3
FD_REL_STEP = 1e-6
WEIBULL_LIMIT_K = 1e8
GAMMA_LIMIT_ALPHA = 1e6
STIRLING_ALPHAS = (10.0, 100.0, 1e4)
ORACLE_REL_TOL = 1e-8


def all_pairs(values: Iterable[float]) -> tuple[OrderPair, ...]:
    """Every (n, m) with n > m drawn from ``values``."""
    v = sorted(values)
    return tuple(OrderPair(n, m) for j, m in enumerate(v) for n in v[j + 1 :])


DEFAULT_ORDER_PAIRS = all_pairs(range(1, 7)) + (
    OrderPair(0.5, 0.25),
    OrderPair(1.5, 0.5),
    OrderPair(3.5, 2.5),
)


@dataclass(frozen=True)
class SweepGrid:
    shape_values: tuple[float, ...]
    nuisance_values: tuple[float, ...]
    order_pairs: tuple[OrderPair, ...]

    def __post_init__(self):
        object.__setattr__(self, "shape_values", tuple(float(s) for s in self.shape_values))
        object.__setattr__(self, "nuisance_values", tuple(float(s) for s in self.nuisance_values))
        object.__setattr__(self, "order_pairs", tuple(self.order_pairs))
        if not (self.shape_values and self.nuisance_values and self.order_pairs):
            raise DomainError("sweep grid dimensions must be nonempty")
        if any(s <= 0.0 or not math.isfinite(s) for s in self.shape_values):
            raise DomainError("shape values must be positive and finite")
        if any(b <= a for a, b in zip(self.shape_values, self.shape_values[1:])):
            raise DomainError("shape values must be strictly increasing")


def default_grid(
    family: Family | str, shape_points: int = 50, order_pairs: Sequence[OrderPair] | None = None
) -> SweepGrid:
    """Log-spaced shape grid with three nuisance values per family."""
    family = Family(family)
    lo, hi, nuisance = {
        Family.WEIBULL: (0.2, 5.0, (0.1, 1.0, 10.0)),
        Family.GAMMA: (0.1, 100.0, (0.1, 1.0, 10.0)),
        Family.LOGNORMAL: (0.1, 3.0, (-2.0, 0.0, 2.0)),
    }[family]
    shapes = np.geomspace(lo, hi, shape_points) if shape_points > 1 else np.array([lo])
    return SweepGrid(tuple(shapes.tolist()), nuisance, tuple(order_pairs or DEFAULT_ORDER_PAIRS))


def oracle_grid(family: Family | str) -> SweepGrid:
    """Parameters small enough for the quadrature oracle to be trusted."""
    family = Family(family)
    if family is Family.LOGNORMAL:
        return SweepGrid((0.25, 0.5, 1.0), (-1.0, 0.0, 1.0), (OrderPair(2, 1),))
    return SweepGrid((0.5, 1.0, 2.0, 5.0), (0.5, 1.0, 2.0), (OrderPair(2, 1),))


@dataclass(frozen=True)
class ViolationRecord:
    check_name: str
    family: str
    point: tuple[tuple[str, float], ...]
    observed: float
    threshold: float


@dataclass
class SweepReport:
    check_name: str
    family: str
    total_checks: int = 0
    violations: list[ViolationRecord] = field(default_factory=list)
    worst_margin: float = math.inf
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations

    def assert_(
        self,
        label: str,
        point: tuple[tuple[str, float], ...],
        observed: float,
        relation: str,
        threshold: float,
        track_margin: bool = True,
    ) -> bool:
        """Record one assertion ``observed <relation> threshold``.

        ``worst_margin`` follows the smallest slack of the inequality
        assertions; consistency checks (finite differences) pass
        ``track_margin=False`` so they do not mask it.
        """
        self.total_checks += 1
        if relation in (">=", ">"):
            slack = observed - threshold
            ok = slack >= 0.0 if relation == ">=" else slack > 0.0
        else:
            slack = threshold - observed
            ok = slack >= 0.0 if relation == "<=" else slack > 0.0
        if track_margin and not math.isnan(slack):
            self.worst_margin = min(self.worst_margin, slack)
        if not ok:
            self.violations.append(
                ViolationRecord(label, self.family, point, float(observed), float(threshold))
            )
        return ok


def _params(family: Family, shape: float, nuisance: float):
    if family is Family.WEIBULL:
        return WeibullParams(shape, nuisance)
    if family is Family.GAMMA:
        return GammaParams(shape, nuisance)
    return LogNormalParams(nuisance, shape)


_SHAPE_NAME = {Family.WEIBULL: "k", Family.GAMMA: "alpha", Family.LOGNORMAL: "sigma"}
_NUISANCE_NAME = {Family.WEIBULL: "lambda", Family.GAMMA: "beta", Family.LOGNORMAL: "mu"}


def _shape_log_ratio(family: Family, shape: float, orders: OrderPair) -> float:
    if family is Family.WEIBULL:
        return weibull_log_ratio(shape, orders)
    if family is Family.GAMMA:
        return gamma_log_ratio(shape, orders)
    return lognormal_log_gap(shape, orders)


def _derivative(family: Family, shape: float, orders: OrderPair) -> float:
    if family is Family.WEIBULL:
        return weibull_ratio_derivative(shape, orders)
    return gamma_log_ratio_derivative(shape, orders)


def check_theorem_monotonicity(
    family: Family | str, grid: SweepGrid, tolerance: float = NONNEGATIVITY_TOL
) -> SweepReport:
    """ln R >= -tol and E(X^n)^(1/n) >= E(X^m)^(1/m) (1 - tol) at every grid point.

    For the Log-normal family the gap ln G stands in for ln R.  The
    root-moment comparison is made on a log scale in the same units as
    ln R (times m n for Weibull/Gamma) so the two margins are comparable.
    """
    family = Family(family)
    if not tolerance < 1.0:
        raise DomainError("tolerance must be below 1")
    start = time.perf_counter()
    report = SweepReport("theorem_monotonicity", family.value)
    log_floor = math.log1p(-tolerance)
    sname, nname = _SHAPE_NAME[family], _NUISANCE_NAME[family]
    for shape in grid.shape_values:
        for nuisance in grid.nuisance_values:
            params = _params(family, shape, nuisance)
            for o in grid.order_pairs:
                point = ((sname, shape), (nname, nuisance), ("n", o.n), ("m", o.m))
                report.assert_("log_ratio_nonnegative", point,
                               _shape_log_ratio(family, shape, o), ">=", -tolerance)
                scale = 1.0 if family is Family.LOGNORMAL else o.n * o.m
                gap = math.log(root_moment(params, o.n)) - math.log(root_moment(params, o.m))
                report.assert_("root_moment_monotone", point, scale * gap, ">=", scale * log_floor)
    report.elapsed = time.perf_counter() - start
    return report


def check_derivative_signs(family: Family | str, grid: SweepGrid) -> SweepReport:
    """Analytic shape derivative of ln R is negative and matches a central difference."""
    family = Family(family)
    if family is Family.LOGNORMAL:
        raise DomainError("derivative check applies to weibull and gamma only")
    start = time.perf_counter()
    report = SweepReport("derivative_signs", family.value)
    sname = _SHAPE_NAME[family]
    for shape in grid.shape_values:
        h = shape * FD_REL_STEP
        for o in grid.order_pairs:
            point = ((sname, shape), ("n", o.n), ("m", o.m))
            d = _derivative(family, shape, o)
            fd = (_shape_log_ratio(family, shape + h, o) - _shape_log_ratio(family, shape - h, o)) / (2 * h)
            report.assert_("derivative_negative", point, d, "<", 0.0)
            report.assert_("finite_difference_negative", point, fd, "<", 0.0, track_margin=False)
            tol = FD_TOL if abs(d) <= FD_ABS_LIMIT else FD_TOL * abs(d)
            report.assert_("finite_difference_match", point, abs(fd - d), "<=", tol,
                           track_margin=False)
    report.elapsed = time.perf_counter() - start
    return report


def check_digamma_inequality(grid: SweepGrid) -> SweepReport:
    """psi(1 + m/k) - psi(1 + n/k) < 0 on the Weibull shape grid."""
    start = time.perf_counter()
    report = SweepReport("digamma_inequality", Family.WEIBULL.value)
    for k in grid.shape_values:
        for o in grid.order_pairs:
            report.assert_("digamma_margin_negative", (("k", k), ("n", o.n), ("m", o.m)),
                           digamma_inequality_margin(k, o), "<", 0.0)
    report.elapsed = time.perf_counter() - start
    return report


def gamma_limit_tolerance(orders: OrderPair, alpha: float = GAMMA_LIMIT_ALPHA) -> float:
    """Bound on |ln R| at large alpha: 2e-6 n m, widened to n m (n - m) / alpha.

    ln R ~ n m (n - m) / (2 alpha), so for n - m > 4 the flat 2e-6 n m bound
    sits below the true value; twice the leading term is used there.
    """
    n, m = orders.n, orders.m
    return max(2e-6 * n * m, n * m * (n - m) / alpha)


def check_limits(family: Family | str, order_pairs: Sequence[OrderPair]) -> SweepReport:
    """ln R -> 0 as the shape grows, and the Stirling error shrinks with alpha."""
    family = Family(family)
    start = time.perf_counter()
    report = SweepReport("limits", family.value)
    for o in order_pairs:
        if family is Family.WEIBULL:
            report.assert_("weibull_limit", (("k", WEIBULL_LIMIT_K), ("n", o.n), ("m", o.m)),
                           abs(weibull_log_ratio(WEIBULL_LIMIT_K, o)), "<=", 1e-6)
        elif family is Family.GAMMA:
            report.assert_("gamma_limit", (("alpha", GAMMA_LIMIT_ALPHA), ("n", o.n), ("m", o.m)),
                           abs(gamma_log_ratio(GAMMA_LIMIT_ALPHA, o)), "<=", gamma_limit_tolerance(o))
            residuals = [
                abs(gamma_stirling_log_ratio(a, o) - gamma_log_ratio(a, o)) for a in STIRLING_ALPHAS
            ]
            for a, prev, cur in zip(STIRLING_ALPHAS[1:], residuals, residuals[1:]):
                report.assert_("stirling_residual_decreasing",
                               (("alpha", a), ("n", o.n), ("m", o.m)), cur, "<", prev)
        else:
            raise DomainError("limit check applies to weibull and gamma only")
    report.elapsed = time.perf_counter() - start
    return report


def check_moment_oracle(
    family: Family | str,
    grid: SweepGrid | None = None,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    orders: Sequence[int] = (1, 2, 3, 4),
) -> SweepReport:
    """Quadrature moments and total mass against the closed forms."""
    family = Family(family)
    grid = grid or oracle_grid(family)
    start = time.perf_counter()
    report = SweepReport("moment_oracle", family.value)
    sname, nname = _SHAPE_NAME[family], _NUISANCE_NAME[family]
    for shape in grid.shape_values:
        for nuisance in grid.nuisance_values:
            params = _params(family, shape, nuisance)
            base = ((sname, shape), (nname, nuisance))
            try:
                mass = normalization_oracle(params, cfg)
            except ConvergenceError:
                mass = math.nan
            report.assert_("pdf_normalization", base, abs(mass - 1.0), "<=", ORACLE_REL_TOL)
            for i in orders:
                try:
                    err = abs(moment_oracle(params, i, cfg) / moment(params, i) - 1.0)
                except ConvergenceError:
                    err = math.nan
                report.assert_("moment_agreement", base + (("i", float(i)),), err, "<=",
                               ORACLE_REL_TOL)
    report.elapsed = time.perf_counter() - start
    return report


def run_all(
    tolerance: float = NONNEGATIVITY_TOL,
    shape_points: int = 50,
    order_pairs: Sequence[OrderPair] | None = None,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> list[SweepReport]:
    """The five checks on the default grids, in a fixed order."""
    pairs = tuple(order_pairs or DEFAULT_ORDER_PAIRS)
    grids = {f: default_grid(f, shape_points, pairs) for f in Family}
    reports = [check_theorem_monotonicity(f, grids[f], tolerance) for f in Family]
    reports += [check_derivative_signs(f, grids[f]) for f in (Family.WEIBULL, Family.GAMMA)]
    reports.append(check_digamma_inequality(grids[Family.WEIBULL]))
    reports += [check_limits(f, pairs) for f in (Family.WEIBULL, Family.GAMMA)]
    reports += [check_moment_oracle(f, cfg=cfg) for f in Family]
    return reports
