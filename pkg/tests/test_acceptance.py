"""Acceptance suite: one test per criterion, each logging a PASS/FAIL line.

Run on its own with ``pytest -s tests/test_acceptance.py``; the lines are
also repeated in the terminal summary of any run that includes this file.
"""

import json
import math
import time

import numpy as np

from momentmono.cli import main
from momentmono.distributions import (
    Family,
    GammaParams,
    LogNormalParams,
    OrderPair,
    WeibullParams,
    log_moment,
    moment,
    moment_oracle,
    normalization_oracle,
    sample,
)
from momentmono.estimation import (
    SampleMoments,
    fit_from_data,
    fit_gamma,
    fit_lognormal,
    fit_weibull,
    solve_monotone_decreasing,
)
from momentmono.ratio import (
    gamma_log_ratio,
    gamma_stirling_log_ratio,
    lognormal_log_gap,
    weibull_log_ratio,
)
from momentmono.specfn import digamma, gamma_oracle, log_gamma, trigamma_oracle
from momentmono.verification import DEFAULT_ORDER_PAIRS, oracle_grid

SAMPLE_SEEDS = {"weibull": 20240601, "gamma": 20240602, "lognormal": 20240603}


def _rel(a, b):
    return abs(a - b) / abs(b)


def test_criterion_1_theorem_sweep(capsys, acceptance_log):
    start = time.perf_counter()
    code = main(["verify"])
    elapsed = time.perf_counter() - start
    doc = json.loads(capsys.readouterr().out)
    total = doc["results"]["total_checks"]
    families = {c["family"] for c in doc["results"]["checks"]}
    names = {c["check_name"] for c in doc["results"]["checks"]}
    expected = {"theorem_monotonicity", "derivative_signs", "digamma_inequality", "limits"}
    ok = (code == 0 and total >= 10_000 and not doc["violations"] and elapsed <= 10.0
          and families == {"weibull", "gamma", "lognormal"} and expected <= names)
    with capsys.disabled():
        acceptance_log(1, ok, f"{total} checks, {len(doc['violations'])} violations, "
                              f"{elapsed:.2f} s, exit {code}")
    assert ok


def test_criterion_2_cancellation(acceptance_log):
    worst = 0.0
    count = 0
    shapes = {Family.WEIBULL: np.geomspace(0.2, 5, 25), Family.GAMMA: np.geomspace(0.1, 100, 25),
              Family.LOGNORMAL: np.geomspace(0.1, 3, 25)}
    for o in DEFAULT_ORDER_PAIRS:
        for lam in (0.1, 1.0, 10.0):
            for k in shapes[Family.WEIBULL]:
                p = WeibullParams(k, lam)
                built = o.m * log_moment(p, o.n) - o.n * log_moment(p, o.m)
                worst = max(worst, abs(built - weibull_log_ratio(k, o)))
                count += 1
        for beta in (0.1, 1.0, 10.0):
            for a in shapes[Family.GAMMA]:
                p = GammaParams(a, beta)
                built = o.m * log_moment(p, o.n) - o.n * log_moment(p, o.m)
                worst = max(worst, abs(built - gamma_log_ratio(a, o)))
                count += 1
        for mu in (-2.0, 0.0, 2.0):
            for s in shapes[Family.LOGNORMAL]:
                p = LogNormalParams(mu, s)
                built = log_moment(p, o.n) / o.n - log_moment(p, o.m) / o.m
                worst = max(worst, abs(built - lognormal_log_gap(s, o)))
                count += 1
    ok = worst <= 1e-9
    acceptance_log(2, ok, f"{count} points, max abs difference {worst:.2e} (limit 1e-9)")
    assert ok


def test_criterion_3_limits(acceptance_log):
    o21 = OrderPair(2, 1)
    weibull = abs(weibull_log_ratio(1e8, o21))
    gamma = abs(gamma_log_ratio(1e6, o21) - 1e-6)
    stirling_ok = True
    for o in (OrderPair(2, 1), OrderPair(3, 1), OrderPair(3, 2)):
        r10 = abs(gamma_stirling_log_ratio(10.0, o) - gamma_log_ratio(10.0, o))
        r100 = abs(gamma_stirling_log_ratio(100.0, o) - gamma_log_ratio(100.0, o))
        stirling_ok &= r100 < r10
    ok = weibull <= 1e-6 and gamma <= 1e-9 and stirling_ok
    acceptance_log(3, ok, f"weibull {weibull:.1e}, gamma offset {gamma:.1e}, "
                          f"stirling residual decreasing: {stirling_ok}")
    assert ok


def test_criterion_4_oracle_agreement(acceptance_log):
    worst_moment = 0.0
    worst_mass = 0.0
    count = 0
    for family in Family:
        g = oracle_grid(family)
        for shape in g.shape_values:
            for nuisance in g.nuisance_values:
                if family is Family.WEIBULL:
                    p = WeibullParams(shape, nuisance)
                elif family is Family.GAMMA:
                    p = GammaParams(shape, nuisance)
                else:
                    p = LogNormalParams(nuisance, shape)
                worst_mass = max(worst_mass, abs(normalization_oracle(p) - 1.0))
                for i in (1, 2, 3, 4):
                    worst_moment = max(worst_moment, _rel(moment_oracle(p, i), moment(p, i)))
                    count += 1
    ok = worst_moment <= 1e-8 and worst_mass <= 1e-8
    acceptance_log(4, ok, f"{count} moments, worst relative error {worst_moment:.1e}, "
                          f"worst mass error {worst_mass:.1e}")
    assert ok


def test_criterion_5_round_trip(acceptance_log):
    o = OrderPair(2, 1)
    worst = 0.0
    for shape in (0.5, 1.0, 2.0, 5.0):
        for scale in (0.5, 1.0, 2.0):
            for params, fit in ((WeibullParams(shape, scale), fit_weibull),
                                (GammaParams(shape, scale), fit_gamma)):
                sm = SampleMoments(math.exp(log_moment(params, 2)), math.exp(log_moment(params, 1)),
                                   o, 10**6)
                est = fit(sm).params
                worst = max(worst, _rel(est.shape, shape), _rel(est.scale, scale))
    ln_worst = 0.0
    for mu in (-2.0, 0.0, 2.0):
        for sigma in (0.5, 1.0, 2.0):
            p = LogNormalParams(mu, sigma)
            sm = SampleMoments(math.exp(log_moment(p, 2)), math.exp(log_moment(p, 1)), o, 10**6)
            est = fit_lognormal(sm).params
            ln_worst = max(ln_worst, abs(est.mu - mu), abs(est.sigma - sigma))
    k2 = solve_monotone_decreasing(lambda k: weibull_log_ratio(k, o), math.log(4 / math.pi))
    a2 = solve_monotone_decreasing(lambda a: gamma_log_ratio(a, o), math.log(1.5))
    derived = max(abs(k2 - 2.0), abs(a2 - 2.0))
    ok = worst <= 1e-8 and ln_worst <= 1e-12 and derived <= 1e-8
    acceptance_log(5, ok, f"weibull/gamma worst rel {worst:.1e}, lognormal worst abs "
                          f"{ln_worst:.1e}, derived targets off by {derived:.1e}")
    assert ok


def test_criterion_6_sampled_recovery(acceptance_log):
    cases = {"weibull": WeibullParams(2.0, 1.0), "gamma": GammaParams(2.0, 3.0),
             "lognormal": LogNormalParams(0.0, 1.0)}
    worst = 0.0
    parts = []
    for name, p in cases.items():
        x = sample(p, 200_000, SAMPLE_SEEDS[name])
        est = fit_from_data(x, name).params
        err = max(_rel(est.shape, p.shape), _rel(est.scale, p.scale))
        worst = max(worst, err)
        parts.append(f"{name} {100 * err:.2f}%")
    ok = worst <= 0.05
    acceptance_log(6, ok, ", ".join(parts) + " (limit 5%)")
    assert ok


def test_criterion_7_special_functions(acceptance_log):
    dg = 0.0
    for x in np.linspace(0.5, 50, 500):
        h = 1e-5 * max(1.0, x)
        fd = (log_gamma(x + h) - log_gamma(x - h)) / (2 * h)
        dg = max(dg, abs(digamma(x) - fd))
    go = 0.0
    for x in np.linspace(0.5, 20, 200):
        ref = math.exp(log_gamma(x))
        go = max(go, abs(gamma_oracle(x) - ref) / ref)
    tg = min(trigamma_oracle(x) for x in np.geomspace(0.1, 30, 200))
    ok = dg <= 1e-8 and go <= 1e-8 and tg > 0
    acceptance_log(7, ok, f"digamma vs difference {dg:.1e}, gamma oracle rel {go:.1e}, "
                          f"min trigamma {tg:.3g}")
    assert ok


def test_criterion_8_degenerate_handling(tmp_path, capsys, acceptance_log):
    flat = tmp_path / "flat.txt"
    flat.write_text("2.0\n2.0\n2.0\n2.0\n")
    negative = tmp_path / "negative.txt"
    negative.write_text("1.0\n-0.5\n2.0\n")
    codes = (
        main(["fit", "--family", "weibull", "--input", str(flat)]),
        main(["fit", "--family", "gamma", "--input", str(negative)]),
        main(["verify", "--shape-points", "5", "--tolerance", "-1"]),
    )
    capsys.readouterr()
    ok = codes == (3, 2, 5)
    with capsys.disabled():
        acceptance_log(8, ok, f"exit codes zero-variance/negative/forced-failure = {codes} "
                              f"(want (3, 2, 5))")
    assert ok
