"""Acceptance criteria, one test each, at their stated tolerances and time limits.

Each test records a one-line PASS/FAIL summary that ``conftest.py`` prints
at the end of the session.
"""

import math
import time

import numpy as np
import pytest

from quasarppa.checker import (
    ball_sampler,
    check_diff_characterization,
    check_quadratic_growth,
    check_quasar_inequality,
    iteration_bound_quasar,
    iteration_bound_strong,
    tail_ratios,
    theoretical_rate,
)
from quasarppa.core import QuasarCertificate
from quasarppa.experiments import ExperimentPlan, generate_instances, run_plan
from quasarppa.functions import (
    HomogeneousParams,
    RandomFamilyParams,
    ces_objective,
    ces_sphere_min,
    example_certificate,
    gallery,
    lp_objective,
    make_example,
    q_alpha_kappa,
    q_infimum,
    sqrt_abs_objective,
    strong_modulus,
    theta_alpha,
    theta_infimum,
)
from quasarppa.ppa import PpaConfig, run_ppa
from quasarppa.prox import ProxConfig, oracle_search_box, prox, prox_oracle_grid, subproblem_value

RESULTS = []


def _record(number, ok, detail, elapsed, limit):
    ok = bool(ok) and elapsed < limit
    RESULTS.append(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}  [{elapsed:.1f} s, limit {limit:g} s]")
    return ok


def test_criterion_01_set_valued_prox():
    t = time.perf_counter()
    f = sqrt_abs_objective()
    res = prox(f, [1.5], ProxConfig(beta=1.0))
    elapsed = time.perf_counter() - t
    pts = sorted(float(p[0]) for p in res.points)
    vals = [m.objective_value for m in res.minimizers]
    ok = (len(pts) == 2 and abs(pts[0]) <= 1e-6 and abs(pts[1] - 1.0) <= 1e-6
          and all(abs(v - 1.125) <= 1e-9 for v in vals))
    assert _record(1, ok, f"minimizers={pts} values={vals}", elapsed, 1.0)


def _random_z(f, rng):
    z = rng.uniform(-2.0, 2.0, f.dim)
    if f.box is not None:
        z = np.clip(np.abs(z) if np.all(f.box.lower >= 0) else z, f.box.lower, f.box.upper)
    return z


def test_criterion_02_fixed_points_and_descent():
    t = time.perf_counter()
    rng = np.random.default_rng(2)
    cfg = ProxConfig(beta=0.05)
    failures = []
    for name, entry in gallery().items():
        f, xbar = entry.objective, entry.xbar
        res = prox(f, xbar, cfg)
        if not any(np.linalg.norm(p - xbar) <= 1e-7 for p in res.points):
            failures.append(f"{name}: xbar not in prox(xbar)")
        for _ in range(100):
            z = _random_z(f, rng)
            if f(z) <= f(xbar):
                continue
            p = prox(f, z, cfg).best.point
            if not f(p) < f(z):
                failures.append(f"{name}: no decrease at z={z.tolist()}")
                break
    elapsed = time.perf_counter() - t
    assert _record(2, not failures, f"{len(gallery())} functions, failures={failures}", elapsed, 10.0)


def test_criterion_03_linear_rate():
    t = time.perf_counter()
    plan = ExperimentPlan("example1", (5,), 20, master_seed=3)
    bound = theoretical_rate(1.0, 2.0, 0.05) + 1e-6
    ratios = []
    for params, x0 in generate_instances(plan, 5):
        tr = run_ppa(make_example(params), x0, PpaConfig(beta_schedule=0.05), xbar=np.zeros(2))
        ratios.append(tail_ratios(tr, np.zeros(2)))
    elapsed = time.perf_counter() - t
    r = np.concatenate(ratios)
    frac = float(np.mean(r <= bound))
    assert _record(3, frac >= 0.95, f"{frac:.4f} of {r.size} tail ratios <= {bound:.6f}", elapsed, 60.0)


def test_criterion_04_sublinear_bound():
    t = time.perf_counter()
    plan = ExperimentPlan("example2", (5,), 20, master_seed=4)
    violations = 0
    checked = 0
    for params, x0 in generate_instances(plan, 5):
        f = make_example(params)
        tr = run_ppa(f, x0, PpaConfig(beta_schedule=0.05), xbar=np.zeros(2))
        v = np.asarray(tr.values[1:])
        N = np.arange(1, v.size + 1)
        bound = float(x0 @ x0) / (2.0 * 0.05 * N)
        violations += int(np.sum(v > bound))
        checked += v.size
    elapsed = time.perf_counter() - t
    assert _record(4, violations == 0, f"{violations} violations over {checked} iterates", elapsed, 60.0)


def _table_cells(report):
    return [(c.N, c.summary["ppa"], c.summary["ssn"]) for c in report.cells]


@pytest.mark.slow
def test_criterion_05_table_example1():
    t = time.perf_counter()
    report = run_plan(ExperimentPlan("example1", (2, 5, 10, 20), 50, master_seed=5))
    elapsed = time.perf_counter() - t
    paper_ssn = {2: 19, 5: 25, 10: 31, 20: 35}
    lines, ok = [], True
    for N, ppa, ssn in _table_cells(report):
        ppa_ok = ppa.success_count == 50 and ppa.median_final_value <= 1e-8
        med = ssn.median_final_value
        ssn_ok = (abs(ssn.success_count - paper_ssn[N]) <= 10
                  and math.isfinite(med) and med > 0 and abs(math.log10(med) + 6.0) <= 1.0)
        ok &= ppa_ok and ssn_ok
        lines.append(f"N={N}: PPA {ppa.success_count}/{ppa.median_final_value:.2e} "
                     f"SSN {ssn.success_count}/{med:.2e}")
    assert _record(5, ok, "; ".join(lines), elapsed, 15 * 60.0)


@pytest.mark.slow
def test_criterion_06_table_example2():
    t = time.perf_counter()
    report = run_plan(ExperimentPlan("example2", (2, 5, 10, 20), 50, master_seed=6))
    elapsed = time.perf_counter() - t
    lines, ok = [], True
    for N, ppa, ssn in _table_cells(report):
        ppa_ok = ppa.success_count >= 49 and 1e-7 <= ppa.median_final_value <= 1e-4
        ssn_ok = ssn.success_count <= 15 and math.isnan(ssn.median_final_value)
        ok &= ppa_ok and ssn_ok
        lines.append(f"N={N}: PPA {ppa.success_count}/{ppa.median_final_value:.2e} "
                     f"SSN {ssn.success_count}/{ssn.median_final_value:.2e}")
    assert _record(6, ok, "; ".join(lines), elapsed, 20 * 60.0)


def _regime_pairs(rng, n):
    pairs = []
    for i in range(n):
        regime = i % 3
        if regime == 0:
            alpha = rng.uniform(0.05, 1.0)
            kappa = alpha * rng.uniform(0.01, 0.99)
        elif regime == 1:
            alpha = rng.uniform(1.0, 2.0)
            kappa = rng.uniform(0.01, 1.0)
        else:
            alpha = 2.0 if i % 2 else rng.uniform(2.0, 6.0)
            kappa = rng.uniform(0.01, 1.0)
        pairs.append((alpha, kappa))
    return pairs


def test_criterion_07_theta_q_infima():
    t = time.perf_counter()
    rng = np.random.default_rng(7)
    lam = np.logspace(-10.0, 0.0, 10_000)
    worst = 0.0
    for alpha, kappa in _regime_pairs(rng, 100):
        th = min(theta_alpha(l, alpha) for l in lam)
        q = min(q_alpha_kappa(l, alpha, kappa) for l in lam)
        worst = max(worst, abs(th - theta_infimum(alpha)), abs(q - q_infimum(alpha, kappa)))
    elapsed = time.perf_counter() - t
    assert _record(7, worst <= 1e-6, f"worst |grid min - closed form| = {worst:.2e} over {lam.size} points",
                   elapsed, 5.0)


def test_criterion_08_certification_suite():
    t = time.perf_counter()
    z2 = np.zeros(2)
    n = 100_000
    parts = {}

    lp = lp_objective(0.5, 2)
    lp_cert = QuasarCertificate(0.4, 0.0, z2)
    parts["lp k=0.4"] = check_quasar_inequality(lp, lp_cert, ball_sampler(z2, 1.0), n, seed=1).n_violations

    ces = ces_objective([4.0, 9.0], 1.0)
    gamma_c = strong_modulus(HomogeneousParams(1.0, 1.0, 1.0, ces_sphere_min([4.0, 9.0], 1.0)), 0.5)
    ces_cert = QuasarCertificate(0.5, gamma_c, z2)
    parts["ces"] = check_quasar_inequality(ces, ces_cert, ball_sampler(z2, 1.0, ces.box), n, seed=2).n_violations

    params = RandomFamilyParams.draw("example1", 5, 8)
    ex1 = make_example(params)
    cert = example_certificate(params)
    s = ball_sampler(z2, 2.0)
    parts["ex1 def"] = check_quasar_inequality(ex1, cert, s, n, seed=3).n_violations
    parts["ex1 growth"] = check_quadratic_growth(ex1, cert, s, n, seed=4).n_violations
    parts["ex1 diff"] = check_diff_characterization(ex1, cert, s, n, seed=5).n_violations

    witness = check_quasar_inequality(lp, QuasarCertificate(0.9, 0.0, z2), ball_sampler(z2, 1.0), n, seed=6)
    elapsed = time.perf_counter() - t
    ok = all(v == 0 for v in parts.values()) and witness.witness is not None
    assert _record(8, ok, f"violations={parts} lp k=0.9 witness found={witness.witness is not None}",
                   elapsed, 120.0)


def test_criterion_09_oracle_equivalence():
    t = time.perf_counter()
    rng = np.random.default_rng(9)
    worst = 0.0
    for i in range(50):
        example = ("example1", "example2")[i % 2]
        N = int(rng.choice([2, 5, 10, 20]))
        params = RandomFamilyParams.draw(example, N, int(rng.integers(2**32)))
        f = make_example(params)
        z = rng.uniform(-2.0, 2.0, 2)
        beta = float(10 ** rng.uniform(-2, 0))
        res = prox(f, z, ProxConfig(beta=beta))
        pts = prox_oracle_grid(f, z, beta, oracle_search_box(f, z, beta), 400, zoom=2)
        gap = abs(res.best.objective_value - subproblem_value(f, pts[0], z, beta))
        worst = max(worst, gap)
    elapsed = time.perf_counter() - t
    assert _record(9, worst <= 1e-4, f"worst subproblem value gap = {worst:.2e} over 50 triples", elapsed, 300.0)


def test_criterion_10_bound_calculators():
    t = time.perf_counter()
    strong = iteration_bound_strong(1e-3, 1.0, 2.0, 1.0, 1.0)
    quasar = iteration_bound_quasar(1e-2, "value", beta_lower=0.05, kappa=1.0, dist0_or_gap0=1.0)
    # re-derivation: smallest k with (1 + 2 + 2)^(-k/2) <= 1e-3, and smallest N with 1/(2*0.05*N) <= 1e-2
    k = 0
    while 5.0 ** (-k / 2) > 1e-3:
        k += 1
    m = 1
    while 1.0 / (2 * 0.05 * m) > 1e-2 * (1 + 1e-12):
        m += 1
    elapsed = time.perf_counter() - t
    ok = strong == 9 == k and quasar == 1000 == m
    assert _record(10, ok, f"strong={strong} (rederived {k}), quasar={quasar} (rederived {m})", elapsed, 1.0)
