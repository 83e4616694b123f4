import json
import math

import numpy as np
import pytest

from quasarppa.checker import (
    ViolationReport,
    ball_sampler,
    check_diff_characterization,
    check_quadratic_growth,
    check_quasar_inequality,
    check_supercoercive,
    check_trace_linear,
    check_trace_sublinear,
    iteration_bound_quasar,
    iteration_bound_strong,
    iteration_bound_strong_value,
    largest_valid_kappa,
    near_kink_sampler,
    sphere_sampler,
    tail_ratios,
    theoretical_rate,
)
from quasarppa.core import BoxConstraint, ObjectiveSpec, ParameterError, QuasarCertificate
from quasarppa.functions import (
    euclid_objective,
    example_certificate,
    lp_objective,
    quadratic_objective,
)
from quasarppa.ppa import PpaConfig, SolverTrace, run_ppa

Z2 = np.zeros(2)


def test_quadratic_certificate_holds():
    # ||x||^2 is strongly convex with modulus 2
    f = quadratic_objective(2)
    cert = QuasarCertificate(1.0, 2.0, Z2)
    s = ball_sampler(Z2, 2.0)
    assert check_quasar_inequality(f, cert, s, 5000).passed
    assert check_quadratic_growth(f, cert, s, 5000).passed
    assert check_diff_characterization(f, cert, s, 5000).passed


def test_inflated_modulus_is_witnessed():
    f = quadratic_objective(2)
    cert = QuasarCertificate(1.0, 5.0, Z2)
    rep = check_quadratic_growth(f, cert, ball_sampler(Z2, 1.0), 2000)
    assert not rep.passed
    assert rep.witness is not None and rep.worst_margin < 0


def test_ex1_certificate_and_inflated_gamma(ex1_instance):
    p, f = ex1_instance
    cert = example_certificate(p)
    s = ball_sampler(Z2, 3.0)
    assert check_quasar_inequality(f, cert, s, 20_000).passed
    assert check_quadratic_growth(f, cert, s, 20_000).passed
    assert check_diff_characterization(f, cert, s, 20_000).passed
    bad = QuasarCertificate(1.0, 20.0, Z2)
    assert not check_quadratic_growth(f, bad, s, 20_000).passed


def test_lp_quasar_with_small_kappa():
    f = lp_objective(0.5, 2)
    cert = QuasarCertificate(0.4, 0.0, Z2)
    assert check_quasar_inequality(f, cert, ball_sampler(Z2, 1.0), 20_000).passed


def test_nonquasar_function_has_witness():
    # a radial bump between the minimizer and the samples breaks the inequality
    def h(x):
        r = float(np.linalg.norm(x))
        return r**2 + 3.0 * math.exp(-((r - 1.0) ** 2) / 0.01)

    f = ObjectiveSpec(2, h, lambda x: np.zeros(2), min_value=None)
    cert = QuasarCertificate(1.0, 0.0, Z2)
    rep = check_quasar_inequality(f, cert, sphere_sampler(Z2, [1.5, 2.0]), 5000)
    assert not rep.passed


def test_report_merge_and_json():
    a = ViolationReport("x", 10, 0, 0.5)
    b = ViolationReport("x", 5, 2, -1.0, {"point": np.array([1.0, 2.0])})
    m = a.merge(b)
    assert (m.n_samples, m.n_violations, m.worst_margin) == (15, 2, -1.0)
    assert m.witness is b.witness and not m.passed
    json.dumps(m.to_json())
    with pytest.raises(ParameterError):
        a.merge(ViolationReport("y", 1, 0, 0.0))


def test_samplers_respect_boxes(rng):
    box = BoxConstraint.nonnegative(2)
    X, lam = ball_sampler(Z2, 1.0, box)(rng, 500)
    assert X.shape == (500, 2) and np.all(X >= 0) and np.all(np.linalg.norm(X, axis=1) <= 1 + 1e-12)
    assert np.all((lam > 0) & (lam <= 1))
    Y, _ = sphere_sampler(Z2, [1.0, 2.0])(rng, 100)
    np.testing.assert_allclose(sorted(set(np.round(np.linalg.norm(Y, axis=1), 12))), [1.0, 2.0])
    K, _ = near_kink_sampler(euclid_objective(1.0, 2))(rng, 100)
    assert np.max(np.abs(K)) < 0.1


def test_supercoercive():
    assert check_supercoercive(quadratic_objective(2, 3.0), [1.0, 10.0]) == pytest.approx(3.0)
    assert check_supercoercive(euclid_objective(1.0, 2), [1.0, 100.0]) == pytest.approx(0.01)
    with pytest.raises(ParameterError):
        check_supercoercive(quadratic_objective(2), [2.0, 1.0])


def test_largest_valid_kappa_for_norm():
    # ||x|| is convex, so every kappa in (0, 1] passes
    f = euclid_objective(1.0, 2)
    assert largest_valid_kappa(f, Z2, 0.0, ball_sampler(Z2, 1.0), 2000) == 1.0


# ---------------------------------------------------------------------------
# bounds


def test_rate_value():
    # [DERIVED] 1 / sqrt(1 + 0.1 + 0.1)
    assert theoretical_rate(1.0, 2.0, 0.05) == pytest.approx(1 / math.sqrt(1.2), abs=1e-15)
    assert theoretical_rate(1.0, 2.0, 1.0) == pytest.approx(1 / math.sqrt(5.0))
    with pytest.raises(ParameterError):
        theoretical_rate(1.0, 0.0, 0.05)


def test_iteration_bound_strong():
    # [DERIVED] ln(1e3) / ln(sqrt 5) = 8.58 -> 9
    assert iteration_bound_strong(1e-3, 1.0, 2.0, 1.0, 1.0) == 9
    assert iteration_bound_strong(1e-3, 1.0, 2.0, 1.0, 1e-4) == 0
    with pytest.raises(ParameterError):
        iteration_bound_strong(0.0, 1.0, 2.0, 1.0, 1.0)


def test_iteration_bound_strong_value_readings():
    # [DERIVED] squared: ln(1e3 * 4 / 2) / ln(sqrt 5) + 1 = 10.44 -> 11; unsquared: ln(1e3) / ln(sqrt 5) + 1 = 9.58 -> 10
    assert iteration_bound_strong_value(1e-3, 1.0, 2.0, 1.0, 2.0) == 11
    assert iteration_bound_strong_value(1e-3, 1.0, 2.0, 1.0, 2.0, squared=False) == 10


def test_iteration_bound_quasar():
    assert iteration_bound_quasar(1e-2, "value", beta_lower=0.05, kappa=1.0, dist0_or_gap0=1.0) == 1000
    assert iteration_bound_quasar(1e-1, "step", beta_upper=0.5, dist0_or_gap0=2.0) == 200
    with pytest.raises(ParameterError):
        iteration_bound_quasar(1e-2, "value")
    with pytest.raises(ParameterError):
        iteration_bound_quasar(1e-2, "other", beta_lower=1.0)


# ---------------------------------------------------------------------------
# trace checks


def test_trace_linear_on_quadratic():
    f = quadratic_objective(2)
    tr = run_ppa(f, [1.0, 1.0], PpaConfig(max_outer_iter=50), xbar=Z2)
    cert = QuasarCertificate(1.0, 2.0, Z2)
    assert check_trace_linear(tr, cert, 0.05).passed
    r = tail_ratios(tr, Z2)
    assert np.all(r <= theoretical_rate(1.0, 2.0, 0.05) + 1e-6)


def test_trace_linear_detects_slow_sequence():
    its = [np.array([0.99**k, 0.0]) for k in range(20)]
    tr = SolverTrace(its, [float(x @ x) for x in its])
    rep = check_trace_linear(tr, QuasarCertificate(1.0, 2.0, Z2), 0.05, ref_value=0.0)
    assert not rep.passed


def test_trace_sublinear_on_norm():
    f = euclid_objective(1.0, 2)
    tr = run_ppa(f, [1.0, 2.0], PpaConfig(max_outer_iter=100), xbar=Z2)
    assert check_trace_sublinear(tr, QuasarCertificate(1.0, 0.0, Z2), 0.05).passed


def test_trace_checks_need_reference_value():
    its = [np.ones(2), np.zeros(2)]
    tr = SolverTrace(its, [2.0, 0.0])
    with pytest.raises(ParameterError):
        check_trace_sublinear(tr, QuasarCertificate(1.0, 0.0, Z2), 0.05)
