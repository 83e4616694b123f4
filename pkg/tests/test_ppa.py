import numpy as np
import pytest

from quasarppa.core import ParameterError
from quasarppa.functions import euclid_objective, quadratic_objective, sqrt_abs_objective
from quasarppa.ppa import (
    TRACE_COLUMNS,
    PpaConfig,
    geometric_schedule,
    read_trace_csv,
    run_ppa,
    select_iterate,
)
from quasarppa.prox import ProxConfig, prox


def test_config_defaults_and_validation():
    cfg = PpaConfig()
    assert cfg.beta(0) == 0.05 and cfg.beta_lower == 0.05
    assert PpaConfig(beta_schedule=[0.1, 0.2]).beta(5) == 0.2
    assert PpaConfig(beta_schedule=[0.1, 0.2]).beta_lower == 0.1
    with pytest.raises(ParameterError):
        PpaConfig(beta_schedule=0.0)
    with pytest.raises(ParameterError):
        PpaConfig(beta_schedule=lambda k: 1.0)
    with pytest.raises(ParameterError):
        PpaConfig(beta_schedule=[0.1, 0.5], beta_upper=0.2)
    with pytest.raises(ParameterError):
        PpaConfig(outer_tol=0.0)


def test_geometric_schedule():
    s = geometric_schedule(0.1, 2.0, 0.5)
    assert [s(k) for k in range(4)] == pytest.approx([0.1, 0.2, 0.4, 0.5])
    cfg = PpaConfig(beta_schedule=s, beta_lower=0.1, beta_upper=0.5)
    assert cfg.beta(10) == 0.5
    with pytest.raises(ParameterError):
        geometric_schedule(0.1, 2.0, 0.05)


def test_quadratic_linear_contraction():
    # [DERIVED] prox of ||x||^2 scales by 1/(1+2b): x_k = x0 / 1.1^k for b = 0.05
    f = quadratic_objective(2)
    x0 = np.array([1.0, -2.0])
    tr = run_ppa(f, x0, PpaConfig(max_outer_iter=5), xbar=np.zeros(2))
    assert tr.terminated_by == "max_iter" and tr.n_iter == 5
    for k, x in enumerate(tr.iterates):
        np.testing.assert_allclose(x, x0 / 1.1**k, rtol=1e-9)
    ratios = np.array(tr.distances_to_ref[1:]) / np.array(tr.distances_to_ref[:-1])
    np.testing.assert_allclose(ratios, 1 / 1.1, rtol=1e-9)


def test_converges_to_minimizer():
    f = euclid_objective(1.0, 2)
    tr = run_ppa(f, [1.0, 1.0], PpaConfig(beta_schedule=0.5))
    assert tr.converged
    np.testing.assert_allclose(tr.final_point, 0.0, atol=1e-9)
    assert np.all(np.diff(tr.values) <= 0)


def test_fixed_point_stop():
    f = quadratic_objective(2)
    tr = run_ppa(f, [0.0, 0.0])
    assert tr.terminated_by == "fixed_point" and tr.n_iter == 0


def test_select_iterate_tie_break():
    f = sqrt_abs_objective()
    res = prox(f, [1.5], ProxConfig(beta=1.0))
    assert select_iterate(res)[0] == pytest.approx(0.0, abs=1e-6)


def test_values_non_increasing_on_example(ex1_instance):
    p, f = ex1_instance
    tr = run_ppa(f, p.start_point(), PpaConfig(max_outer_iter=60), xbar=np.zeros(2))
    assert np.all(np.diff(tr.values) <= 1e-12)
    assert tr.meta["ref_value"] == 0.0


def test_trace_csv_roundtrip(tmp_path):
    f = quadratic_objective(2)
    tr = run_ppa(f, [1.0, 1.0], PpaConfig(max_outer_iter=3), xbar=np.zeros(2))
    path = tmp_path / "t.csv"
    tr.write_csv(path)
    text = path.read_text()
    assert text.startswith("# schema_version=1 solver=ppa terminated_by=max_iter")
    cols = read_trace_csv(path)
    assert set(cols) == set(TRACE_COLUMNS)
    np.testing.assert_array_equal(cols["value"], tr.values)
    assert np.isnan(cols["step_norm"][-1])
    np.testing.assert_array_equal(cols["step_norm"][:-1], tr.step_norms)


def test_diverged_final_value_is_nan():
    f = quadratic_objective(1)
    tr = run_ppa(f, [1.0], PpaConfig(max_outer_iter=1))
    tr.terminated_by = "diverged"
    assert np.isnan(tr.final_value) and not tr.converged
