import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasarppa.core import BoxConstraint, ObjectiveSpec, ParameterError
from quasarppa.functions import (
    RandomFamilyParams,
    euclid_objective,
    gallery,
    make_example,
    quadratic_objective,
    sqrt_abs_objective,
)
from quasarppa.prox import (
    ProxConfig,
    oracle_search_box,
    prox,
    prox_oracle_grid,
    prox_residual,
    ssn_subsolve,
    subproblem_value,
)


def test_config_validation():
    with pytest.raises(ParameterError):
        ProxConfig(beta=0.0)
    with pytest.raises(ParameterError):
        ProxConfig(n_starts=0)
    with pytest.raises(ParameterError):
        ProxConfig(armijo_c=1.0)
    with pytest.raises(ParameterError):
        ProxConfig(polar_radii=1)
    assert ProxConfig().with_beta(2.0).beta == 2.0


def test_residual_definition():
    f = quadratic_objective(2)
    r = prox_residual(f, [1.0, 0.0], [0.0, 0.0], 0.5)
    np.testing.assert_allclose(r, [2.0 + 2.0, 0.0])
    with pytest.raises(ParameterError):
        prox_residual(f, [1.0, 0.0], [0.0, 0.0], -1.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.01, 3.0))
def test_quadratic_prox_closed_form(z1, z2, beta):
    # [DERIVED] argmin ||x||^2 + ||x-z||^2/(2b) = z / (1 + 2b)
    f = quadratic_objective(2)
    z = np.array([z1, z2])
    res = prox(f, z, ProxConfig(beta=beta))
    assert res.converged and len(res.minimizers) == 1
    np.testing.assert_allclose(res.best.point, z / (1 + 2 * beta), atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.05, 2.0))
def test_norm_prox_is_block_soft_threshold(z1, z2, beta):
    # [DERIVED] prox of ||.|| is z * max(0, 1 - b/||z||)
    f = euclid_objective(1.0, 2)
    z = np.array([z1, z2])
    nz = np.linalg.norm(z)
    expected = z * max(0.0, 1.0 - beta / nz) if nz > 0 else z
    res = prox(f, z, ProxConfig(beta=beta))
    assert res.converged
    np.testing.assert_allclose(res.best.point, expected, atol=1e-8)


def test_box_constrained_prox():
    f = quadratic_objective(1, box=BoxConstraint.interval(1.0, 2.0))
    res = prox(f, [0.0], ProxConfig(beta=1.0))
    assert res.converged
    np.testing.assert_allclose(res.best.point, [1.0])


def test_sqrt_abs_prox_is_set_valued():
    f = sqrt_abs_objective()
    res = prox(f, [1.5], ProxConfig(beta=1.0))
    assert res.converged
    pts = sorted(float(p[0]) for p in res.points)
    assert len(pts) == 2
    assert pts[0] == pytest.approx(0.0, abs=1e-6) and pts[1] == pytest.approx(1.0, abs=1e-6)
    for m in res.minimizers:
        assert m.objective_value == pytest.approx(1.125, abs=1e-9)


def test_sqrt_abs_interior_stationary_point():
    # [DERIVED] 1/(2 sqrt x) + x - 1.5 = 0 has the root x = 1 - sqrt(3)/2 (a local max)
    f = sqrt_abs_objective()
    res = ssn_subsolve(f, [1.5], [0.01], ProxConfig(beta=1.0))
    assert res.converged
    assert res.x[0] == pytest.approx(1 - math.sqrt(3) / 2, abs=1e-8)
    assert subproblem_value(f, res.x, [1.5], 1.0) > 1.125


def test_subsolve_detects_kink():
    f = euclid_objective(1.0, 2)
    res = ssn_subsolve(f, [0.01, 0.0], [0.005, 0.0], ProxConfig(beta=1.0))
    assert not res.converged
    assert res.status in ("kink", "stalled", "max_iter")


@pytest.mark.parametrize("name", ["lp", "ces", "leontief", "euclid_half", "euclid_2", "example1", "example2"])
def test_fixed_point_at_minimizer(name):
    entry = gallery()[name]
    res = prox(entry.objective, entry.xbar, ProxConfig(beta=0.5))
    assert res.converged
    assert any(np.linalg.norm(p - entry.xbar) <= 1e-7 for p in res.points)


def test_prox_decreases_objective(ex1_instance, rng):
    _, f = ex1_instance
    for _ in range(10):
        z = rng.uniform(-2, 2, 2)
        res = prox(f, z, ProxConfig(beta=0.05))
        assert res.converged
        assert f(res.best.point) < f(z)


def test_prox_matches_oracle_on_example(ex2_instance, rng):
    _, f = ex2_instance
    for _ in range(5):
        z = rng.uniform(-2, 2, 2)
        beta = 0.05
        res = prox(f, z, ProxConfig(beta=beta))
        box = oracle_search_box(f, z, beta)
        pts = prox_oracle_grid(f, z, beta, box, 400, zoom=2)
        ov = subproblem_value(f, pts[0], z, beta)
        assert res.best.objective_value <= ov + 1e-4


def test_polar_seeds_find_minimizer_close_to_origin():
    # the global minimizer sits at radius ~0.17 where the angular oscillation
    # is finer than the Cartesian seed grid
    f = make_example(RandomFamilyParams.draw("example2", 20, 1201505159))
    z = np.array([1.130363661312526, 1.9509629875783068])
    beta = 0.9385925410235222
    res = prox(f, z, ProxConfig(beta=beta))
    pts = prox_oracle_grid(f, z, beta, oracle_search_box(f, z, beta), 400, zoom=2)
    assert res.best.objective_value <= subproblem_value(f, pts[0], z, beta) + 1e-6
    assert 0.1 < np.linalg.norm(res.best.point) < 0.25


def test_oracle_on_set_valued_example():
    f = sqrt_abs_objective()
    pts = prox_oracle_grid(f, [1.5], 1.0, f.box, 4000, zoom=2)
    xs = sorted(float(p[0]) for p in pts[:2])
    assert xs[0] == pytest.approx(0.0, abs=1e-3) and xs[1] == pytest.approx(1.0, abs=1e-3)


def test_oracle_validation():
    f = quadratic_objective(3)
    with pytest.raises(ParameterError):
        prox_oracle_grid(f, np.zeros(3), 1.0, BoxConstraint.interval(-1, 1, 3), 10)
    g = quadratic_objective(1)
    with pytest.raises(ParameterError):
        prox_oracle_grid(g, [0.0], 1.0, BoxConstraint(np.array([-np.inf]), np.array([1.0])), 10)
    with pytest.raises(ParameterError):
        oracle_search_box(ObjectiveSpec(1, lambda x: 0.0, lambda x: np.zeros(1)), [0.0], 1.0)


def test_candidates_sorted_and_deterministic(ex1_instance):
    _, f = ex1_instance
    z = np.array([1.3, -0.4])
    a = prox(f, z, ProxConfig(beta=0.05))
    b = prox(f, z, ProxConfig(beta=0.05))
    assert np.array_equal(a.best.point, b.best.point)
    vals = [c.objective_value for c in a.candidates]
    assert vals == sorted(vals)


def test_lp_prox_lands_on_coordinate_face():
    # [DERIVED] with x2 pinned at 0 the subproblem is |x1| + (x1 - z1)^2 / (2b): x1 = z1 + b for z1 < -b
    f = gallery()["lp"].objective
    z = np.array([-0.6161573377130676, 0.044263894278308236])
    res = prox(f, z, ProxConfig(beta=0.05))
    assert res.converged and res.best.source == "face"
    np.testing.assert_allclose(res.best.point, [z[0] + 0.05, 0.0], atol=1e-12)
    box = oracle_search_box(f, z, 0.05)
    pts = prox_oracle_grid(f, z, 0.05, box, 400, zoom=2)
    assert res.best.objective_value <= subproblem_value(f, pts[0], z, 0.05) + 1e-12
