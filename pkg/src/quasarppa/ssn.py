"""Semismooth Newton applied directly to the first-order condition ``0 in dh(x)``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ObjectiveSpec, ParameterError, as_vector
from .ppa import SolverTrace


@dataclass(frozen=True)
class SsnConfig:
    tol: float = 1e-9
    max_iter: int = 30_000
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    max_backtracks: int = 60
    divergence_guard: float = 1e8

    def __post_init__(self):
        if not self.tol > 0:
            raise ParameterError("tol must be positive")
        if int(self.max_iter) < 1 or int(self.max_backtracks) < 1:
            raise ParameterError("iteration counts must be positive integers")
        if not (0 < self.armijo_c < 1 and 0 < self.backtrack_factor < 1):
            raise ParameterError("armijo_c and backtrack_factor must lie in (0, 1)")
        if not self.divergence_guard > 0:
            raise ParameterError("divergence_guard must be positive")


def _search(f, x, G, nG2, d, slope, cfg):
    """Armijo backtracking on ``||G||^2 / 2`` along ``d`` with directional slope ``slope``."""
    t = 1.0
    for _ in range(cfg.max_backtracks):
        xn = x + t * d
        Gn = f.grad(xn)
        nGn2 = float(Gn @ Gn)
        # compare the difference so rounding cannot absorb a vanishing decrease
        if np.isfinite(nGn2) and 0.5 * (nGn2 - nG2) <= cfg.armijo_c * t * slope:
            return xn, Gn, nGn2
        t *= cfg.backtrack_factor
    return None


def run_ssn(f: ObjectiveSpec, x0, cfg: SsnConfig = SsnConfig(), xbar=None) -> SolverTrace:
    """Damped Newton iteration ``x <- x - t V^{-1} G(x)`` on a Clarke element ``G``.

    Terminates with ``grad_tol`` when ``||G(x)|| <= tol``, ``max_iter`` at the
    cap, ``diverged`` once ``||x||`` exceeds the guard, or ``stalled`` when
    neither the Newton direction nor the fallback ``-V^T G`` admits an Armijo
    step.
    """
    x = as_vector(x0, f.dim)
    ref = None if xbar is None else as_vector(xbar, f.dim)
    trace = SolverTrace([x], [f(x)], solver="ssn",
                        distances_to_ref=None if ref is None else [float(np.linalg.norm(x - ref))])
    if ref is not None:
        trace.meta["ref_value"] = f(ref)
    G = f.grad(x)
    nG2 = float(G @ G)
    trace.terminated_by = "max_iter"
    for _ in range(int(cfg.max_iter)):
        if math.sqrt(nG2) <= cfg.tol:
            trace.terminated_by = "grad_tol"
            break
        V = f.jac(x)
        step = None
        try:
            d = -np.linalg.solve(V, G)
            if np.all(np.isfinite(d)):
                step = _search(f, x, G, nG2, d, -nG2, cfg)
        except np.linalg.LinAlgError:
            pass
        if step is None:
            d = -V.T @ G
            if not np.any(d):
                d = -G
            step = _search(f, x, G, nG2, d, min(float(G @ (V @ d)), -1e-300), cfg)
        if step is None:
            trace.terminated_by = "stalled"
            break
        xn, G, nG2 = step
        trace.step_norms.append(float(np.linalg.norm(xn - x)))
        trace.inner_iterations.append(0)
        x = xn
        trace.iterates.append(x)
        trace.values.append(f(x))
        if ref is not None:
            trace.distances_to_ref.append(float(np.linalg.norm(x - ref)))
        if np.linalg.norm(x) > cfg.divergence_guard or not np.isfinite(nG2):
            trace.terminated_by = "diverged"
            break
    else:
        if math.sqrt(nG2) <= cfg.tol:
            trace.terminated_by = "grad_tol"
    return trace
