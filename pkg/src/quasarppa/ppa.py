"""Proximal point algorithm and the solver trace shared with the Newton baseline."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .core import ObjectiveSpec, ParameterError, as_vector, project_box
from .prox import ProxConfig, ProxResult, prox

TRACE_SCHEMA_VERSION = 1
TRACE_COLUMNS = ("k", "value", "step_norm", "dist_to_ref", "iterate_norm", "inner_iters")
CONVERGED_STATES = ("step_tol", "fixed_point", "grad_tol")


@dataclass
class SolverTrace:
    """Iterates and diagnostics of one PPA or SSN run.

    ``step_norms[k]`` and ``inner_iterations[k]`` describe the move from
    ``iterates[k]`` to ``iterates[k + 1]``; ``values[k] = h(iterates[k])``.
    """

    iterates: list
    values: list
    step_norms: list = field(default_factory=list)
    distances_to_ref: Optional[list] = None
    inner_iterations: list = field(default_factory=list)
    inner_residuals: list = field(default_factory=list)
    terminated_by: str = "max_iter"
    solver: str = "ppa"
    meta: dict = field(default_factory=dict)

    @property
    def n_iter(self) -> int:
        return len(self.iterates) - 1

    @property
    def converged(self) -> bool:
        return self.terminated_by in CONVERGED_STATES

    @property
    def final_point(self) -> np.ndarray:
        return self.iterates[-1]

    @property
    def final_value(self) -> float:
        """Last objective value; NaN for diverged runs."""
        if self.terminated_by == "diverged":
            return math.nan
        return float(self.values[-1])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# schema_version={TRACE_SCHEMA_VERSION} solver={self.solver} "
                  f"terminated_by={self.terminated_by}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for k, (x, v) in enumerate(zip(self.iterates, self.values)):
            step = self.step_norms[k] if k < len(self.step_norms) else ""
            inner = self.inner_iterations[k] if k < len(self.inner_iterations) else ""
            dist = self.distances_to_ref[k] if self.distances_to_ref is not None else ""
            w.writerow([k, _fmt(v), _fmt(step), _fmt(dist), _fmt(float(np.linalg.norm(x))), inner])
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv())


def _fmt(v):
    if v == "" or v is None:
        return ""
    return repr(float(v))


def read_trace_csv(path) -> dict:
    """Load a trace CSV back into column arrays (empty cells become NaN)."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("# schema_version="):
            raise ParameterError("not a trace file")
        rows = list(csv.DictReader(fh))
    return {c: np.array([float(r[c]) if r[c] != "" else math.nan for r in rows])
            for c in TRACE_COLUMNS}


# ---------------------------------------------------------------------------

BetaSchedule = Union[float, Sequence[float], Callable[[int], float]]


def geometric_schedule(beta0: float, ratio: float, beta_max: float) -> Callable[[int], float]:
    """``beta_k = min(beta0 * ratio^k, beta_max)``."""
    if not (beta0 > 0 and ratio > 0 and beta_max >= beta0):
        raise ParameterError("need beta0 > 0, ratio > 0 and beta_max >= beta0")

    def schedule(k: int) -> float:
        return min(beta0 * ratio**k, beta_max)

    return schedule


@dataclass(frozen=True)
class PpaConfig:
    """Outer loop parameters.

    ``beta_schedule`` is a constant, a list (the last entry repeats) or a
    callable ``k -> beta_k``. Every ``beta_k`` must lie in
    ``[beta_lower, beta_upper]``; ``beta_lower`` defaults to the constant or
    to the list minimum.
    """

    beta_schedule: BetaSchedule = 0.05
    beta_lower: Optional[float] = None
    beta_upper: Optional[float] = None
    outer_tol: float = 1e-9
    max_outer_iter: int = 30_000
    prox_cfg: ProxConfig = field(default_factory=ProxConfig)

    def __post_init__(self):
        if not self.outer_tol > 0:
            raise ParameterError("outer_tol must be positive")
        if int(self.max_outer_iter) < 1:
            raise ParameterError("max_outer_iter must be a positive integer")
        sched = self.beta_schedule
        if not callable(sched):
            vals = np.atleast_1d(np.asarray(sched, dtype=float))
            if vals.size == 0 or np.any(~(vals > 0)):
                raise ParameterError("beta values must be positive")
            if self.beta_lower is None:
                object.__setattr__(self, "beta_lower", float(vals.min()))
            self._check_range(vals)
        elif self.beta_lower is None:
            raise ParameterError("a callable schedule needs an explicit beta_lower")
        if not self.beta_lower > 0:
            raise ParameterError("beta_lower must be positive")
        if self.beta_upper is not None and self.beta_upper < self.beta_lower:
            raise ParameterError("beta_upper must be at least beta_lower")

    def _check_range(self, vals):
        lo = self.beta_lower if self.beta_lower is not None else -np.inf
        hi = self.beta_upper if self.beta_upper is not None else np.inf
        if np.any(vals < lo) or np.any(vals > hi):
            raise ParameterError(f"beta values must lie in [{lo}, {hi}]")

    def beta(self, k: int) -> float:
        sched = self.beta_schedule
        if callable(sched):
            b = float(sched(k))
            self._check_range(np.array([b]))
            return b
        vals = np.atleast_1d(np.asarray(sched, dtype=float))
        return float(vals[min(k, vals.size - 1)])


def select_iterate(candidates: ProxResult) -> np.ndarray:
    """Lexicographically smallest point among the tied minimizers."""
    if not candidates.minimizers:
        raise RuntimeError("prox returned no candidates")
    return min(candidates.minimizers, key=lambda m: tuple(m.point)).point.copy()


def run_ppa(f: ObjectiveSpec, x0, cfg: PpaConfig = PpaConfig(), xbar=None) -> SolverTrace:
    """Iterate ``x^{k+1} in Prox_{beta_k h}(x^k)``.

    Stops on an exact fixed point, on ``||x^{k+1} - x^k|| <= outer_tol``, on
    the iteration cap, or (``prox_failure``) when a prox evaluation does not
    converge. ``xbar`` only feeds the ``distances_to_ref`` column.
    """
    x = project_box(as_vector(x0, f.dim), f.box)
    ref = None if xbar is None else as_vector(xbar, f.dim)
    trace = SolverTrace([x], [f(x)], distances_to_ref=None if ref is None else [float(np.linalg.norm(x - ref))])
    trace.meta.update(beta_lower=cfg.beta_lower, outer_tol=cfg.outer_tol)
    if ref is not None:
        trace.meta["ref_value"] = f(ref)
    for k in range(int(cfg.max_outer_iter)):
        res = prox(f, x, cfg.prox_cfg.with_beta(cfg.beta(k)))
        if not res.converged:
            trace.terminated_by = "prox_failure"
            trace.meta["failed_at"] = k
            break
        xn = select_iterate(res)
        if np.array_equal(xn, x):
            trace.terminated_by = "fixed_point"
            break
        step = float(np.linalg.norm(xn - x))
        trace.iterates.append(xn)
        trace.values.append(f(xn))
        trace.step_norms.append(step)
        trace.inner_iterations.append(int(sum(res.inner_iterations)))
        trace.inner_residuals.append(res.best.residual_norm)
        if ref is not None:
            trace.distances_to_ref.append(float(np.linalg.norm(xn - ref)))
        x = xn
        if step <= cfg.outer_tol:
            trace.terminated_by = "step_tol"
            break
    else:
        trace.terminated_by = "max_iter"
    return trace
