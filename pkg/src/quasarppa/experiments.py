"""Seeded PPA-versus-SSN benchmarks on the random product families."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import ParameterError
from .functions import EXAMPLES, RandomFamilyParams, make_example
from .ppa import PpaConfig, SolverTrace, run_ppa
from .ssn import SsnConfig, run_ssn

REPORT_SCHEMA_VERSION = 1
DEFAULT_THRESHOLDS = {"example1": 1e-6, "example2": 1e-3}
SOLVERS = ("ppa", "ssn")


def instance_seed(master_seed: int, example: str, N: int, index: int) -> int:
    """Per-instance 64-bit seed; distinct (example, N, index) get independent streams."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(EXAMPLES.index(example), int(N), int(index)))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class ExperimentPlan:
    example: str = "example1"
    N_values: Sequence[int] = (2, 5, 10, 20)
    instances_per_cell: int = 50
    master_seed: int = 0
    success_threshold: Optional[float] = None
    ppa_cfg: PpaConfig = field(default_factory=PpaConfig)
    ssn_cfg: SsnConfig = field(default_factory=SsnConfig)
    q1: float = 1.0
    q2: float = 2.0
    q: float = 2.0
    k: int = 2
    coords: str = "normalized"
    workers: int = 1

    def __post_init__(self):
        if self.example not in EXAMPLES:
            raise ParameterError(f"example must be one of {EXAMPLES}")
        if int(self.instances_per_cell) < 1:
            raise ParameterError("instances_per_cell must be at least 1")
        if not self.N_values or any(int(n) < 1 for n in self.N_values):
            raise ParameterError("N_values must be positive integers")
        object.__setattr__(self, "N_values", tuple(int(n) for n in self.N_values))
        if self.success_threshold is None:
            object.__setattr__(self, "success_threshold", DEFAULT_THRESHOLDS[self.example])
        if not self.success_threshold > 0:
            raise ParameterError("success_threshold must be positive")
        if int(self.workers) < 1:
            raise ParameterError("workers must be at least 1")

    def describe(self) -> dict:
        return {
            "example": self.example, "N_values": list(self.N_values),
            "instances_per_cell": self.instances_per_cell, "master_seed": self.master_seed,
            "success_threshold": self.success_threshold, "q1": self.q1, "q2": self.q2,
            "q": self.q, "k": self.k, "coords": self.coords,
            "ppa": {k: v for k, v in asdict(self.ppa_cfg).items() if k != "beta_schedule"}
                   | {"beta_schedule": _jsonable(self.ppa_cfg.beta_schedule)},
            "ssn": asdict(self.ssn_cfg),
        }


def _jsonable(v):
    if callable(v):
        return getattr(v, "__name__", "callable")
    return v if np.isscalar(v) else list(v)


def generate_instances(plan: ExperimentPlan, N: int) -> list:
    """``(params, x0)`` for every instance of one cell."""
    out = []
    for i in range(plan.instances_per_cell):
        seed = instance_seed(plan.master_seed, plan.example, N, i)
        p = RandomFamilyParams.draw(plan.example, N, seed, q1=plan.q1, q2=plan.q2, q=plan.q,
                                    k=plan.k, coords=plan.coords)
        out.append((p, p.start_point()))
    return out


@dataclass
class RunRecord:
    final_value: float
    converged: bool
    terminated_by: str
    n_iter: int
    wall_time: float


@dataclass
class InstanceRecord:
    index: int
    seed: int
    x0: list
    runs: dict


@dataclass
class CellSummary:
    success_count: int
    median_final_value: float
    n_runs: int


@dataclass
class CellReport:
    example: str
    N: int
    records: list
    summary: dict


@dataclass
class BatchReport:
    plan: dict
    cells: list
    wall_time: float = 0.0

    def to_json(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "plan": self.plan,
            "wall_time": self.wall_time,
            "cells": [{
                "example": c.example, "N": c.N,
                "summary": {s: asdict(v) for s, v in c.summary.items()},
                "records": [asdict(r) for r in c.records],
            } for c in self.cells],
        }


def _record(trace: SolverTrace, dt: float) -> RunRecord:
    return RunRecord(trace.final_value, trace.converged, trace.terminated_by, trace.n_iter, dt)


def solve_instance(params: RandomFamilyParams, x0, ppa_cfg: PpaConfig, ssn_cfg: SsnConfig,
                   solvers: Sequence[str] = SOLVERS) -> dict:
    """Traces of each requested solver from the shared start ``x0``."""
    f = make_example(params)
    out = {}
    xbar = np.zeros(2)
    for s in solvers:
        t = time.perf_counter()
        tr = run_ppa(f, x0, ppa_cfg, xbar) if s == "ppa" else run_ssn(f, x0, ssn_cfg, xbar)
        tr.meta["wall_time"] = time.perf_counter() - t
        out[s] = tr
    return out


def _run_one(args):
    index, params, x0, ppa_cfg, ssn_cfg = args
    try:
        traces = solve_instance(params, x0, ppa_cfg, ssn_cfg)
        runs = {s: _record(tr, tr.meta["wall_time"]) for s, tr in traces.items()}
    except Exception as exc:  # a failed run is recorded, never aborts the cell
        runs = {s: RunRecord(math.nan, False, f"error: {exc!r}", 0, 0.0) for s in SOLVERS}
    return InstanceRecord(index, int(params.seed), list(map(float, x0)), runs)


def summarize(records: Sequence[InstanceRecord], solver: str, threshold: float) -> CellSummary:
    """Success count (final value below ``threshold``) and median final value.

    The median is taken over the finite final values; it is NaN when more
    than half of the runs did not converge.
    """
    vals = np.array([r.runs[solver].final_value for r in records], dtype=float)
    conv = np.array([r.runs[solver].converged for r in records], dtype=bool)
    n = len(records)
    success = int(np.sum(np.isfinite(vals) & (vals < threshold)))
    finite = vals[np.isfinite(vals)]
    if n == 0 or (n - conv.sum()) > n / 2 or finite.size == 0:
        med = math.nan
    else:
        med = float(np.median(finite))
    return CellSummary(success, med, n)


def run_cell(plan: ExperimentPlan, N: int) -> CellReport:
    jobs = [(i, p, x0, plan.ppa_cfg, plan.ssn_cfg) for i, (p, x0) in enumerate(generate_instances(plan, N))]
    if plan.workers > 1:
        with ProcessPoolExecutor(max_workers=plan.workers) as ex:
            records = list(ex.map(_run_one, jobs))
    else:
        records = [_run_one(j) for j in jobs]
    summary = {s: summarize(records, s, plan.success_threshold) for s in SOLVERS}
    return CellReport(plan.example, N, records, summary)


def run_plan(plan: ExperimentPlan) -> BatchReport:
    t = time.perf_counter()
    cells = [run_cell(plan, N) for N in plan.N_values]
    return BatchReport(plan.describe(), cells, time.perf_counter() - t)


# ---------------------------------------------------------------------------
# artifacts


def format_cell(summary: CellSummary) -> str:
    med = "NaN" if math.isnan(summary.median_final_value) else f"{summary.median_final_value:.2e}"
    return f"{summary.success_count} / {med}"


def emit_tables(report: BatchReport, fmt: str = "text") -> str:
    """Table with one row per solver and one ``count / median`` column per N.

    Wall times are left out so the artifact is byte-identical across reruns.
    """
    Ns = [c.N for c in report.cells]
    header = ["solver"] + [f"N={n}" for n in Ns]
    rows = [[s.upper()] + [format_cell(c.summary[s]) for c in report.cells] for s in SOLVERS] if Ns else []
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(f"# schema_version={REPORT_SCHEMA_VERSION}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    if fmt != "text":
        raise ParameterError("fmt must be 'text' or 'csv'")
    example = report.plan.get("example", "")
    width = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines = [f"# schema_version={REPORT_SCHEMA_VERSION} example={example} "
             f"threshold={report.plan.get('success_threshold')}"]
    for r in [header] + rows:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, width)).rstrip())
    return "\n".join(lines) + "\n"


def emit_traces(plan: ExperimentPlan, N: int, indices: Sequence[int], outdir) -> list:
    """Write ``{example}_N{N}_i{index}_{solver}.csv`` trace files; returns their paths."""
    os.makedirs(outdir, exist_ok=True)
    instances = generate_instances(plan, N)
    paths = []
    for i in indices:
        params, x0 = instances[i]
        for s, tr in solve_instance(params, x0, plan.ppa_cfg, plan.ssn_cfg).items():
            path = os.path.join(outdir, f"{plan.example}_N{N}_i{i}_{s}.csv")
            tr.write_csv(path)
            paths.append(path)
    return paths


def dump_report(report: BatchReport) -> str:
    return json.dumps(report.to_json(), indent=1, default=float)
