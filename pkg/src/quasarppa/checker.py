"""Sampled certification of quasar-convexity and of the PPA convergence bounds.

Every check returns a :class:`ViolationReport`. Checks are pure functions of
their inputs and seed; reports merge associatively with :meth:`ViolationReport.merge`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import BoxConstraint, ObjectiveSpec, ParameterError, QuasarCertificate, as_vector

EXACT_RTOL = 1e-9
FD_TOL = 1e-5
LAMBDA_MIN = 1e-8


@dataclass
class ViolationReport:
    """Outcome of one sampled inequality check.

    ``worst_margin`` is the smallest ``rhs - lhs`` seen (negative means the
    inequality failed there before slack); ``witness`` holds the worst
    violating sample and is present exactly when ``n_violations > 0``.
    """

    check: str
    n_samples: int
    n_violations: int
    worst_margin: float
    witness: Optional[dict] = None
    params: dict = field(default_factory=dict)
    n_skipped: int = 0

    @property
    def passed(self) -> bool:
        return self.n_violations == 0

    def merge(self, other: "ViolationReport") -> "ViolationReport":
        if other.check != self.check:
            raise ParameterError("can only merge reports of the same check")
        first, second = (self, other) if self.worst_margin <= other.worst_margin else (other, self)
        witness = first.witness if first.witness is not None else second.witness
        return ViolationReport(self.check, self.n_samples + other.n_samples,
                               self.n_violations + other.n_violations,
                               min(self.worst_margin, other.worst_margin), witness,
                               dict(self.params), self.n_skipped + other.n_skipped)

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            w = {k: (np.asarray(v).tolist() if isinstance(v, np.ndarray) else v)
                 for k, v in self.witness.items()}
        return {"check": self.check, "params": self.params, "n_samples": self.n_samples,
                "n_violations": self.n_violations, "n_skipped": self.n_skipped,
                "worst_margin": self.worst_margin, "witness": w}


def _report(check, margins, slack, points, lams=None, params=None, skipped=0):
    margins = np.asarray(margins, dtype=float)
    n = margins.size
    if n == 0:
        return ViolationReport(check, 0, 0, math.inf, None, params or {}, skipped)
    bad = margins + slack < 0
    worst = int(np.argmin(margins))
    witness = None
    if np.any(bad):
        i = int(np.flatnonzero(bad)[np.argmin(margins[bad])])
        witness = {"x": np.asarray(points[i]), "margin": float(margins[i])}
        if lams is not None:
            witness["lambda"] = float(lams[i])
    return ViolationReport(check, n, int(bad.sum()), float(margins[worst]), witness,
                           params or {}, skipped)


# ---------------------------------------------------------------------------
# samplers: callables (rng, n) -> (points (n, dim), lambdas (n,))


def _log_uniform_lambdas(rng, n, lam_min=LAMBDA_MIN):
    return np.exp(rng.uniform(math.log(lam_min), 0.0, n))


def _in_box(X, box):
    if box is None:
        return np.ones(len(X), dtype=bool)
    return np.all((X >= box.lower) & (X <= box.upper), axis=1)


def ball_sampler(center, radius: float, box: Optional[BoxConstraint] = None,
                 lam_min: float = LAMBDA_MIN) -> Callable:
    """Uniform points in a ball (rejected outside ``box``), log-uniform lambdas."""
    center = as_vector(center)
    dim = center.size

    def sample(rng, n):
        out = []
        need = n
        while need > 0:
            m = 2 * need + 16
            u = rng.standard_normal((m, dim))
            u /= np.linalg.norm(u, axis=1, keepdims=True)
            X = center + radius * rng.uniform(size=m)[:, None] ** (1.0 / dim) * u
            if box is not None and np.all(box.lower >= center) and np.any(box.lower > -np.inf):
                # fold into the orthant corner at the center before rejecting
                X = center + np.abs(X - center)
            X = X[_in_box(X, box)]
            out.append(X[:need])
            need -= len(out[-1])
        return np.vstack(out), _log_uniform_lambdas(rng, n, lam_min)

    return sample


def sphere_sampler(center, radii, box: Optional[BoxConstraint] = None,
                   lam_min: float = LAMBDA_MIN) -> Callable:
    """Points spread evenly over a few spheres (stratified by radius)."""
    center = as_vector(center)
    radii = np.asarray(radii, dtype=float)

    def sample(rng, n):
        out = []
        need = n
        while need > 0:
            m = 2 * need + 16
            u = rng.standard_normal((m, center.size))
            u /= np.linalg.norm(u, axis=1, keepdims=True)
            X = center + radii[np.arange(m) % radii.size, None] * u
            X = X[_in_box(X, box)]
            out.append(X[:need])
            need -= len(out[-1])
        return np.vstack(out), _log_uniform_lambdas(rng, n, lam_min)

    return sample


def near_kink_sampler(f: ObjectiveSpec, scale: float = 1e-3,
                      lam_min: float = LAMBDA_MIN) -> Callable:
    """Gaussian clouds around the objective's declared kinks."""
    if not f.kinks:
        raise ParameterError(f"{f.name} declares no kinks")
    kinks = np.array([np.asarray(k, dtype=float) for k in f.kinks])

    def sample(rng, n):
        out = []
        need = n
        while need > 0:
            m = 2 * need + 16
            X = kinks[rng.integers(len(kinks), size=m)] + scale * rng.standard_normal((m, f.dim))
            X = X[_in_box(X, f.box)]
            out.append(X[:need])
            need -= len(out[-1])
        return np.vstack(out), _log_uniform_lambdas(rng, n, lam_min)

    return sample


def default_sampler(f: ObjectiveSpec, cert: QuasarCertificate, radius: float = 1.0) -> Callable:
    return ball_sampler(cert.xbar, radius, f.box)


# ---------------------------------------------------------------------------
# inequality checks


def _params(cert, **extra):
    return {"kappa": cert.kappa, "gamma": cert.gamma, "xbar": cert.xbar.tolist(), **extra}


def check_quasar_inequality(f: ObjectiveSpec, cert: QuasarCertificate, sampler: Callable,
                            n: int, seed: int = 0) -> ViolationReport:
    """Sample ``h(l xbar + (1-l) x) <= k l h(xbar) + (1 - k l) h(x) - l (1 - l/(2-k)) (k g/2) ||x - xbar||^2``."""
    rng = np.random.default_rng(seed)
    X, lam = sampler(rng, n)
    k, g, xb = cert.kappa, cert.gamma, cert.xbar
    hx = f.values(X)
    hb = f(xb)
    mid = f.values(lam[:, None] * xb + (1.0 - lam[:, None]) * X)
    d2 = np.sum((X - xb) ** 2, axis=1)
    rhs = k * lam * hb + (1.0 - k * lam) * hx - lam * (1.0 - lam / (2.0 - k)) * (k * g / 2.0) * d2
    slack = EXACT_RTOL * (1.0 + np.abs(hx))
    return _report("quasar_inequality", rhs - mid, slack, X, lam, _params(cert, n=n, seed=seed))


def check_quadratic_growth(f: ObjectiveSpec, cert: QuasarCertificate, sampler: Callable,
                           n: int, seed: int = 0) -> ViolationReport:
    """Sample ``h(xbar) + k g / (2 (2 - k)) ||y - xbar||^2 <= h(y)``."""
    rng = np.random.default_rng(seed)
    Y, _ = sampler(rng, n)
    hy = f.values(Y)
    lhs = f(cert.xbar) + cert.growth_modulus * np.sum((Y - cert.xbar) ** 2, axis=1)
    slack = EXACT_RTOL * (1.0 + np.abs(hy))
    return _report("quadratic_growth", hy - lhs, slack, Y, None, _params(cert, n=n, seed=seed))


def _fd_gradients(f, Y, step):
    m, d = Y.shape
    G = np.empty((m, d))
    for i in range(d):
        e = np.zeros(d)
        e[i] = step
        G[:, i] = (f.values(Y + e) - f.values(Y - e)) / (2.0 * step)
    return G


def check_diff_characterization(f: ObjectiveSpec, cert: QuasarCertificate, sampler: Callable,
                                n: int, seed: int = 0, fd_step: float = 1e-6) -> ViolationReport:
    """Sample ``h(xbar) >= h(y) + <grad h(y), xbar - y> / k + (g/2) ||y - xbar||^2``.

    Gradients come from central differences. Points where differences with
    step ``h`` and ``2h`` disagree (a kink within reach of the stencil) or
    whose stencil leaves the box are skipped and counted in ``n_skipped``.
    """
    rng = np.random.default_rng(seed)
    Y, _ = sampler(rng, n)
    keep = np.ones(len(Y), dtype=bool)
    if f.box is not None:
        keep &= np.all((Y - 2 * fd_step >= f.box.lower) & (Y + 2 * fd_step <= f.box.upper), axis=1)
    Y = Y[keep]
    G1 = _fd_gradients(f, Y, fd_step)
    G2 = _fd_gradients(f, Y, 2.0 * fd_step)
    smooth = np.max(np.abs(G1 - G2), axis=1) <= 1e-4 * (1.0 + np.max(np.abs(G1), axis=1))
    skipped = int((~keep).sum() + (~smooth).sum())
    Y, G = Y[smooth], G1[smooth]
    hy = f.values(Y)
    diff = cert.xbar - Y
    rhs = hy + np.einsum("ij,ij->i", G, diff) / cert.kappa + 0.5 * cert.gamma * np.sum(diff**2, axis=1)
    slack = FD_TOL * (1.0 + np.abs(hy))
    return _report("diff_characterization", f(cert.xbar) - rhs, slack, Y, None,
                   _params(cert, n=n, seed=seed, fd_step=fd_step), skipped)


def check_supercoercive(f: ObjectiveSpec, radii, samples_per_radius: int = 1000,
                        seed: int = 0) -> float:
    """Smallest sampled ``h(x) / ||x||^2`` on the largest of ``radii``."""
    radii = np.asarray(radii, dtype=float)
    if radii.size == 0 or np.any(np.diff(radii) <= 0) or radii[0] <= 0:
        raise ParameterError("radii must be positive and increasing")
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((samples_per_radius, f.dim))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    if f.box is not None and np.all(f.box.lower >= 0):
        u = np.abs(u)
    X = radii[-1] * u
    X = X[_in_box(X, f.box)]
    return float(np.min(f.values(X)) / radii[-1] ** 2)


def largest_valid_kappa(f: ObjectiveSpec, xbar, gamma: float, sampler: Callable, n: int,
                        lo: float = 1e-3, hi: float = 1.0, iters: int = 20, seed: int = 0) -> float:
    """Best-effort bisection for the largest kappa passing :func:`check_quasar_inequality`."""

    def ok(k):
        return check_quasar_inequality(f, QuasarCertificate(k, gamma, xbar), sampler, n, seed).passed

    if ok(hi):
        return hi
    if not ok(lo):
        return 0.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if ok(mid) else (lo, mid)
    return lo


# ---------------------------------------------------------------------------
# rate and complexity bounds


def _rate_sum(kappa, gamma, beta_lower):
    return 1.0 + kappa * beta_lower * gamma + kappa**2 * beta_lower * gamma / (2.0 - kappa)


def _check_strong(kappa, gamma, beta_lower):
    if not 0.0 < kappa <= 1.0:
        raise ParameterError("kappa must lie in (0, 1]")
    if not gamma > 0:
        raise ParameterError("gamma must be positive")
    if not beta_lower > 0:
        raise ParameterError("beta_lower must be positive")


def theoretical_rate(kappa: float, gamma: float, beta_lower: float) -> float:
    """Per-step contraction ``1 / sqrt(1 + k b g + k^2 b g / (2 - k))`` of the distance to xbar."""
    _check_strong(kappa, gamma, beta_lower)
    return 1.0 / math.sqrt(_rate_sum(kappa, gamma, beta_lower))


def iteration_bound_strong(eps: float, kappa: float, gamma: float, beta_lower: float,
                           dist0: float) -> int:
    """Iterations guaranteeing ``||x^k - xbar|| <= eps``."""
    _check_strong(kappa, gamma, beta_lower)
    if not (eps > 0 and dist0 >= 0):
        raise ParameterError("need eps > 0 and dist0 >= 0")
    if dist0 <= eps:
        return 0
    k = (math.log(1.0 / eps) + math.log(dist0)) / math.log(math.sqrt(_rate_sum(kappa, gamma, beta_lower)))
    return max(0, math.ceil(k))


def iteration_bound_strong_value(eps: float, kappa: float, gamma: float, beta_lower: float,
                                 dist0: float, squared: bool = True) -> int:
    """Iterations guaranteeing ``h(x^k) - h(xbar) <= eps``.

    The displayed bound carries ``||x^0 - xbar|| / (2 k b)``; its derivation
    produces the squared distance. ``squared`` selects which one is used.
    """
    _check_strong(kappa, gamma, beta_lower)
    if not (eps > 0 and dist0 >= 0):
        raise ParameterError("need eps > 0 and dist0 >= 0")
    d = dist0**2 if squared else dist0
    if d == 0:
        return 0
    c = d / (2.0 * kappa * beta_lower)
    k = (math.log(1.0 / eps) + math.log(c)) / math.log(math.sqrt(_rate_sum(kappa, gamma, beta_lower))) + 1.0
    return max(0, math.ceil(k))


def iteration_bound_quasar(eps: float, kind: str, beta_lower: Optional[float] = None,
                           beta_upper: Optional[float] = None, kappa: float = 1.0,
                           dist0_or_gap0: float = 1.0) -> int:
    """Sublinear complexity bounds for the ``gamma = 0`` case.

    ``kind="value"``: ``||x^0 - xbar||^2 / (2 k b' eps)`` iterations until
    ``h(x^k) - min h <= eps``. ``kind="step"``: ``2 b'' (h(x^0) - min h) / eps^2``
    iterations until ``||x^{k+1} - x^k|| <= eps``.
    """
    if not eps > 0:
        raise ParameterError("eps must be positive")
    if not dist0_or_gap0 >= 0:
        raise ParameterError("distance / gap must be nonnegative")
    if kind == "value":
        if beta_lower is None or not beta_lower > 0 or not 0 < kappa <= 1:
            raise ParameterError("value bound needs beta_lower > 0 and kappa in (0, 1]")
        return math.ceil(dist0_or_gap0**2 / (2.0 * kappa * beta_lower * eps) - 1e-12)
    if kind == "step":
        if beta_upper is None or not beta_upper > 0:
            raise ParameterError("step bound needs beta_upper > 0")
        return math.ceil(2.0 * beta_upper * dist0_or_gap0 / eps**2 - 1e-12)
    raise ParameterError("kind must be 'value' or 'step'")


# ---------------------------------------------------------------------------
# trace checks


def _trace_arrays(trace, cert):
    X = np.array(trace.iterates)
    d = np.linalg.norm(X - cert.xbar, axis=1)
    return X, np.asarray(trace.values, dtype=float), d


def _ref_value(trace, ref_value):
    hb = ref_value if ref_value is not None else trace.meta.get("ref_value")
    if hb is None:
        raise ParameterError("h(xbar) is needed: pass ref_value or record it in trace.meta")
    return float(hb)


def check_trace_linear(trace, cert: QuasarCertificate, beta_lower: float,
                       tail_fraction: float = 1.0, abs_tol: float = 1e-12,
                       ref_value: Optional[float] = None) -> ViolationReport:
    """Per-step contraction ``||x^{k+1} - xbar|| <= rate ||x^k - xbar||`` plus the value bound.

    The value bound is ``h(x^{k+1}) - h(xbar) <= ||x^k - xbar||^2 / (2 k b')``.
    ``tail_fraction`` restricts the test to the last part of the trace.
    """
    rate = theoretical_rate(cert.kappa, cert.gamma, beta_lower)
    X, v, d = _trace_arrays(trace, cert)
    n = len(d) - 1
    start = n - int(math.ceil(tail_fraction * n))
    idx = np.arange(start, n)
    hb = _ref_value(trace, ref_value)
    m_rate = rate * d[idx] - d[idx + 1]
    m_val = d[idx] ** 2 / (2.0 * cert.kappa * beta_lower) - (v[idx + 1] - hb)
    margins = np.concatenate([m_rate, m_val])
    slack = np.concatenate([abs_tol + EXACT_RTOL * d[idx], EXACT_RTOL * (1.0 + np.abs(v[idx + 1]))])
    pts = np.concatenate([X[idx + 1], X[idx + 1]])
    return _report("trace_linear", margins, slack, pts, None,
                   _params(cert, beta_lower=beta_lower, rate=rate, tail_fraction=tail_fraction))


def check_trace_sublinear(trace, cert: QuasarCertificate, beta_lower: float,
                          ref_value: Optional[float] = None) -> ViolationReport:
    """``h(x^N) - h(xbar) <= ||x^0 - xbar||^2 / (2 k b' N)`` and Fejer monotone distances."""
    X, v, d = _trace_arrays(trace, cert)
    hb = _ref_value(trace, ref_value)
    n = len(d) - 1
    if n < 1:
        return ViolationReport("trace_sublinear", 0, 0, math.inf, None, _params(cert, beta_lower=beta_lower))
    N = np.arange(1, n + 1)
    k = cert.kappa
    m_val = d[0] ** 2 / (2.0 * k * beta_lower * N) - (v[1:] - hb)
    m_fej = d[:-1] ** 2 + 2.0 * k * beta_lower * (hb - v[1:]) - d[1:] ** 2
    margins = np.concatenate([m_val, m_fej])
    slack = EXACT_RTOL * (1.0 + np.concatenate([np.abs(v[1:]), d[:-1] ** 2]))
    return _report("trace_sublinear", margins, slack, np.concatenate([X[1:], X[1:]]), None,
                   _params(cert, beta_lower=beta_lower))


def tail_ratios(trace, xbar, tail_fraction: float = 0.8) -> np.ndarray:
    """``||x^{k+1} - xbar|| / ||x^k - xbar||`` over the last ``tail_fraction`` of the steps."""
    d = np.linalg.norm(np.array(trace.iterates) - as_vector(xbar), axis=1)
    n = len(d) - 1
    start = n - int(math.ceil(tail_fraction * n))
    num, den = d[start + 1:], d[start:-1]
    ok = den > 0
    return num[ok] / den[ok]
