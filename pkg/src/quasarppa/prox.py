"""Proximity operator of a nonsmooth objective.

``prox`` minimizes ``h(x) + ||z - x||^2 / (2 beta)`` over the box ``K`` by
running a damped semismooth Newton iteration on the Clarke optimality residual
from several starting points, then comparing every candidate (Newton limits,
minimizers over declared kink spheres and coordinate faces, declared kinks,
box corners and the projection of ``z``) by subproblem value.
``prox_oracle_grid`` is an exhaustive grid search used as an independent
reference in low dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

import numpy as np
from scipy import ndimage, optimize

from .core import BoxConstraint, ObjectiveSpec, ParameterError, as_vector, project_box

DIVERGENCE_GUARD = 1e8
KINK_RADIUS = 1e-9
# a start this close to a declared kink face is left to the restricted solve on that face
FACE_RADIUS = 1e-6
# a start whose squared residual has not dropped 1% in this many steps is abandoned
STALL_WINDOW = 20
STALL_FACTOR = 0.99


@dataclass(frozen=True)
class ProxConfig:
    """Parameters of one prox evaluation.

    Parameters
    ----------
    beta : float
        Prox parameter.
    inner_tol : float
        Stop the Newton iteration once the residual norm is at most this.
    inner_max_iter : int
        Newton iteration cap per start.
    n_starts : int
        Number of Newton starts: ``z``, the origin, then random points in a
        ball around ``z``.
    start_radius : float or None
        Radius of that ball. ``None`` picks ``sqrt(2 beta (h(z) - min h))``
        when ``min h`` is known (every minimizer lies inside), else 1.
    armijo_c, backtrack_factor, max_backtracks : float, float, int
        Armijo line search on the squared residual.
    seed : int
        Seed for the random starts.
    merge_tol : float
        Candidates closer than this in the max-norm are merged.
    value_rtol : float
        Relative tolerance on the subproblem value for tied minimizers.
    grid_starts, grid_resolution : int, int
        In dimension <= 2 with a known minimum value, the lowest
        ``grid_starts`` discrete local minima of the subproblem on a
        ``grid_resolution``-cell grid over the search ball become extra starts.
    polar_angles, polar_radii : int, int
        In dimension 2 the same number of starts also comes from a polar grid
        (uniform angles, geometric radii) around each declared kink point and
        kink sphere center. This resolves angular oscillation close to the
        center that a Cartesian grid misses. ``polar_angles = 0`` disables it.
    surface_tol : float
        Relative stationarity tolerance for candidates on declared kink
        spheres, scaled by ``1 + ||g(x)|| + ||x - z|| / beta``.
    """

    beta: float = 0.05
    inner_tol: float = 1e-10
    inner_max_iter: int = 10_000
    n_starts: int = 5
    start_radius: Optional[float] = None
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    max_backtracks: int = 10
    seed: int = 0
    merge_tol: float = 1e-6
    value_rtol: float = 1e-9
    grid_starts: int = 3
    grid_resolution: int = 32
    polar_angles: int = 360
    polar_radii: int = 32
    surface_tol: float = 1e-7

    def __post_init__(self):
        if not self.beta > 0:
            raise ParameterError("beta must be positive")
        if not (self.inner_tol > 0 and self.merge_tol > 0 and self.value_rtol >= 0):
            raise ParameterError("tolerances must be positive")
        if int(self.grid_starts) < 0 or int(self.grid_resolution) < 2 or not self.surface_tol > 0:
            raise ParameterError("grid_starts >= 0, grid_resolution >= 2 and surface_tol > 0 required")
        if int(self.polar_angles) < 0 or int(self.polar_radii) < 2:
            raise ParameterError("polar_angles >= 0 and polar_radii >= 2 required")
        if int(self.inner_max_iter) < 1 or int(self.n_starts) < 1 or int(self.max_backtracks) < 1:
            raise ParameterError("iteration counts must be positive integers")
        if self.start_radius is not None and not self.start_radius >= 0:
            raise ParameterError("start_radius must be nonnegative")
        if not (0 < self.armijo_c < 1 and 0 < self.backtrack_factor < 1):
            raise ParameterError("armijo_c and backtrack_factor must lie in (0, 1)")

    def with_beta(self, beta: float) -> "ProxConfig":
        return replace(self, beta=float(beta))


@dataclass(frozen=True)
class ProxCandidate:
    point: np.ndarray
    objective_value: float
    residual_norm: float
    converged: bool
    source: str


@dataclass
class ProxResult:
    """Tied global candidates of one prox subproblem, sorted by value then point."""

    minimizers: list
    converged: bool
    inner_iterations: list = field(default_factory=list)
    candidates: list = field(default_factory=list)

    @property
    def points(self) -> list:
        return [m.point for m in self.minimizers]

    @property
    def best(self) -> ProxCandidate:
        return self.minimizers[0]


class SubsolveResult(NamedTuple):
    x: np.ndarray
    iterations: int
    residual_norm: float
    converged: bool
    status: str


def subproblem_value(f: ObjectiveSpec, x, z, beta: float) -> float:
    d = np.asarray(x, dtype=float) - np.asarray(z, dtype=float)
    return f(x) + float(d @ d) / (2.0 * beta)


def prox_residual(f: ObjectiveSpec, x, z, beta: float) -> np.ndarray:
    """``F(x) = g(x) + (x - z) / beta`` with ``g`` the objective's Clarke element."""
    if not beta > 0:
        raise ParameterError("beta must be positive")
    x = as_vector(x, f.dim)
    z = as_vector(z, f.dim)
    return f.grad(x) + (x - z) / beta


def _active_mask(x, F, box):
    """Coordinates sitting on a bound with the residual pushing outward."""
    if box is None:
        return np.zeros(x.size, dtype=bool)
    return ((x <= box.lower) & (F > 0)) | ((x >= box.upper) & (F < 0))


def _kkt(f, x, z, beta):
    return _kkt_free(f, x, z, beta)[0]


def _kkt_free(f, x, z, beta):
    """Projected residual and the mask of coordinates not held by the box."""
    F = f.grad(x) + (x - z) / beta
    active = _active_mask(x, F, f.box)
    return np.where(active, 0.0, F), ~active


def ssn_subsolve(f: ObjectiveSpec, z, x0, cfg: ProxConfig) -> SubsolveResult:
    """Damped semismooth Newton on the prox residual from ``x0``.

    The step solves ``(V + I/beta) d = -F`` on the free coordinates and is
    accepted by Armijo backtracking on ``||F||^2``. When the system is singular
    or the line search fails, a projected gradient step on the subproblem
    objective is tried instead; if that fails too the run is reported as
    stalled.
    """
    beta = cfg.beta
    z = as_vector(z, f.dim)
    x = project_box(as_vector(x0, f.dim), f.box)
    n = x.size
    eye = np.eye(n) / beta
    c, tau = cfg.armijo_c, cfg.backtrack_factor
    F, free = _kkt_free(f, x, z, beta)
    nF2 = float(F @ F)
    kinks = [np.asarray(k, dtype=float) for k in f.kinks]
    kink_tol = KINK_RADIUS * (1.0 + float(np.linalg.norm(z)))
    faces = [list(fc) for fc in f.kink_faces
             if f.box is None or np.any(f.box.lower[list(fc)] < f.box.upper[list(fc)])]
    face_tol = FACE_RADIUS * (1.0 + float(np.linalg.norm(z)))
    it = 0
    status = "max_iter"
    best, best_it = nF2, 0
    while it < cfg.inner_max_iter:
        if math.sqrt(nF2) <= cfg.inner_tol:
            status = "converged"
            break
        it += 1
        d = np.zeros(n)
        try:
            A = f.jac(x)[np.ix_(free, free)] + eye[np.ix_(free, free)]
            d[free] = -np.linalg.solve(A, F[free])
            ok = bool(np.all(np.isfinite(d)))
        except np.linalg.LinAlgError:
            ok = False
        accepted = False
        if ok:
            t = 1.0
            for _ in range(cfg.max_backtracks):
                xn = project_box(x + t * d, f.box)
                Fn, free_n = _kkt_free(f, xn, z, beta)
                nFn2 = float(Fn @ Fn)
                if np.isfinite(nFn2) and nFn2 <= (1.0 - 2.0 * c * t) * nF2:
                    accepted = True
                    break
                t *= tau
        if not accepted:
            # gradient fallback on the subproblem objective itself
            phi = subproblem_value(f, x, z, beta)
            d = -beta * F
            t = 1.0
            for _ in range(cfg.max_backtracks):
                xn = project_box(x + t * d, f.box)
                if subproblem_value(f, xn, z, beta) <= phi - c * t * beta * nF2:
                    Fn, free_n = _kkt_free(f, xn, z, beta)
                    nFn2 = float(Fn @ Fn)
                    accepted = bool(np.isfinite(nFn2))
                    break
                t *= tau
        if not accepted:
            status = "stalled"
            break
        x, F, nF2, free = xn, Fn, nFn2, free_n
        if np.linalg.norm(x) > DIVERGENCE_GUARD:
            status = "diverged"
            break
        if nF2 < STALL_FACTOR * best:
            best, best_it = nF2, it
        elif it - best_it >= STALL_WINDOW:
            status = "stalled"
            break
        if math.sqrt(nF2) > cfg.inner_tol and (
                any(np.linalg.norm(x - k) <= kink_tol for k in kinks)
                or any(np.max(np.abs(x[fc])) <= face_tol for fc in faces)):
            status = "kink"
            break
    else:
        if math.sqrt(nF2) <= cfg.inner_tol:
            status = "converged"
    return SubsolveResult(x, it, math.sqrt(nF2), status == "converged", status)


def _search_radius(f, z, cfg):
    """Every prox minimizer lies within this distance of ``z`` (None if unknown)."""
    if f.min_value is None:
        return None
    return math.sqrt(2.0 * cfg.beta * max(f(z) - f.min_value, 0.0))


def _grid_seeds(f, z, cfg, radius):
    """Lowest discrete local minima of the subproblem on a coarse grid around ``z``."""
    if cfg.grid_starts == 0 or f.dim > 2 or radius is None or radius == 0:
        return []
    lo, hi = z - radius, z + radius
    if f.box is not None:
        lo, hi = np.maximum(lo, f.box.lower), np.minimum(hi, f.box.upper)
    axes = [np.linspace(lo[i], hi[i], cfg.grid_resolution + 1) for i in range(f.dim)]
    V, X = _grid_values(f, z, cfg.beta, axes)
    local = V == ndimage.minimum_filter(V, size=3, mode="nearest")
    idx = np.flatnonzero(local.ravel())
    idx = idx[np.argsort(V.ravel()[idx], kind="stable")][: cfg.grid_starts]
    return [X[i].copy() for i in idx]


def _polar_seeds(f, z, cfg, radius):
    """Lowest discrete local minima on polar grids around declared centers."""
    if cfg.grid_starts == 0 or cfg.polar_angles == 0 or f.dim != 2 or radius is None or radius == 0:
        return []
    centers = [np.asarray(k, float) for k in f.kinks] + [s.center for s in f.kink_spheres]
    centers = _merge_points(centers, cfg.merge_tol) if centers else []
    t = np.linspace(0.0, 2.0 * math.pi, cfg.polar_angles, endpoint=False)
    U = np.column_stack([np.cos(t), np.sin(t)])
    seeds = []
    for c in centers:
        r_max = float(np.linalg.norm(z - c)) + radius
        r = np.geomspace(1e-4 * r_max, r_max, cfg.polar_radii)
        X = c + (r[:, None, None] * U[None]).reshape(-1, 2)
        V = np.full(len(X), np.inf)
        ok = np.ones(len(X), bool) if f.box is None else np.all((X >= f.box.lower) & (X <= f.box.upper), axis=1)
        if np.any(ok):
            P = X[ok]
            V[ok] = f.values(P) + np.sum((P - z) ** 2, axis=1) / (2.0 * cfg.beta)
        V = V.reshape(r.size, t.size)
        # angles wrap around, radii do not
        low = ndimage.minimum_filter(V, size=3, mode=("nearest", "wrap"))
        idx = np.flatnonzero((V == low).ravel() & np.isfinite(V.ravel()))
        idx = idx[np.argsort(V.ravel()[idx], kind="stable")][: cfg.grid_starts]
        seeds.extend(X[i].copy() for i in idx)
    return seeds


def _start_points(f, z, cfg, radius):
    starts = [z.copy()]
    if cfg.n_starts >= 2:
        starts.append(np.zeros(f.dim))
    n_rand = cfg.n_starts - len(starts)
    if n_rand > 0:
        r0 = cfg.start_radius if cfg.start_radius is not None else (1.0 if radius is None else radius)
        rng = np.random.default_rng(cfg.seed)
        u = rng.standard_normal((n_rand, f.dim))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        r = r0 * rng.uniform(size=n_rand) ** (1.0 / f.dim)
        starts.extend(z + r[:, None] * u)
    starts.extend(_grid_seeds(f, z, cfg, radius))
    starts.extend(_polar_seeds(f, z, cfg, radius))
    return [project_box(s, f.box) for s in starts]


# ---------------------------------------------------------------------------
# minimization along kink spheres


def _circle_point(sphere, t):
    return sphere.center + sphere.radius * np.array([math.cos(t), math.sin(t)])


def _circle_newton(f, z, beta, sphere, t, max_iter=100, tol=1e-11):
    """Newton on the angle for ``t -> Phi(c + rho (cos t, sin t))`` with Armijo damping."""
    rho = sphere.radius
    eye = np.eye(2) / beta

    def parts(t):
        x = _circle_point(sphere, t)
        tau = rho * np.array([-math.sin(t), math.cos(t)])
        G = f.grad(x) + (x - z) / beta
        d1 = float(G @ tau)
        d2 = float(tau @ (f.jac(x) + eye) @ tau) - float(G @ (x - sphere.center))
        return x, d1, d2

    phi = subproblem_value(f, _circle_point(sphere, t), z, beta)
    for _ in range(max_iter):
        x, d1, d2 = parts(t)
        if abs(d1) <= tol * (1.0 + abs(phi)):
            break
        step = -d1 / d2 if d2 > 0 else -d1
        while abs(step) > 1e-15:
            tn = t + step
            pn = subproblem_value(f, _circle_point(sphere, tn), z, beta)
            if pn <= phi + 1e-4 * step * d1:
                break
            step *= 0.5
        else:
            break
        t, phi = tn, pn
    return _circle_point(sphere, t)


def _sphere_minimize(f, z, beta, sphere, x0):
    if f.dim == 2:
        d = x0 - sphere.center
        return _circle_newton(f, z, beta, sphere, math.atan2(d[1], d[0]))

    def fun(y):
        ny = np.linalg.norm(y)
        x = sphere.center + sphere.radius * y / ny
        G = f.grad(x) + (x - z) / beta
        u = y / ny
        return subproblem_value(f, x, z, beta), sphere.radius / ny * (G - (G @ u) * u)

    res = optimize.minimize(fun, x0 - sphere.center, jac=True, method="BFGS",
                            options={"gtol": 1e-12, "maxiter": 500})
    return sphere.project(sphere.center + res.x)


def _sphere_stationarity(f, z, beta, sphere, x):
    """Residual of one-sided Clarke stationarity at a point on a kink sphere.

    Zero when the tangential residual vanishes and the radial residual of the
    inner branch is <= 0 <= that of the outer branch.
    """
    u = (x - sphere.center) / sphere.radius
    F = f.grad(x) + (x - z) / beta
    tang = float(np.linalg.norm(F - (F @ u) * u))
    eps = 1e-9 * sphere.radius
    xin, xout = x - eps * u, x + eps * u
    r_in = float((f.grad(xin) + (xin - z) / beta) @ u)
    r_out = float((f.grad(xout) + (xout - z) / beta) @ u)
    return max(tang, max(r_in, 0.0), max(-r_out, 0.0))


def _sphere_candidates(f, z, cfg, radius, seeds):
    out = []
    for sphere in f.kink_spheres:
        if radius is not None and sphere.distance(z) > radius:
            continue
        pts = [sphere.project(s) for s in seeds]
        if f.dim == 2:
            # sample the arc inside the search ball for additional seeds
            c = z - sphere.center
            t0 = math.atan2(c[1], c[0]) if np.any(c) else 0.0
            t = t0 + np.linspace(-np.pi, np.pi, 129)[:-1]
            arc = sphere.center + sphere.radius * np.column_stack([np.cos(t), np.sin(t)])
            vals = f.values(arc) + np.sum((arc - z) ** 2, axis=1) / (2.0 * cfg.beta)
            local = (vals <= np.roll(vals, 1)) & (vals <= np.roll(vals, -1))
            idx = np.flatnonzero(local)
            pts.extend(arc[i] for i in idx[np.argsort(vals[idx])][:3])
        found = []
        for p in pts:
            x = project_box(_sphere_minimize(f, z, cfg.beta, sphere, p), f.box)
            if any(np.max(np.abs(x - q)) <= cfg.merge_tol for q in found):
                continue
            found.append(x)
            res = _sphere_stationarity(f, z, cfg.beta, sphere, x)
            scale = 1.0 + float(np.linalg.norm(f.grad(x))) + float(np.linalg.norm(x - z)) / cfg.beta
            out.append(ProxCandidate(x, subproblem_value(f, x, z, cfg.beta), res,
                                     res <= cfg.surface_tol * scale, "kink_sphere"))
    return out


def _face_box(f, face):
    """The objective's box with the coordinates in ``face`` pinned at zero."""
    lo = np.full(f.dim, -np.inf) if f.box is None else f.box.lower.copy()
    hi = np.full(f.dim, np.inf) if f.box is None else f.box.upper.copy()
    idx = list(face)
    lo[idx] = np.maximum(lo[idx], 0.0)
    hi[idx] = np.minimum(hi[idx], 0.0)
    if np.any(lo > hi):
        raise ParameterError(f"kink face {face} misses the box")
    return BoxConstraint(lo, hi)


def _structural_points(f, z):
    pts = [("kink", project_box(k, f.box)) for k in f.kinks]
    if f.box is not None:
        pts.append(("projection", project_box(z, f.box)))
        if f.dim <= 3:
            pts.extend(("vertex", v) for v in f.box.vertices())
    return pts


def _merge(cands, tol):
    kept = []
    for c in cands:
        for i, k in enumerate(kept):
            if np.max(np.abs(c.point - k.point)) <= tol:
                if c.converged and not k.converged:
                    kept[i] = c
                break
        else:
            kept.append(c)
    return kept


def _order(c):
    return (c.objective_value, tuple(c.point))


def prox(f: ObjectiveSpec, z, cfg: ProxConfig) -> ProxResult:
    """All tied global minimizers found for ``min_K h(x) + ||z - x||^2 / (2 beta)``.

    ``converged`` is true when the best candidate is a converged Newton limit
    (possibly restricted to a declared kink face), a Clarke-stationary point of
    a declared kink sphere, or a structural point
    (declared kink, box corner, projection of z) whose value is exact by
    construction.
    """
    z = as_vector(z, f.dim)
    beta = cfg.beta
    radius = _search_radius(f, z, cfg)
    cands, iters = [], []
    for s in _start_points(f, z, cfg, radius):
        res = ssn_subsolve(f, z, s, cfg)
        iters.append(res.iterations)
        if not np.all(np.isfinite(res.x)):
            continue
        v = subproblem_value(f, res.x, z, beta)
        if np.isfinite(v):
            cands.append(ProxCandidate(res.x, v, res.residual_norm, res.converged, "newton"))
    if f.kink_spheres:
        seeds = [z] + [c.point for c in cands]
        cands.extend(_sphere_candidates(f, z, cfg, radius, seeds))
    for face in f.kink_faces:
        g = replace(f, box=_face_box(f, face))
        res = ssn_subsolve(g, z, z, cfg)
        iters.append(res.iterations)
        v = subproblem_value(f, res.x, z, beta)
        if np.isfinite(v):
            cands.append(ProxCandidate(res.x, v, res.residual_norm, res.converged, "face"))
    for src, p in _structural_points(f, z):
        v = subproblem_value(f, p, z, beta)
        if np.isfinite(v):
            rn = float(np.linalg.norm(_kkt(f, p, z, beta)))
            cands.append(ProxCandidate(p, v, rn, True, src))
    cands.sort(key=_order)
    if not cands:
        return ProxResult([], False, iters, [])
    best = cands[0].objective_value
    tol = cfg.value_rtol * abs(best)
    tied = _merge([c for c in cands if c.objective_value <= best + tol], cfg.merge_tol)
    tied.sort(key=_order)
    return ProxResult(tied, bool(tied[0].converged), iters, cands)


# ---------------------------------------------------------------------------
# brute-force reference


def oracle_search_box(f: ObjectiveSpec, z, beta: float, pad: float = 1e-9) -> BoxConstraint:
    """A box containing every prox minimizer: ``z +- sqrt(2 beta (h(z) - min h))``.

    Intersected with the objective's own box when it has one.
    """
    if f.min_value is None:
        raise ParameterError("oracle_search_box needs a known minimum value")
    z = as_vector(z, f.dim)
    r = math.sqrt(2.0 * beta * max(f(z) - f.min_value, 0.0)) + pad
    lo, hi = z - r, z + r
    if f.box is not None:
        lo, hi = np.maximum(lo, f.box.lower), np.minimum(hi, f.box.upper)
    return BoxConstraint(lo, hi)


def _grid_values(f, z, beta, axes, chunk=250_000):
    if len(axes) == 1:
        X = axes[0][:, None]
        shape = (axes[0].size,)
    else:
        shape = (axes[0].size, axes[1].size)
        g0, g1 = np.meshgrid(axes[0], axes[1], indexing="ij")
        X = np.column_stack([g0.ravel(), g1.ravel()])
    out = np.empty(len(X))
    for s in range(0, len(X), chunk):
        P = X[s:s + chunk]
        out[s:s + chunk] = f.values(P) + np.sum((P - z) ** 2, axis=1) / (2.0 * beta)
    return out.reshape(shape), X


def _neighbour_variation(V):
    var = np.zeros_like(V)
    for ax in range(V.ndim):
        d = np.abs(np.diff(V, axis=ax))
        lo = [slice(None)] * V.ndim
        hi = [slice(None)] * V.ndim
        lo[ax] = slice(None, -1)
        hi[ax] = slice(1, None)
        var[tuple(lo)] = np.maximum(var[tuple(lo)], d)
        var[tuple(hi)] = np.maximum(var[tuple(hi)], d)
    return var


def prox_oracle_grid(f: ObjectiveSpec, z, beta: float, box: BoxConstraint,
                     resolution: int, zoom: int = 0) -> np.ndarray:
    """Exhaustive grid minimization of the prox subproblem over ``box``.

    Returns one representative per connected cluster of grid points whose
    value is within one cell's variation of the grid minimum, sorted by value.
    ``zoom`` rounds of local regridding (+-2 cells around each representative)
    sharpen the answer.

    Parameters
    ----------
    resolution : int
        Number of cells per axis.
    """
    if f.dim > 2:
        raise ParameterError("grid oracle supports dimension 1 or 2")
    if box is None or not box.is_bounded:
        raise ParameterError("grid oracle needs a bounded box")
    if box.dim != f.dim:
        raise ParameterError("box dimension does not match objective")
    if int(resolution) < 2:
        raise ParameterError("resolution must be at least 2")
    z = as_vector(z, f.dim)
    reps = _oracle_pass(f, z, beta, box.lower, box.upper, int(resolution))
    cell = (box.upper - box.lower) / int(resolution)
    sub_res = int(resolution) if f.dim == 1 else min(int(resolution), 400)
    for _ in range(zoom):
        refined = []
        for p in reps:
            lo = np.maximum(p - 2 * cell, box.lower)
            hi = np.minimum(p + 2 * cell, box.upper)
            refined.append(_oracle_pass(f, z, beta, lo, hi, sub_res)[0])
        reps = refined
        cell = 4 * cell / sub_res
    reps = _merge_points(reps, np.max(cell))
    return np.array(sorted(reps, key=lambda p: (subproblem_value(f, p, z, beta), tuple(p))))


def _merge_points(pts, tol):
    kept = []
    for p in pts:
        if all(np.max(np.abs(p - k)) > tol for k in kept):
            kept.append(p)
    return kept


def _oracle_pass(f, z, beta, lo, hi, resolution):
    axes = [np.linspace(lo[i], hi[i], resolution + 1) for i in range(len(lo))]
    V, X = _grid_values(f, z, beta, axes)
    near = V - _neighbour_variation(V) <= V.min()
    labels, n = ndimage.label(near)
    flatV = V.ravel()
    flatL = labels.ravel()
    reps = []
    for lab in range(1, n + 1):
        idx = np.flatnonzero(flatL == lab)
        reps.append(X[idx[np.argmin(flatV[idx])]].copy())
    reps.sort(key=lambda p: subproblem_value(f, p, z, beta))
    return reps
