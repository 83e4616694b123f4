"""Vectors, boxes, the objective interface and small numeric helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np


class ParameterError(ValueError):
    """A parameter lies outside the range an operation accepts."""


class DomainError(ValueError):
    """A point lies outside the domain of a function."""


def as_vector(x, dim: Optional[int] = None) -> np.ndarray:
    """Return ``x`` as a finite 1-D float array, validating its length."""
    v = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    if v.size == 0:
        raise ParameterError("vector must have at least one entry")
    if not np.all(np.isfinite(v)):
        raise DomainError(f"vector has non-finite entries: {v}")
    if dim is not None and v.size != dim:
        raise ParameterError(f"expected a vector of length {dim}, got {v.size}")
    return v


@dataclass(frozen=True)
class BoxConstraint:
    """Componentwise bounds ``lower <= x <= upper``; entries may be infinite.

    In files an infinite bound is written as ``null`` (see :meth:`to_json`).
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float)).ravel()
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float)).ravel()
        if lo.shape != hi.shape:
            raise ParameterError("box bounds must have the same length")
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
            raise ParameterError("box bounds must not be NaN")
        if np.any(lo > hi):
            raise ParameterError("box is empty: lower > upper somewhere")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def interval(cls, lo: float, hi: float, dim: int = 1) -> "BoxConstraint":
        return cls(np.full(dim, float(lo)), np.full(dim, float(hi)))

    @classmethod
    def nonnegative(cls, dim: int) -> "BoxConstraint":
        return cls(np.zeros(dim), np.full(dim, np.inf))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def is_bounded(self) -> bool:
        return bool(np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper)))

    def contains(self, x, tol: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))

    def vertices(self) -> list:
        """Finite corners of the box (empty if any bound is infinite)."""
        if not self.is_bounded:
            return []
        pts = np.array(np.meshgrid(*zip(self.lower, self.upper), indexing="ij"))
        return [p for p in pts.reshape(self.dim, -1).T]

    def to_json(self) -> dict:
        def enc(v):
            return [None if math.isinf(t) else float(t) for t in v]

        return {"lower": enc(self.lower), "upper": enc(self.upper)}

    @classmethod
    def from_json(cls, data: dict) -> "BoxConstraint":
        lo = [-np.inf if t is None else float(t) for t in data["lower"]]
        hi = [np.inf if t is None else float(t) for t in data["upper"]]
        return cls(np.array(lo), np.array(hi))


def project_box(x, box: Optional[BoxConstraint]) -> np.ndarray:
    """Clamp ``x`` componentwise into ``box``; identity when ``box`` is None."""
    x = np.asarray(x, dtype=float)
    if box is None:
        return x.copy()
    if box.dim != x.size:
        raise ParameterError(f"box has dimension {box.dim}, point has {x.size}")
    return np.clip(x, box.lower, box.upper)


@dataclass(frozen=True)
class KinkSphere:
    """A sphere ``||x - center|| = radius`` on which ``h`` switches between two smooth branches.

    ``h`` is assumed to use its inner branch strictly inside and its outer
    branch strictly outside.
    """

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_vector(self.center))
        if not self.radius > 0:
            raise ParameterError("kink sphere radius must be positive")

    def project(self, x) -> np.ndarray:
        d = np.asarray(x, dtype=float) - self.center
        r = np.linalg.norm(d)
        if r == 0:
            d = np.zeros_like(d)
            d[0] = 1.0
            r = 1.0
        return self.center + self.radius * d / r

    def distance(self, x) -> float:
        return abs(float(np.linalg.norm(np.asarray(x, dtype=float) - self.center)) - self.radius)


@dataclass(frozen=True)
class ObjectiveSpec:
    """A nonsmooth objective ``h`` together with first/second order selections.

    Parameters
    ----------
    dim : int
        Dimension ``n`` of the argument.
    value_at : callable
        ``x -> h(x)``.
    clarke_element_at : callable
        ``x -> g`` with ``g`` one element of the Clarke subdifferential at ``x``.
        At branch ties the element of the lowest-index active branch is used.
    clarke_jacobian_at : callable, optional
        ``x -> V``, one element of the generalized Jacobian of the selection above.
    box : BoxConstraint, optional
        Feasible set ``K``; ``None`` means the whole space.
    kinks : sequence of arrays
        Known points of nondifferentiability that a Newton iteration cannot
        land on (e.g. the origin of a cone-like function). Prox evaluations
        compare them directly.
    kink_spheres : sequence of KinkSphere
        Spheres across which ``h`` switches branches. Prox evaluations also
        minimize over these surfaces.
    kink_faces : sequence of index tuples
        Coordinate subspaces ``{x : x_i = 0 for i in face}`` on which ``h`` is
        nonsmooth. Prox evaluations also minimize with those coordinates
        pinned at zero.
    min_value : float, optional
        Known minimum value of ``h``, if any.
    value_many : callable, optional
        Vectorised ``(m, n) -> (m,)`` evaluation used by samplers and grids.
    """

    dim: int
    value_at: Callable[[np.ndarray], float]
    clarke_element_at: Callable[[np.ndarray], np.ndarray]
    clarke_jacobian_at: Optional[Callable[[np.ndarray], np.ndarray]] = None
    box: Optional[BoxConstraint] = None
    kinks: Sequence[np.ndarray] = field(default_factory=tuple)
    kink_spheres: Sequence[KinkSphere] = field(default_factory=tuple)
    kink_faces: Sequence[tuple] = field(default_factory=tuple)
    min_value: Optional[float] = None
    value_many: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "objective"

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ParameterError("dim must be a positive integer")
        if self.box is not None and self.box.dim != self.dim:
            raise ParameterError("box dimension does not match objective dimension")
        for face in self.kink_faces:
            if not face or any(not 0 <= int(i) < self.dim for i in face):
                raise ParameterError(f"invalid kink face {face}")

    def __call__(self, x) -> float:
        return float(self.value_at(np.asarray(x, dtype=float)))

    def grad(self, x) -> np.ndarray:
        return np.asarray(self.clarke_element_at(np.asarray(x, dtype=float)), dtype=float)

    def jac(self, x) -> np.ndarray:
        if self.clarke_jacobian_at is None:
            raise ParameterError(f"{self.name} has no generalized Jacobian")
        return np.asarray(self.clarke_jacobian_at(np.asarray(x, dtype=float)), dtype=float)

    def values(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.value_many is not None:
            return np.asarray(self.value_many(X), dtype=float)
        return np.array([self.value_at(x) for x in X])


def finite_diff_gradient(f: ObjectiveSpec, x, step: float = 1e-6) -> np.ndarray:
    """Central-difference gradient ``(f(x + h e_i) - f(x - h e_i)) / 2h``."""
    if not step > 0:
        raise ParameterError("step must be positive")
    x = as_vector(x, f.dim)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        xp, xm = x + e, x - e
        if f.box is not None and not (f.box.contains(xp) and f.box.contains(xm)):
            raise DomainError(f"finite-difference stencil leaves the box at {x}")
        g[i] = (f(xp) - f(xm)) / (2.0 * step)
    return g


def finite_diff_jacobian(grad: Callable, x, step: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of a vector field (column ``i`` is d/dx_i)."""
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        cols.append((np.asarray(grad(x + e)) - np.asarray(grad(x - e))) / (2.0 * step))
    return np.column_stack(cols)


@dataclass(frozen=True)
class QuasarCertificate:
    """Claimed ``(kappa, gamma)``-strong quasar-convexity with respect to ``xbar``."""

    kappa: float
    gamma: float
    xbar: np.ndarray

    def __post_init__(self):
        if not 0.0 < self.kappa <= 1.0:
            raise ParameterError(f"kappa must lie in (0, 1], got {self.kappa}")
        if not self.gamma >= 0.0:
            raise ParameterError(f"gamma must be nonnegative, got {self.gamma}")
        object.__setattr__(self, "xbar", as_vector(self.xbar))

    @property
    def strong(self) -> bool:
        return self.gamma > 0.0

    @property
    def growth_modulus(self) -> float:
        """Quadratic growth constant ``kappa gamma / (2 (2 - kappa))``."""
        return self.kappa * self.gamma / (2.0 * (2.0 - self.kappa))
