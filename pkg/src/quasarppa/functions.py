"""Test-function gallery with closed-form quasar-convexity moduli.

Every gallery objective is exposed twice: as a plain scalar function
(``lp_quasinorm``, ``ces``, ...) and as an :class:`~quasarppa.core.ObjectiveSpec`
builder that also carries a Clarke-element and generalized-Jacobian selection
for the Newton solvers. The builders use small classes with bound methods so
the resulting objectives pickle cleanly into worker processes.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.stats import norm, qmc

from .core import (
    BoxConstraint,
    DomainError,
    KinkSphere,
    ObjectiveSpec,
    ParameterError,
    QuasarCertificate,
    as_vector,
)

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# scalar gallery functions


def lp_quasinorm(x, p: float) -> float:
    """``(sum |x_i|^p)^(1/p)`` for ``0 < p < 1``."""
    if not 0.0 < p < 1.0:
        raise ParameterError(f"p must lie in (0, 1), got {p}")
    x = as_vector(x)
    return float(np.sum(np.abs(x) ** p) ** (1.0 / p))


def ces(x, alphas, beta: float) -> float:
    """CES production function ``(sum alpha_i x_i^beta)^(1/beta)`` on the nonnegative orthant.

    For ``beta < 0`` the value is 0 whenever some coordinate vanishes.
    """
    if beta == 0:
        raise ParameterError("beta must be nonzero")
    x = as_vector(x)
    alphas = _positive_weights(alphas, x.size)
    if np.any(x < 0):
        raise DomainError(f"CES is defined on the nonnegative orthant, got {x}")
    if beta < 0 and np.any(x == 0):
        return 0.0
    return float(np.sum(alphas * x**beta) ** (1.0 / beta))


def leontief(x, alphas, alpha_exp: float) -> float:
    """Leontief function ``min_i(x_i / alpha_i)^alpha_exp`` on the nonnegative orthant."""
    if not alpha_exp > 0:
        raise ParameterError("alpha_exp must be positive")
    x = as_vector(x)
    alphas = _positive_weights(alphas, x.size)
    if np.any(x < 0):
        raise DomainError(f"Leontief is defined on the nonnegative orthant, got {x}")
    return float(np.min(x / alphas) ** alpha_exp)


def euclid_power(x, alpha: float) -> float:
    """Powered Euclidean norm ``||x||^alpha``."""
    if not 0.0 < alpha <= 2.0:
        raise ParameterError(f"alpha must lie in (0, 2], got {alpha}")
    return float(np.linalg.norm(as_vector(x)) ** alpha)


def _positive_weights(alphas, n: int) -> np.ndarray:
    alphas = np.asarray(alphas, dtype=float).ravel()
    if alphas.size != n:
        raise ParameterError(f"need {n} weights, got {alphas.size}")
    if np.any(alphas <= 0):
        raise ParameterError("weights must be positive")
    return alphas


# ---------------------------------------------------------------------------
# theta / Q machinery for positively homogeneous functions


def _check_lambda(lam: float) -> None:
    if not 0.0 < lam <= 1.0:
        raise ParameterError(f"lambda must lie in (0, 1], got {lam}")


def _check_alpha_kappa(alpha: float, kappa: float) -> None:
    if not alpha > 0:
        raise ParameterError(f"alpha must be positive, got {alpha}")
    if alpha <= 1.0:
        if not 0.0 < kappa < alpha:
            raise ParameterError(f"kappa must lie in (0, {alpha}) for alpha <= 1, got {kappa}")
    elif not 0.0 < kappa <= 1.0:
        raise ParameterError(f"kappa must lie in (0, 1] for alpha > 1, got {kappa}")


def theta_alpha(lam: float, alpha: float) -> float:
    """``(1 - (1 - lam)^alpha) / lam``; exactly 1 when ``alpha == 1``."""
    _check_lambda(lam)
    if not alpha > 0:
        raise ParameterError(f"alpha must be positive, got {alpha}")
    if alpha == 1.0:
        return 1.0
    if lam == 1.0:
        return 1.0
    # expm1/log1p keeps full relative accuracy as lam -> 0
    return float(-math.expm1(alpha * math.log1p(-lam)) / lam)


def q_alpha_kappa(lam: float, alpha: float, kappa: float) -> float:
    """``(theta_alpha(lam) - kappa) / ((1 - lam / (2 - kappa)) kappa / 2)``.

    The removable singularity at ``kappa = lam = 1`` is filled with 2.
    """
    _check_lambda(lam)
    _check_alpha_kappa(alpha, kappa)
    if kappa == 1.0 and lam == 1.0:
        return 2.0
    return (theta_alpha(lam, alpha) - kappa) / ((1.0 - lam / (2.0 - kappa)) * kappa / 2.0)


def theta_infimum(alpha: float) -> float:
    if not alpha > 0:
        raise ParameterError(f"alpha must be positive, got {alpha}")
    return float(alpha) if alpha <= 1.0 else 1.0


def q_infimum(alpha: float, kappa: float) -> float:
    _check_alpha_kappa(alpha, kappa)
    if alpha < 2.0:
        return 2.0 * (alpha - kappa) / kappa
    return 2.0 * (2.0 - kappa) / kappa


@dataclass(frozen=True)
class HomogeneousParams:
    """Degree ``alpha``, sphere radius ``c``, ``M = sup ||x||`` over K and ``S_c``."""

    alpha: float
    c: float
    M: float
    S_c: float

    def __post_init__(self):
        for name in ("alpha", "c", "M", "S_c"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive")
        if self.c > self.M:
            raise ParameterError("need c <= M")


def strong_modulus(params: HomogeneousParams, kappa: float) -> float:
    """Certified ``gamma`` for an ``alpha``-homogeneous function on a compact set."""
    a, c, M, S = params.alpha, params.c, params.M, params.S_c
    if a > 2.0:
        raise ParameterError("alpha > 2: the function is not strongly quasar-convex")
    if a <= 1.0:
        if not 0.0 < kappa < a:
            raise ParameterError(f"kappa must lie in (0, {a}) when alpha <= 1")
    elif not 0.0 < kappa <= 1.0:
        raise ParameterError("kappa must lie in (0, 1] when alpha > 1")
    if a == 2.0:
        return 2.0 * (2.0 - kappa) * S / (kappa * c**2)
    return 2.0 * (a - kappa) * S / (kappa * c**a * M ** (2.0 - a))


def sphere_points(dim: int, c: float, n_points: int, seed: int = 0) -> np.ndarray:
    """Deterministic points on the radius-``c`` sphere.

    Equispaced angles in 2-D, a seeded scrambled Sobol sequence pushed through
    the normal quantile function in higher dimension.
    """
    if dim == 1:
        return np.array([[c], [-c]])
    if dim == 2:
        t = np.linspace(0.0, 2.0 * np.pi, n_points, endpoint=False)
        return c * np.column_stack([np.cos(t), np.sin(t)])
    u = qmc.Sobol(dim, scramble=True, seed=seed).random(n_points)
    z = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return c * z


def sphere_minimum(f: ObjectiveSpec, c: float, n_points: int = 100_000, box=None) -> float:
    """Sampled ``S_c``: min of ``f`` over the radius-``c`` sphere intersected with ``box``."""
    box = box if box is not None else f.box
    pts = sphere_points(f.dim, c, n_points)
    if box is not None:
        if np.all(box.lower >= 0):
            pts = np.abs(pts)
        pts = pts[[box.contains(p) for p in pts]]
        if len(pts) == 0:
            raise ParameterError("no sphere points fall inside the box")
    return float(np.min(f.values(pts)))


# ---------------------------------------------------------------------------
# gallery objectives


def _origin(n):
    return (np.zeros(n),)


class _Quadratic:
    def __init__(self, scale):
        self.scale = float(scale)

    def value(self, x):
        return self.scale * float(x @ x)

    def grad(self, x):
        return 2.0 * self.scale * x

    def jac(self, x):
        return 2.0 * self.scale * np.eye(x.size)

    def many(self, X):
        return self.scale * np.einsum("ij,ij->i", X, X)


def quadratic_objective(dim: int = 1, scale: float = 1.0, box=None) -> ObjectiveSpec:
    """``scale * ||x||^2``; strongly convex with modulus ``2 scale``."""
    q = _Quadratic(scale)
    return ObjectiveSpec(dim, q.value, q.grad, q.jac, box=box, min_value=0.0,
                         value_many=q.many, name="quadratic")


class _EuclidPower:
    def __init__(self, alpha):
        if not 0.0 < alpha <= 2.0:
            raise ParameterError(f"alpha must lie in (0, 2], got {alpha}")
        self.alpha = float(alpha)

    def value(self, x):
        return float(np.linalg.norm(x) ** self.alpha)

    def grad(self, x):
        r = np.linalg.norm(x)
        if r == 0:
            return np.zeros_like(x)
        return self.alpha * r ** (self.alpha - 2.0) * x

    def jac(self, x):
        r = np.linalg.norm(x)
        n = x.size
        if r == 0:
            return np.zeros((n, n))
        u = x / r
        return self.alpha * r ** (self.alpha - 2.0) * (np.eye(n) + (self.alpha - 2.0) * np.outer(u, u))

    def many(self, X):
        return np.linalg.norm(X, axis=1) ** self.alpha


def euclid_objective(alpha: float, dim: int = 2, box=None) -> ObjectiveSpec:
    e = _EuclidPower(alpha)
    return ObjectiveSpec(dim, e.value, e.grad, e.jac, box=box, kinks=_origin(dim),
                         min_value=0.0, value_many=e.many, name=f"euclid_power[{alpha}]")


def sqrt_abs_objective() -> ObjectiveSpec:
    """``sqrt(|x|)`` on ``K = [-2, 2]``: a strongly quasar-convex function whose prox is set-valued."""
    return euclid_objective(0.5, dim=1, box=BoxConstraint.interval(-2.0, 2.0))


class _Lp:
    def __init__(self, p):
        if not 0.0 < p < 1.0:
            raise ParameterError(f"p must lie in (0, 1), got {p}")
        self.p = float(p)

    def value(self, x):
        return float(np.sum(np.abs(x) ** self.p) ** (1.0 / self.p))

    def grad(self, x):
        p = self.p
        ax = np.abs(x)
        nz = ax > 0
        g = np.zeros_like(x)
        if not np.any(nz):
            return g
        S = np.sum(ax[nz] ** p)
        # zero coordinates get the zero component (the slope there is unbounded)
        g[nz] = S ** (1.0 / p - 1.0) * ax[nz] ** (p - 1.0) * np.sign(x[nz])
        return g

    def jac(self, x):
        p = self.p
        n = x.size
        ax = np.abs(x)
        nz = ax > 0
        V = np.zeros((n, n))
        if not np.any(nz):
            return V
        S = np.sum(ax[nz] ** p)
        w = np.zeros(n)
        w[nz] = ax[nz] ** (p - 1.0) * np.sign(x[nz])
        V += (1.0 - p) * S ** (1.0 / p - 2.0) * np.outer(w, w)
        d = np.zeros(n)
        d[nz] = (p - 1.0) * S ** (1.0 / p - 1.0) * ax[nz] ** (p - 2.0)
        return V + np.diag(d)

    def many(self, X):
        return np.sum(np.abs(X) ** self.p, axis=1) ** (1.0 / self.p)


def lp_objective(p: float, dim: int = 2, box=None) -> ObjectiveSpec:
    o = _Lp(p)
    return ObjectiveSpec(dim, o.value, o.grad, o.jac, box=box, kinks=_origin(dim),
                         kink_faces=_coordinate_faces(dim), min_value=0.0, value_many=o.many,
                         name=f"lp[{p}]")


def _coordinate_faces(dim: int) -> tuple:
    """Proper nonempty coordinate subsets (single coordinates only above dimension 4)."""
    sizes = range(1, dim) if dim <= 4 else (1,)
    return tuple(c for k in sizes for c in itertools.combinations(range(dim), k))


class _Ces:
    def __init__(self, alphas, beta):
        if beta == 0:
            raise ParameterError("beta must be nonzero")
        self.alphas = _positive_weights(alphas, len(np.ravel(alphas)))
        self.beta = float(beta)

    def _check(self, x):
        if np.any(x < 0):
            raise DomainError(f"CES is defined on the nonnegative orthant, got {x}")

    def value(self, x):
        return ces(x, self.alphas, self.beta)

    def grad(self, x):
        self._check(x)
        b = self.beta
        g = np.zeros_like(x)
        if np.any(x == 0) and (b < 1.0):
            # boundary of the orthant: either a minimizer (b < 0) or an
            # unbounded slope; use the zero component convention
            if b < 0 or np.all(x == 0):
                return g
        pos = x > 0
        S = np.sum(self.alphas[pos] * x[pos] ** b)
        if S == 0:
            return g
        g[pos] = S ** (1.0 / b - 1.0) * self.alphas[pos] * x[pos] ** (b - 1.0)
        if b >= 1.0:
            g[~pos] = S ** (1.0 / b - 1.0) * self.alphas[~pos] * (1.0 if b == 1.0 else 0.0)
        return g

    def jac(self, x):
        self._check(x)
        b = self.beta
        n = x.size
        pos = x > 0
        if not np.all(pos):
            return np.zeros((n, n))
        a = self.alphas
        S = np.sum(a * x**b)
        w = a * x ** (b - 1.0)
        V = (1.0 - b) * S ** (1.0 / b - 2.0) * np.outer(w, w)
        return V + np.diag((b - 1.0) * S ** (1.0 / b - 1.0) * a * x ** (b - 2.0))

    def many(self, X):
        if np.any(X < 0):
            raise DomainError("CES is defined on the nonnegative orthant")
        b = self.beta
        with np.errstate(divide="ignore"):
            out = np.sum(self.alphas * X**b, axis=1) ** (1.0 / b)
        if b < 0:
            out[np.any(X == 0, axis=1)] = 0.0
        return out


def ces_objective(alphas, beta: float) -> ObjectiveSpec:
    o = _Ces(alphas, beta)
    n = o.alphas.size
    return ObjectiveSpec(n, o.value, o.grad, o.jac, box=BoxConstraint.nonnegative(n),
                         kinks=_origin(n), min_value=0.0, value_many=o.many,
                         name=f"ces[{beta}]")


def ces_sphere_min(alphas, beta: float) -> float:
    """Closed-form ``S_1`` of CES over the unit sphere in the nonnegative orthant."""
    a = np.asarray(alphas, dtype=float)
    if 0 < beta <= 2:
        return float(np.min(a) ** (1.0 / beta))
    if beta > 2:
        return float(np.sum(a ** (-2.0 / (beta - 2.0))) ** (-(beta - 2.0) / (2.0 * beta)))
    raise ParameterError("closed form only for beta > 0")


class _Leontief:
    def __init__(self, alphas, alpha_exp):
        if not alpha_exp > 0:
            raise ParameterError("alpha_exp must be positive")
        self.alphas = _positive_weights(alphas, len(np.ravel(alphas)))
        self.a = float(alpha_exp)

    def value(self, x):
        return leontief(x, self.alphas, self.a)

    def _active(self, x):
        if np.any(x < 0):
            raise DomainError(f"Leontief is defined on the nonnegative orthant, got {x}")
        ratios = x / self.alphas
        j = int(np.argmin(ratios))  # lowest index among ties
        return j, ratios[j]

    def grad(self, x):
        j, m = self._active(x)
        g = np.zeros_like(x)
        if m == 0 and self.a < 1.0:
            return g
        g[j] = self.a * m ** (self.a - 1.0) / self.alphas[j]
        return g

    def jac(self, x):
        j, m = self._active(x)
        V = np.zeros((x.size, x.size))
        if m > 0:
            V[j, j] = self.a * (self.a - 1.0) * m ** (self.a - 2.0) / self.alphas[j] ** 2
        return V

    def many(self, X):
        return np.min(X / self.alphas, axis=1) ** self.a


def leontief_objective(alphas, alpha_exp: float) -> ObjectiveSpec:
    o = _Leontief(alphas, alpha_exp)
    n = o.alphas.size
    return ObjectiveSpec(n, o.value, o.grad, o.jac, box=BoxConstraint.nonnegative(n),
                         kinks=_origin(n), min_value=0.0, value_many=o.many,
                         name=f"leontief[{alpha_exp}]")


# ---------------------------------------------------------------------------
# randomized product families h(x) = h1(||x||) * h2(.)


EXAMPLES = ("example1", "example2")
COORDS = ("normalized", "raw")


@dataclass(frozen=True)
class RandomFamilyParams:
    """Coefficients of one random instance of the product families.

    ``example1`` uses ``h1(r) = max(q1 r^2, q2 r^2 - k)``, ``example2`` uses
    ``h1(r) = max(r, q r - k)``. ``coords`` selects whether the trigonometric
    layer is evaluated at ``x / ||x||`` (default) or at ``x`` itself.
    """

    example: str
    N: int
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    k: int = 2
    q1: Optional[float] = None
    q2: Optional[float] = None
    q: Optional[float] = None
    seed: Optional[int] = None
    coords: str = "normalized"

    def __post_init__(self):
        if self.example not in EXAMPLES:
            raise ParameterError(f"example must be one of {EXAMPLES}")
        if self.coords not in COORDS:
            raise ParameterError(f"coords must be one of {COORDS}")
        if int(self.N) != self.N or self.N < 1:
            raise ParameterError("N must be a positive integer")
        if int(self.k) != self.k or self.k < 1:
            raise ParameterError("k must be a positive integer")
        for name, lo, hi in (("a", 0, 20), ("b", -25, 25), ("c", 0, 20), ("d", -25, 25)):
            v = np.asarray(getattr(self, name), dtype=float).ravel()
            if v.size != self.N:
                raise ParameterError(f"{name} must have N = {self.N} entries")
            if np.any(v < lo) or np.any(v > hi):
                raise ParameterError(f"{name} entries must lie in [{lo}, {hi}]")
            object.__setattr__(self, name, v)
        if self.example == "example1":
            if self.q1 is None or self.q2 is None or not self.q2 > self.q1 > 0:
                raise ParameterError("example1 needs q2 > q1 > 0")
        elif self.q is None or not self.q > 1:
            raise ParameterError("example2 needs q > 1")

    @classmethod
    def draw(cls, example: str, N: int, seed: int, *, q1: float = 1.0, q2: float = 2.0,
             q: float = 2.0, k: int = 2, coords: str = "normalized") -> "RandomFamilyParams":
        """Draw coefficients from ``numpy.random.default_rng(seed)`` (PCG64).

        Draw order: ``a``, ``b``, ``c``, ``d`` (N each); :meth:`start_point`
        continues the same stream.
        """
        a, b, c, d = _draw_coefficients(np.random.default_rng(seed), N)
        extra = {"q1": q1, "q2": q2} if example == "example1" else {"q": q}
        return cls(example, N, a, b, c, d, k=k, seed=int(seed), coords=coords, **extra)

    def start_point(self) -> np.ndarray:
        """The instance's starting point: next draw after the coefficients, uniform in [-2, 2]^2."""
        if self.seed is None:
            raise ParameterError("instance has no seed")
        rng = np.random.default_rng(self.seed)
        _draw_coefficients(rng, self.N)
        return rng.uniform(-2.0, 2.0, 2)

    def to_json(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "example": self.example,
            "N": int(self.N),
            "seed": self.seed,
            "coords": self.coords,
            "k": int(self.k),
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "c": self.c.tolist(),
            "d": self.d.tolist(),
        }
        if self.example == "example1":
            out.update(q1=self.q1, q2=self.q2)
        else:
            out["q"] = self.q
        return out

    @classmethod
    def from_json(cls, data: dict) -> "RandomFamilyParams":
        version = data.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ParameterError(f"unsupported schema_version {version}")
        return cls(
            data["example"], int(data["N"]),
            np.array(data["a"]), np.array(data["b"]), np.array(data["c"]), np.array(data["d"]),
            k=int(data.get("k", 2)), q1=data.get("q1"), q2=data.get("q2"), q=data.get("q"),
            seed=data.get("seed"), coords=data.get("coords", "normalized"),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def _draw_coefficients(rng, N):
    a = rng.uniform(0.0, 20.0, N)
    b = rng.uniform(-25.0, 25.0, N)
    c = rng.uniform(0.0, 20.0, N)
    d = rng.uniform(-25.0, 25.0, N)
    return a, b, c, d


class _ProductFamily:
    """``h(x) = h1(||x||) * T(w)`` with ``w = x/||x||`` or ``w = x``."""

    def __init__(self, params: RandomFamilyParams):
        self.p = params
        self.s = 1.0 / (4.0 * params.N)
        self.normalized = params.coords == "normalized"
        p = params
        self.a, self.c = p.a, p.c
        self.b2, self.d2 = 2.0 * p.b, 2.0 * p.d
        self.hs = 0.5 * self.s
        self.T0 = 1.0 + self.hs * (p.a.sum() + p.c.sum())
        self.sab, self.scd = self.s * p.a * p.b, self.s * p.c * p.d
        self.sab2, self.scd2 = 2.0 * self.sab * p.b, 2.0 * self.scd * p.d
        if params.example == "example1":
            self.branches = self._quadratic_branches
            self.branch_values = self._quadratic_values
            self.switch_radius = math.sqrt(params.k / (params.q2 - params.q1))
        else:
            self.branches = self._linear_branches
            self.branch_values = self._linear_values
            self.switch_radius = params.k / (params.q - 1.0)

    # h1 and its first two radial derivatives; first branch wins ties
    def _quadratic_branches(self, r):
        p = self.p
        v0, v1 = p.q1 * r * r, p.q2 * r * r - p.k
        if v0 >= v1:
            return v0, 2.0 * p.q1 * r, 2.0 * p.q1
        return v1, 2.0 * p.q2 * r, 2.0 * p.q2

    def _linear_branches(self, r):
        p = self.p
        v0, v1 = r, p.q * r - p.k
        if v0 >= v1:
            return v0, 1.0, 0.0
        return v1, p.q, 0.0

    def _quadratic_values(self, r):
        p = self.p
        return np.maximum(p.q1 * r * r, p.q2 * r * r - p.k)

    def _linear_values(self, r):
        p = self.p
        return np.maximum(r, p.q * r - p.k)

    def trig(self, w):
        """``T(w)``, its gradient and the diagonal of its Hessian."""
        # one complex exponential gives both cosines and sines
        e = np.exp(1j * np.concatenate((self.b2 * w[0], self.d2 * w[1])))
        n = self.b2.size
        c2b, s2b, c2d, s2d = e.real[:n], e.imag[:n], e.real[n:], e.imag[n:]
        # sin^2 = (1 - cos 2t)/2 and cos^2 = (1 + cos 2t)/2
        T = self.T0 + self.hs * (self.c @ c2d - self.a @ c2b)
        g = np.array([self.sab @ s2b, -(self.scd @ s2d)])
        D = np.array([self.sab2 @ c2b, -(self.scd2 @ c2d)])
        return T, g, D

    def trig_many(self, W):
        p, s = self.p, self.s
        return s * (np.sin(np.outer(W[:, 0], p.b)) ** 2 @ p.a
                    + np.cos(np.outer(W[:, 1], p.d)) ** 2 @ p.c) + 1.0

    def value(self, x):
        r = math.hypot(x[0], x[1])
        if r == 0:
            return 0.0
        w = x / r if self.normalized else x
        return self.branches(r)[0] * self.trig(w)[0]

    def many(self, X):
        r = np.hypot(X[:, 0], X[:, 1])
        nz = r > 0
        out = np.zeros(len(X))
        if not np.any(nz):
            return out
        W = X[nz] / r[nz, None] if self.normalized else X[nz]
        out[nz] = self.branch_values(r[nz]) * self.trig_many(W)
        return out

    def grad(self, x):
        r = math.hypot(x[0], x[1])
        if r == 0:
            return np.zeros(2)  # the origin is the minimizer, so 0 is a Clarke element
        u = x / r
        phi, dphi, _ = self.branches(r)
        if self.normalized:
            T, g, _ = self.trig(u)
            gT = (g - (g @ u) * u) / r
        else:
            T, gT, _ = self.trig(x)
        return T * dphi * u + phi * gT

    def jac(self, x):
        r = math.hypot(x[0], x[1])
        if r == 0:
            if self.p.example == "example1" and not self.normalized:
                return 2.0 * self.p.q1 * self.trig(x)[0] * np.eye(2)
            return np.zeros((2, 2))
        u = x / r
        P = np.eye(2) - np.outer(u, u)
        phi, dphi, d2phi = self.branches(r)
        grad_phi = dphi * u
        hess_phi = d2phi * np.outer(u, u) + (dphi / r) * P
        if self.normalized:
            T, g, D = self.trig(u)
            gu = g @ u
            grad_T = P @ g / r
            hess_T = (P @ np.diag(D) @ P
                      - np.outer(g, u) - np.outer(u, g)
                      - gu * np.eye(2) + 3.0 * gu * np.outer(u, u)) / r**2
        else:
            T, grad_T, D = self.trig(x)
            hess_T = np.diag(D)
        return (T * hess_phi + np.outer(grad_phi, grad_T) + np.outer(grad_T, grad_phi)
                + phi * hess_T)


def _make_family(params: RandomFamilyParams, example: str) -> ObjectiveSpec:
    if params.example != example:
        raise ParameterError(f"params describe {params.example}, not {example}")
    fam = _ProductFamily(params)
    kinks = _origin(2) if example == "example2" else ()
    return ObjectiveSpec(2, fam.value, fam.grad, fam.jac, kinks=kinks,
                         kink_spheres=(KinkSphere(np.zeros(2), fam.switch_radius),), min_value=0.0,
                         value_many=fam.many, name=f"{example}[N={params.N}]")


def make_example1(params: RandomFamilyParams) -> ObjectiveSpec:
    """Strongly quasar-convex family: ``max(q1 r^2, q2 r^2 - k) * h2``."""
    return _make_family(params, "example1")


def make_example2(params: RandomFamilyParams) -> ObjectiveSpec:
    """Quasar-convex (``gamma = 0``) family: ``max(r, q r - k) * h2``."""
    return _make_family(params, "example2")


def make_example(params: RandomFamilyParams) -> ObjectiveSpec:
    return _make_family(params, params.example)


def example_certificate(params: RandomFamilyParams) -> QuasarCertificate:
    """``(1, 2 q1, 0)`` for example1 and ``(1, 0, 0)`` for example2."""
    if params.example == "example1":
        return QuasarCertificate(1.0, 2.0 * params.q1, np.zeros(2))
    return QuasarCertificate(1.0, 0.0, np.zeros(2))


@dataclass(frozen=True)
class GalleryEntry:
    """A gallery objective bundled with a known minimizer and homogeneity degree."""

    objective: ObjectiveSpec
    xbar: np.ndarray
    degree: Optional[float] = None
    notes: dict = field(default_factory=dict)


def gallery(N: int = 5, seed: int = 0) -> dict:
    """A representative set of 2-D gallery objectives (plus the 1-D remark example)."""
    ex1 = RandomFamilyParams.draw("example1", N, seed)
    ex2 = RandomFamilyParams.draw("example2", N, seed + 1)
    z2 = np.zeros(2)
    return {
        "lp": GalleryEntry(lp_objective(0.5, 2), z2, 0.5),
        "ces": GalleryEntry(ces_objective([4.0, 9.0], 1.0), z2, 1.0),
        "ces_neg": GalleryEntry(ces_objective([1.0, 1.0], -1.0), z2, 1.0),
        "leontief": GalleryEntry(leontief_objective([1.0, 2.0], 1.0), z2, 1.0),
        "euclid_half": GalleryEntry(euclid_objective(0.5, 2), z2, 0.5),
        "euclid_2": GalleryEntry(euclid_objective(2.0, 2), z2, 2.0),
        "sqrt_abs": GalleryEntry(sqrt_abs_objective(), np.zeros(1), 0.5),
        "example1": GalleryEntry(make_example1(ex1), z2, None, {"params": ex1}),
        "example2": GalleryEntry(make_example2(ex2), z2, None, {"params": ex2}),
    }
