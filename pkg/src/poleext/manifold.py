"""Surfaces with a pole and the extension pipeline ``H = exp o psi o log``.

Each surface exposes ``from_tangent`` (exp at the pole, on Cartesian tangent
vectors) and ``to_tangent`` (its inverse). Tangent vectors are arrays of shape
``(..., 2)``; surface points are ``(..., dim)`` arrays in model coordinates:
the plane itself, the Poincare disc, or ambient ``(x, y, z)`` on the
paraboloid ``z = (x^2 + y^2) / 2``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .circlemap import CircleMap, canonicalize
from .config import TOL
from .expr import LiftExpr
from .geom2d import DomainError, PlanarDomain, Radial, curve_distance
from .extend import DomainExtension


class SurfaceError(ValueError):
    """A point violates the model constraint of its surface."""


class TangentVector(NamedTuple):
    r: np.ndarray
    theta: np.ndarray


def _norm2(v):
    return np.hypot(v[..., 0], v[..., 1])


class PoleSurface:
    name = "abstract"
    dim = 2

    def from_tangent(self, v) -> np.ndarray:
        raise NotImplementedError

    def to_tangent(self, q) -> np.ndarray:
        raise NotImplementedError

    def from_xy(self, xy) -> np.ndarray:
        """Surface point with the given first two model coordinates."""
        return np.asarray(xy, dtype=float)

    def to_dict(self) -> dict:
        return {"model": self.name}


class Euclidean(PoleSurface):
    name = "euclidean"

    def from_tangent(self, v):
        return np.asarray(v, dtype=float)

    def to_tangent(self, q):
        return np.asarray(q, dtype=float)

    def __repr__(self) -> str:
        return "Euclidean()"


class Hyperbolic(PoleSurface):
    """Constant curvature ``kappa < 0`` in Poincare disc coordinates."""

    name = "hyperbolic"

    def __init__(self, kappa: float = -1.0):
        if not kappa < 0:
            raise ValueError("hyperbolic curvature must be negative")
        self.kappa = float(kappa)
        self.scale = math.sqrt(-self.kappa)

    def from_tangent(self, v):
        v = np.asarray(v, dtype=float)
        r = _norm2(v)
        with np.errstate(invalid="ignore", divide="ignore"):
            k = np.where(r > 0, np.tanh(0.5 * self.scale * r) / r, 0.5 * self.scale)
        return v * k[..., None]

    def to_tangent(self, q):
        q = np.asarray(q, dtype=float)
        n = _norm2(q)
        if np.any(n >= 1.0):
            raise SurfaceError("Poincare coordinates must satisfy u^2 + v^2 < 1")
        with np.errstate(invalid="ignore", divide="ignore"):
            k = np.where(n > 0, 2.0 * np.arctanh(n) / (self.scale * n), 2.0 / self.scale)
        return q * k[..., None]

    def to_dict(self) -> dict:
        return {"model": self.name, "kappa": self.kappa}

    def __repr__(self) -> str:
        return f"Hyperbolic(kappa={self.kappa})"


def meridian_arclength(rho):
    """Arclength from the apex along a meridian of ``z = (x^2 + y^2) / 2``."""
    rho = np.asarray(rho, dtype=float)
    return 0.5 * (rho * np.sqrt(1.0 + rho * rho) + np.arcsinh(rho))


def meridian_radius(s):
    """Inverse of :func:`meridian_arclength`: safeguarded Newton inside a bracket."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("arclength must be non-negative")
    # s(rho) >= rho and s(rho) <= rho + rho^2/2 bracket the root
    lo = np.sqrt(1.0 + 2.0 * s) - 1.0
    hi = s.copy()
    rho = 0.5 * (lo + hi)
    for _ in range(TOL.newton_max_iter):
        g = meridian_arclength(rho) - s
        lo = np.where(g < 0, rho, lo)
        hi = np.where(g > 0, rho, hi)
        step = g / np.sqrt(1.0 + rho * rho)
        nxt = rho - step
        outside = (nxt <= lo) | (nxt >= hi)
        nxt = np.where(outside, 0.5 * (lo + hi), nxt)
        done = np.abs(nxt - rho) <= TOL.newton_rtol * np.maximum(1.0, rho)
        rho = nxt
        if np.all(done | (g == 0)):
            break
    else:
        raise ArithmeticError("meridian radius did not converge")
    return rho


class Paraboloid(PoleSurface):
    """``z = (x^2 + y^2) / 2`` with the pole at the apex; meridians are geodesics through it."""

    name = "paraboloid"
    dim = 3

    def from_tangent(self, v):
        v = np.asarray(v, dtype=float)
        r = _norm2(v)
        rho = meridian_radius(r)
        with np.errstate(invalid="ignore", divide="ignore"):
            k = np.where(r > 0, rho / r, 1.0)
        xy = v * k[..., None]
        return np.concatenate([xy, 0.5 * (rho * rho)[..., None]], axis=-1)

    def to_tangent(self, q):
        q = np.asarray(q, dtype=float)
        xy = q[..., :2]
        rho = _norm2(xy)
        if np.any(np.abs(q[..., 2] - 0.5 * rho * rho) > 1e-9 * (1.0 + rho * rho)):
            raise SurfaceError("point is not on the paraboloid z = (x^2 + y^2) / 2")
        r = meridian_arclength(rho)
        with np.errstate(invalid="ignore", divide="ignore"):
            k = np.where(rho > 0, r / rho, 1.0)
        return xy * k[..., None]

    def from_xy(self, xy):
        xy = np.asarray(xy, dtype=float)
        return np.concatenate([xy, 0.5 * np.sum(xy * xy, axis=-1, keepdims=True)], axis=-1)

    def __repr__(self) -> str:
        return "Paraboloid()"


def exp_o(surface: PoleSurface, r, theta) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    v = np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)
    return surface.from_tangent(v)


def log_o(surface: PoleSurface, q) -> TangentVector:
    """Geodesic polar coordinates of ``q``; the pole itself gives ``(0, 0)``."""
    v = surface.to_tangent(q)
    r = _norm2(v)
    theta = canonicalize(np.arctan2(v[..., 1], v[..., 0]))
    return TangentVector(r if r.ndim else float(r), theta)


class GeodesicDomain:
    """``V = exp_o(V0)`` for a planar region ``V0`` star-shaped about the origin.

    The usual description is a geodesic-polar radial function ``rho_g``; any
    planar domain anchored at the origin is accepted. Geodesic convexity of
    ``V`` on curved models is taken on trust.
    """

    def __init__(self, surface: PoleSurface, tangent: PlanarDomain):
        if np.any(tangent.anchor != 0.0):
            raise DomainError("the pole must be the anchor of the tangent-plane domain")
        self.surface = surface
        self.tangent = tangent
        self.anchor = surface.from_tangent(np.zeros(2))

    @classmethod
    def from_rho(cls, surface: PoleSurface, rho_g: LiftExpr | str) -> "GeodesicDomain":
        return cls(surface, Radial(rho_g))

    @property
    def dim(self) -> int:
        return self.surface.dim

    @property
    def kind(self) -> str:
        return self.tangent.kind

    def boundary_point(self, theta):
        return self.surface.from_tangent(self.tangent.boundary_point(theta))

    def polar_to_point(self, lam, theta):
        return self.surface.from_tangent(self.tangent.polar_to_point(lam, theta))

    def point_to_polar(self, q):
        return self.tangent.point_to_polar(self.surface.to_tangent(q))

    def contains(self, q, eps: float = 1e-9):
        return self.tangent.contains(self.surface.to_tangent(q), eps)

    def boundary_distance(self, q):
        """Distance to the boundary curve in model coordinates."""
        if isinstance(self.surface, Euclidean):
            return self.tangent.boundary_distance(q)
        return curve_distance(q, self.boundary_point)

    def __repr__(self) -> str:
        return f"GeodesicDomain({self.surface!r}, {self.tangent!r})"


def pull_back_domain(domain: GeodesicDomain) -> PlanarDomain:
    """``log_o(V)``: geodesic polar coordinates carry over unchanged."""
    return domain.tangent


class SurfaceExtension:
    """``H = exp_o o psi o log_o`` where ``psi`` extends the same angular map on ``log_o(V)``."""

    def __init__(self, domain: GeodesicDomain, f: CircleMap, strategy: str = "rotation", seed: int = 0):
        self.domain = domain
        self.surface = domain.surface
        self.f = f
        self.strategy = strategy
        self.planar = DomainExtension(domain.tangent, f, strategy, seed=seed)

    @property
    def dim(self) -> int:
        return self.surface.dim

    @property
    def circle(self):
        return self.planar.circle

    def polar(self, lam, theta):
        return self.surface.from_tangent(self.planar.polar(lam, theta))

    def __call__(self, q):
        return self.surface.from_tangent(self.planar(self.surface.to_tangent(q)))


def extend_on_surface(domain: GeodesicDomain, f: CircleMap, strategy: str = "rotation", seed: int = 0) -> SurfaceExtension:
    return SurfaceExtension(domain, f, strategy, seed)
