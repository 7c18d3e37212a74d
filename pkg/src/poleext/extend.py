"""Extensions of boundary self-maps to the whole domain.

Two disc strategies are provided:

``rotation``
    ``G(t, phi) = f(phi + 2 pi t)`` for ``t > 0`` and ``G(0, .) = p``, where
    ``p`` is a fixed point of ``f``. Ring ``t`` is rotated by ``2 pi t`` and
    pushed radially to the boundary before ``f`` is applied.
``collapse0``
    ``G(t, phi) = p + t (F(phi) - p)`` on a lift normalised so ``F(p) = p``.
    Only meaningful for degree-0 maps, where the lift is periodic.

A planar domain is handled by conjugating with the radial projection onto its
circumscribed circle: a point ``anchor + lam R(theta) u(theta)`` is sent to
polar coordinates ``(lam, to_circle(theta))`` of the unit disc, the disc
extension is applied, and the resulting circle angle is pulled back onto the
domain boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circlemap import CircleMap, canonicalize, fixed_point_residual, fixed_points
from .config import TOL, TWO_PI
from .geom2d import BoundaryHomeo, Circle, PlanarDomain

STRATEGIES = ("rotation", "collapse0")


class StrategyError(ValueError):
    """The requested strategy does not apply to this boundary map."""


class NoFixedPointError(ValueError):
    """The boundary map has no fixed point, so the extension hypothesis fails."""


@dataclass(frozen=True)
class RotationSchedule:
    """Linear schedule ``i(t) = 2 pi t``: increasing, ``i(0) = 0``, ``i(1) = 2 pi``."""

    def __call__(self, t):
        return TWO_PI * np.asarray(t, dtype=float)


@dataclass(frozen=True)
class DiscExtension:
    strategy: str
    f: CircleMap
    p: float
    schedule: RotationSchedule = field(default_factory=RotationSchedule)
    _shift: float = field(default=0.0, init=False, repr=False)

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise StrategyError(f"unknown strategy {self.strategy!r}")
        if fixed_point_residual(self.f, self.p) > TOL.fixed_point:
            raise ValueError(f"{self.p!r} is not a fixed point of the boundary map")
        if self.strategy == "collapse0":
            if self.f.degree != 0:
                raise StrategyError(f"collapse0 needs a degree-0 map, got degree {self.f.degree}")
            k = round((float(self.f.lift(self.p)) - self.p) / TWO_PI)
            object.__setattr__(self, "_shift", TWO_PI * k)

    def __call__(self, t, phi):
        """Image angle of the disc point with radius ``t`` and angle ``phi``."""
        t, phi = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(phi, dtype=float))
        if self.strategy == "rotation":
            out = np.where(t == 0.0, self.p, canonicalize(self.f.lift(phi + self.schedule(t))))
        else:
            out = canonicalize(self.p + t * (self.f.lift(phi) - self._shift - self.p))
        out = np.asarray(out)
        return float(out) if out.ndim == 0 else out


def extend_disc_rotation(f: CircleMap, p: float, t, phi):
    return DiscExtension("rotation", f, p)(t, phi)


def extend_disc_collapse0(f: CircleMap, p: float, t, phi):
    return DiscExtension("collapse0", f, p)(t, phi)


class ConjugatedMap:
    """Circle map ``to_circle o f o from_circle`` induced on the enclosing circle."""

    def __init__(self, homeo: BoundaryHomeo, f: CircleMap):
        self.homeo = homeo
        self.f = f
        self.degree = f.degree

    def lift(self, phi):
        return self.homeo.to_circle_lift(self.f.lift(self.homeo.from_circle_lift(phi)))

    def __call__(self, phi):
        return canonicalize(self.lift(phi))


def conjugate_boundary_map(domain: PlanarDomain, circle: Circle, f: CircleMap) -> ConjugatedMap:
    return ConjugatedMap(BoundaryHomeo(domain, circle), f)


class DomainExtension:
    """``psi = (boundary homeo)^-1 o G' o h`` on a star-shaped planar domain.

    ``f`` is a circle map in the boundary parametrization about the anchor.
    The image of every point lies on the domain boundary.
    """

    def __init__(self, domain: PlanarDomain, f: CircleMap, strategy: str = "rotation",
                 circle: Circle | None = None, seed: int = 0):
        fps = fixed_points(f)
        if not fps:
            raise NoFixedPointError("boundary map has no fixed point")
        if strategy == "collapse0" and f.degree != 0:
            raise StrategyError(f"collapse0 needs a degree-0 map, got degree {f.degree}")
        self.domain = domain
        self.f = f
        self.strategy = strategy
        self.circle = circle if circle is not None else domain.circumscribed_circle(seed)
        self.homeo = BoundaryHomeo(domain, self.circle)
        self.p = fps.representative()
        self.f_conj = ConjugatedMap(self.homeo, f)
        self.inner = DiscExtension(strategy, self.f_conj, float(self.homeo.to_circle(self.p)))

    @property
    def dim(self) -> int:
        return 2

    def image_angle(self, lam, theta):
        """Boundary parameter of the image of the point with polar coords ``(lam, theta)``."""
        return self.homeo.from_circle(self.inner(lam, self.homeo.to_circle(theta)))

    def polar(self, lam, theta) -> np.ndarray:
        return self.domain.boundary_point(self.image_angle(lam, theta))

    def __call__(self, q) -> np.ndarray:
        lam, theta = self.domain.point_to_polar(q)
        return self.polar(lam, theta)


def extend_domain(domain: PlanarDomain, f: CircleMap, strategy: str = "rotation", seed: int = 0) -> DomainExtension:
    return DomainExtension(domain, f, strategy, seed=seed)


def witness_identity_extension(v, z):
    """``z + (1 - |z|) v``: a disc self-map fixing the boundary with no interior fixed point."""
    v = np.asarray(v, dtype=float)
    nv = float(np.hypot(v[0], v[1]))
    if nv == 0.0 or nv > 1.0:
        raise ValueError("witness direction needs 0 < |v| <= 1")
    z = np.asarray(z, dtype=float)
    nz = np.hypot(z[..., 0], z[..., 1])
    if np.any(nz > 1.0 + 1e-12):
        raise ValueError("z must lie in the closed unit disc")
    return z + (1.0 - nz)[..., None] * v


class WitnessExtension:
    """:func:`witness_identity_extension` transported to a disc domain by its similarity."""

    strategy = "witness"

    def __init__(self, domain, v=(0.3, 0.0)):
        if getattr(domain, "kind", None) != "disc":
            raise StrategyError("the witness map is defined on disc domains only")
        self.domain = domain
        self.v = np.asarray(v, dtype=float)
        witness_identity_extension(self.v, np.zeros(2))  # validates v

    @property
    def dim(self) -> int:
        return 2

    def __call__(self, q):
        c, a = self.domain.center, self.domain.radius
        z = (np.asarray(q, dtype=float) - c) / a
        return c + a * witness_identity_extension(self.v, z)
