"""Planar domains star-shaped about an anchor, enclosing circles, radial projection."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .circlemap import canonicalize, wrap_pi
from .config import TOL, TWO_PI
from .expr import LiftExpr, evaluate, parse_lift


class DomainError(ValueError):
    """Invalid domain description or anchor."""


class GeometryError(ValueError):
    """A geometric operation was called outside its domain of definition."""


def _unit(theta):
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def _cross(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


# --------------------------------------------------------------------------
# enclosing circle


@dataclass(frozen=True)
class Circle:
    center: tuple[float, float]
    radius: float

    def contains(self, p, eps: float = TOL.mec_containment) -> bool:
        return math.dist(self.center, p) <= self.radius + eps * (1.0 + self.radius)

    def point(self, phi):
        return np.asarray(self.center) + self.radius * _unit(phi)


def _diameter_circle(a, b) -> Circle:
    cx, cy = (a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0
    return Circle((cx, cy), max(math.dist((cx, cy), a), math.dist((cx, cy), b)))


def _circumcircle(a, b, c) -> Circle | None:
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2.0
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2.0
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if d == 0.0:
        return None
    x = ox + ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
    y = oy + ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
    return Circle((x, y), max(math.dist((x, y), a), math.dist((x, y), b), math.dist((x, y), c)))


def _inside(c: Circle | None, p) -> bool:
    return c is not None and math.dist(c.center, p) <= c.radius * (1.0 + 1e-14)


def _circle_two_boundary(points, p, q) -> Circle:
    circ = _diameter_circle(p, q)
    left: Circle | None = None
    right: Circle | None = None
    left_side = right_side = 0.0
    px, py = p
    qx, qy = q

    def side(x, y):
        return (qx - px) * (y - py) - (qy - py) * (x - px)

    for r in points:
        if _inside(circ, r):
            continue
        cross = side(*r)
        c = _circumcircle(p, q, r)
        if c is None:
            continue
        c_side = side(*c.center)
        if cross > 0.0 and (left is None or c_side > left_side):
            left, left_side = c, c_side
        elif cross < 0.0 and (right is None or c_side < right_side):
            right, right_side = c, c_side
    if left is None and right is None:
        return circ
    if left is None:
        return right
    if right is None:
        return left
    return left if left.radius <= right.radius else right


def _circle_one_boundary(points, p) -> Circle:
    c = Circle((p[0], p[1]), 0.0)
    for i, q in enumerate(points):
        if not _inside(c, q):
            c = _diameter_circle(p, q) if c.radius == 0.0 else _circle_two_boundary(points[: i + 1], p, q)
    return c


def min_enclosing_circle(points: Sequence[Sequence[float]], seed: int = 0) -> Circle:
    """Smallest circle containing ``points`` (randomized incremental, expected O(n)).

    The shuffle uses its own ``random.Random(seed)``, so results are reproducible.
    """
    pts = [(float(x), float(y)) for x, y in points]
    if not pts:
        raise ValueError("min_enclosing_circle needs at least one point")
    random.Random(seed).shuffle(pts)
    c: Circle | None = None
    for i, p in enumerate(pts):
        if c is None or not _inside(c, p):
            c = _circle_one_boundary(pts[: i + 1], p)
    return c


# --------------------------------------------------------------------------
# domains


def curve_distance(points, curve: Callable[[np.ndarray], np.ndarray], n: int = TOL.curve_distance_samples,
                   iterations: int = 40) -> np.ndarray:
    """Distance from each point to a closed curve ``theta -> curve(theta)``.

    Nearest of ``n`` samples first, then golden-section search on the bracket
    around it.
    """
    pts = np.asarray(points, dtype=float)
    flat = pts.reshape(-1, pts.shape[-1])
    h = TWO_PI / n
    grid = np.arange(n) * h
    _, idx = cKDTree(curve(grid)).query(flat)
    lo = grid[idx] - h
    hi = grid[idx] + h
    invphi = (math.sqrt(5.0) - 1.0) / 2.0

    def dist(th):
        return np.linalg.norm(curve(th) - flat, axis=-1)

    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = dist(x1), dist(x2)
    for _ in range(iterations):
        left = f1 < f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        new_x = np.where(left, hi - invphi * (hi - lo), lo + invphi * (hi - lo))
        new_f = dist(new_x)
        x1, x2, f1, f2 = (
            np.where(left, new_x, x2),
            np.where(left, x1, new_x),
            np.where(left, new_f, f2),
            np.where(left, f1, new_f),
        )
    best = np.minimum(np.minimum(f1, f2), np.linalg.norm(curve(grid[idx]) - flat, axis=-1))
    return best.reshape(pts.shape[:-1])


class PlanarDomain:
    """A closed region star-shaped about ``anchor``.

    Subclasses provide ``boundary_radius(theta)``: the distance from the anchor
    to the boundary along direction ``theta``.
    """

    kind = "abstract"
    dim = 2

    anchor: np.ndarray

    def boundary_radius(self, theta) -> np.ndarray:
        raise NotImplementedError

    def boundary_point(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return self.anchor + self.boundary_radius(theta)[..., None] * _unit(theta)

    def polar_to_point(self, lam, theta) -> np.ndarray:
        lam, theta = np.broadcast_arrays(np.asarray(lam, dtype=float), np.asarray(theta, dtype=float))
        return self.anchor + (lam * self.boundary_radius(theta))[..., None] * _unit(theta)

    def point_to_polar(self, q) -> tuple[np.ndarray, np.ndarray]:
        """Inverse of :meth:`polar_to_point`; the anchor maps to ``(0, 0)``."""
        d = np.asarray(q, dtype=float) - self.anchor
        rad = np.hypot(d[..., 0], d[..., 1])
        theta = canonicalize(np.arctan2(d[..., 1], d[..., 0]))
        return rad / self.boundary_radius(theta), theta

    def contains(self, q, eps: float = 1e-9):
        lam, _ = self.point_to_polar(q)
        return lam <= 1.0 + eps

    def boundary_distance(self, q) -> np.ndarray:
        raise NotImplementedError

    def circumscribed_circle(self, seed: int = 0) -> Circle:
        raise NotImplementedError


class Disc(PlanarDomain):
    kind = "disc"

    def __init__(self, center=(0.0, 0.0), radius: float = 1.0, anchor=None):
        if not radius > 0:
            raise DomainError("disc radius must be positive")
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        self.anchor = self.center.copy() if anchor is None else np.asarray(anchor, dtype=float)
        if np.linalg.norm(self.anchor - self.center) > self.radius - TOL.anchor_margin:
            raise DomainError("anchor must lie strictly inside the disc")

    def boundary_radius(self, theta):
        u = _unit(theta)
        w = self.anchor - self.center
        uw = u @ w
        return -uw + np.sqrt(uw * uw - w @ w + self.radius**2)

    def boundary_distance(self, q):
        d = np.asarray(q, dtype=float) - self.center
        return np.abs(self.radius - np.hypot(d[..., 0], d[..., 1]))

    def circumscribed_circle(self, seed: int = 0) -> Circle:
        return Circle((float(self.center[0]), float(self.center[1])), self.radius)

    def __repr__(self) -> str:
        return f"Disc(center={self.center.tolist()}, radius={self.radius}, anchor={self.anchor.tolist()})"


def _clip_halfplane(poly: list[np.ndarray], a: np.ndarray, b: np.ndarray) -> list[np.ndarray]:
    """Keep the part of convex ``poly`` left of the directed line a->b."""
    e = b - a
    out: list[np.ndarray] = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        sp, sq = _cross(e, p - a), _cross(e, q - a)
        if sp >= 0:
            out.append(p)
        if (sp >= 0) != (sq >= 0):
            out.append(p + (q - p) * (sp / (sp - sq)))
    return out


def polygon_kernel(vertices) -> np.ndarray:
    """Kernel of a counterclockwise simple polygon as a convex vertex array (possibly empty)."""
    v = np.asarray(vertices, dtype=float)
    lo, hi = v.min(axis=0) - 1.0, v.max(axis=0) + 1.0
    poly = [np.array([lo[0], lo[1]]), np.array([hi[0], lo[1]]), np.array([hi[0], hi[1]]), np.array([lo[0], hi[1]])]
    for i in range(len(v)):
        poly = _clip_halfplane(poly, v[i], v[(i + 1) % len(v)])
        if not poly:
            break
    return np.array(poly).reshape(-1, 2)


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return np.sign(_cross(b - a, c - a))

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True

    def on_seg(a, b, c):
        return np.all(np.minimum(a, b) <= c) and np.all(c <= np.maximum(a, b))

    return bool(
        (o1 == 0 and on_seg(p1, p2, q1))
        or (o2 == 0 and on_seg(p1, p2, q2))
        or (o3 == 0 and on_seg(q1, q2, p1))
        or (o4 == 0 and on_seg(q1, q2, p2))
    )


class Polygon(PlanarDomain):
    kind = "polygon"

    def __init__(self, vertices, anchor=None):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise DomainError("polygon needs at least 3 vertices (x, y)")
        area = 0.5 * np.sum(_cross(v, np.roll(v, -1, axis=0)))
        if area == 0:
            raise DomainError("degenerate polygon")
        if area < 0:
            v = v[::-1].copy()
        n = len(v)
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if _segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
                    raise DomainError("polygon is not simple")
        self.vertices = v
        self.edges = np.roll(v, -1, axis=0) - v
        self.kernel = polygon_kernel(v)
        if len(self.kernel) < 3:
            raise DomainError("polygon has an empty kernel, so it is not star-shaped")
        self.anchor = self.kernel.mean(axis=0) if anchor is None else np.asarray(anchor, dtype=float)
        margin = self.anchor_margin(self.anchor)
        if margin < TOL.anchor_margin:
            raise DomainError(f"anchor is not in the interior of the kernel (margin {margin:.3g})")

    def anchor_margin(self, point) -> float:
        """Signed distance of ``point`` to the nearest edge line (positive inside the kernel)."""
        rel = np.asarray(point, dtype=float) - self.vertices
        return float(np.min(_cross(self.edges, rel) / np.linalg.norm(self.edges, axis=1)))

    @property
    def is_convex(self) -> bool:
        turns = _cross(self.edges, np.roll(self.edges, -1, axis=0))
        return bool(np.all(turns >= 0) or np.all(turns <= 0))

    def _ray_params(self, theta):
        u = _unit(theta)[..., None, :]
        w = self.vertices - self.anchor
        den = _cross(u, self.edges)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = _cross(w, self.edges) / den
            lam = _cross(w, u) / den
        ok = (den != 0) & (lam >= -1e-12) & (lam <= 1 + 1e-12) & (s > 0)
        return np.where(ok, s, np.inf)

    def boundary_radius(self, theta):
        theta = np.asarray(theta, dtype=float)
        r = self._ray_params(theta).min(axis=-1)
        missed = ~np.isfinite(r)
        if np.any(missed):
            nudged = self._ray_params(theta + TOL.ray_nudge).min(axis=-1)
            r = np.where(missed, nudged, r)
        return r

    def ray_hit_count(self, theta, merge: float = 1e-9) -> np.ndarray:
        """Number of distinct boundary crossings along each ray from the anchor."""
        s = np.sort(self._ray_params(theta), axis=-1)
        finite = np.isfinite(s)
        distinct = finite[..., :1].astype(int)
        with np.errstate(invalid="ignore"):
            gaps = (np.diff(s, axis=-1) > merge * (1 + np.abs(s[..., 1:]))) & finite[..., 1:]
        return distinct[..., 0] + gaps.sum(axis=-1)

    def boundary_distance(self, q):
        q = np.asarray(q, dtype=float)[..., None, :]
        rel = q - self.vertices
        lens2 = np.sum(self.edges**2, axis=1)
        t = np.clip(np.sum(rel * self.edges, axis=-1) / lens2, 0.0, 1.0)
        d = np.linalg.norm(rel - t[..., None] * self.edges, axis=-1)
        return d.min(axis=-1)

    def circumscribed_circle(self, seed: int = 0) -> Circle:
        return min_enclosing_circle(self.vertices.tolist(), seed)

    def __repr__(self) -> str:
        return f"Polygon(vertices={self.vertices.tolist()}, anchor={self.anchor.tolist()})"


class Radial(PlanarDomain):
    """Region ``{r (cos t, sin t) : 0 <= r <= rho(t)}``, anchored at the origin."""

    kind = "radial"

    def __init__(self, rho: LiftExpr | str, anchor=None):
        self.source = rho if isinstance(rho, str) else str(rho)
        self.rho = parse_lift(rho) if isinstance(rho, str) else rho
        self.anchor = np.zeros(2)
        if anchor is not None and np.any(np.asarray(anchor, dtype=float) != 0.0):
            raise DomainError("radial domains are anchored at the origin")
        values = evaluate(self.rho, np.linspace(0.0, TWO_PI, TOL.analysis_grid))
        if values.min() <= 0:
            raise DomainError("radial function must be positive")
        if abs(values[-1] - values[0]) > TOL.degree:
            raise DomainError("radial function must be 2pi-periodic")

    def boundary_radius(self, theta):
        return np.asarray(evaluate(self.rho, theta))

    def boundary_distance(self, q):
        return curve_distance(q, self.boundary_point)

    def circumscribed_circle(self, seed: int = 0) -> Circle:
        samples = domain_boundary_samples(self, TOL.radial_mec_samples)
        c = min_enclosing_circle(samples.tolist(), seed)
        # sampled MEC can miss the boundary between samples; grow it to cover a denser sampling
        dense = domain_boundary_samples(self, TOL.radial_containment_samples)
        reach = float(np.max(np.linalg.norm(dense - np.asarray(c.center), axis=1)))
        return Circle(c.center, max(c.radius, reach))

    def __repr__(self) -> str:
        return f"Radial(rho={self.source!r})"


# --------------------------------------------------------------------------
# operations on domains


@dataclass(frozen=True)
class RayHit:
    point: tuple[float, float]
    theta: float
    nudged: bool = False


def domain_boundary_samples(domain: PlanarDomain, n: int) -> np.ndarray:
    if n < 3:
        raise ValueError("need at least 3 samples")
    return domain.boundary_point(TWO_PI * np.arange(n) / n)


def ray_boundary_intersection(domain: PlanarDomain, theta: float) -> RayHit:
    """Boundary point on the ray from the anchor in direction ``theta``."""
    theta = float(theta)
    nudged = False
    if isinstance(domain, Polygon) and not np.isfinite(domain._ray_params(theta).min()):
        nudged = True
        theta += TOL.ray_nudge
    p = domain.boundary_point(theta)
    return RayHit((float(p[0]), float(p[1])), theta, nudged)


def circle_exit(anchor, circle: Circle, theta) -> np.ndarray:
    """Ray parameter at which the ray from ``anchor`` leaves ``circle``."""
    u = _unit(theta)
    w = np.asarray(anchor, dtype=float) - np.asarray(circle.center)
    uw = u @ w
    ww = float(w @ w)
    if ww > circle.radius**2 * (1.0 + 1e-12):
        raise GeometryError("anchor lies outside the circle")
    disc = np.maximum(uw * uw - ww + circle.radius**2, 0.0)
    return -uw + np.sqrt(disc)


def project_to_circle(domain: PlanarDomain, circle: Circle, q) -> float:
    """Angle (about the circle center) where the ray anchor->q meets ``circle``."""
    q = np.asarray(q, dtype=float)
    d = q - domain.anchor
    dist = float(np.hypot(d[0], d[1]))
    if dist == 0.0:
        raise GeometryError("direction from the anchor to q is undefined at the anchor")
    if not domain.contains(q):
        raise GeometryError("q lies outside the domain")
    theta = math.atan2(d[1], d[0])
    s = float(circle_exit(domain.anchor, circle, theta))
    p = domain.anchor + s * d / dist
    return canonicalize(math.atan2(p[1] - circle.center[1], p[0] - circle.center[0]))


class BoundaryHomeo:
    """The boundary bijection between ``domain``'s boundary and ``circle``.

    Angle-level maps: ``to_circle(theta)`` sends the boundary parameter
    (direction about the anchor) to the circle angle (about the circle
    center); ``from_circle`` is its inverse. Both have degree one, and the
    ``*_lift`` variants are continuous real lifts of them.
    """

    def __init__(self, domain: PlanarDomain, circle: Circle):
        self.domain = domain
        self.circle = circle
        self._center = np.asarray(circle.center, dtype=float)
        circle_exit(domain.anchor, circle, 0.0)

    def to_circle(self, theta):
        theta = np.asarray(theta, dtype=float)
        p = self.domain.anchor + circle_exit(self.domain.anchor, self.circle, theta)[..., None] * _unit(theta)
        d = p - self._center
        return canonicalize(np.arctan2(d[..., 1], d[..., 0]))

    def from_circle(self, phi):
        d = self.circle.point(phi) - self.domain.anchor
        return canonicalize(np.arctan2(d[..., 1], d[..., 0]))

    def to_circle_lift(self, x):
        return np.asarray(x) + wrap_pi(self.to_circle(x) - np.asarray(x))

    def from_circle_lift(self, x):
        return np.asarray(x) + wrap_pi(self.from_circle(x) - np.asarray(x))

    def forward(self, b) -> np.ndarray:
        """Boundary point(s) -> circle angle(s)."""
        d = np.asarray(b, dtype=float) - self.domain.anchor
        return self.to_circle(np.arctan2(d[..., 1], d[..., 0]))

    def inverse(self, phi) -> np.ndarray:
        """Circle angle(s) -> boundary point(s)."""
        return self.domain.boundary_point(self.from_circle(phi))


def boundary_homeo(domain: PlanarDomain, circle: Circle) -> tuple[Callable, Callable]:
    h = BoundaryHomeo(domain, circle)
    return h.forward, h.inverse
