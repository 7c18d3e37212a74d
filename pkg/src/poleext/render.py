"""Static SVG figures of an extension: boundary, enclosing circle, displacement arrows."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TWO_PI
from .geom2d import Polygon
from .manifold import GeodesicDomain


@dataclass(frozen=True)
class RenderSpec:
    path: str
    size: int = 512
    density: int = 16

    def __post_init__(self):
        if self.density < 4:
            raise ValueError("arrow density must be at least 4")
        if self.size < 16:
            raise ValueError("image size must be at least 16 px")


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Frame:
    """Affine map from model (x, y) to pixel coordinates with y pointing up."""

    def __init__(self, lo, hi, size: int, pad: float = 0.05):
        span = float(max(hi[0] - lo[0], hi[1] - lo[1])) * (1.0 + 2.0 * pad)
        mid = 0.5 * (np.asarray(lo) + np.asarray(hi))
        self.origin = mid - 0.5 * span
        self.scale = size / span
        self.size = size

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        x = (p[..., 0] - self.origin[0]) * self.scale
        y = self.size - (p[..., 1] - self.origin[1]) * self.scale
        return np.stack([x, y], axis=-1)


def _path(points, closed: bool) -> str:
    head, *rest = [f"{_fmt(x)} {_fmt(y)}" for x, y in points]
    return "M " + head + "".join(" L " + s for s in rest) + (" Z" if closed else "")


def _boundary_xy(domain, n: int = 512) -> tuple[np.ndarray, bool]:
    planar = domain.tangent if isinstance(domain, GeodesicDomain) else domain
    if isinstance(planar, Polygon) and not isinstance(domain, GeodesicDomain):
        return planar.vertices, True
    theta = TWO_PI * np.arange(n) / n
    return domain.boundary_point(theta)[..., :2], True


def _interior_points(domain, density: int) -> np.ndarray:
    k = density
    lam = (np.arange(k) + 0.5) / k
    theta = TWO_PI * np.arange(2 * k) / (2 * k)
    L, T = np.meshgrid(lam, theta, indexing="ij")
    return domain.polar_to_point(L.ravel(), T.ravel())


def render_svg(domain, extension, spec: RenderSpec) -> str:
    """SVG text; element order and number formatting are fixed, so output is byte-stable."""
    boundary, closed = _boundary_xy(domain)
    circle = None
    if not isinstance(domain, GeodesicDomain) and hasattr(extension, "circle"):
        circle = extension.circle
    pts = [boundary]
    if circle is not None:
        c = np.asarray(circle.center)
        pts.append(np.array([c - circle.radius, c + circle.radius]))
    allpts = np.concatenate(pts)
    frame = _Frame(allpts.min(axis=0), allpts.max(axis=0), spec.size)

    q = _interior_points(domain, spec.density)
    img = np.asarray(extension(q))
    a, b = frame(q[..., :2]), frame(img[..., :2])

    size = spec.size
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" "
        "markerHeight=\"6\" orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#c0392b\"/></marker></defs>",
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>',
    ]
    if circle is not None:
        cx, cy = frame(np.asarray(circle.center))
        out.append(
            f'<circle id="circumscribed" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(circle.radius * frame.scale)}" '
            f'data-center="{circle.center[0]!r} {circle.center[1]!r}" data-radius="{circle.radius!r}" '
            'fill="none" stroke="#7f8c8d" stroke-dasharray="4 3"/>'
        )
    out.append(f'<path id="boundary" d="{_path(frame(boundary), closed)}" fill="#ecf0f1" stroke="#2c3e50" stroke-width="1.5"/>')
    out.append('<g id="arrows" stroke="#c0392b" stroke-width="0.8">')
    for (x0, y0), (x1, y1) in zip(a, b):
        out.append(
            f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y1)}" marker-end="url(#head)"/>'
        )
    out.append("</g>")
    ax, ay = frame(np.asarray(domain.anchor)[:2])
    out.append(f'<circle id="anchor" cx="{_fmt(ax)}" cy="{_fmt(ay)}" r="2.5" fill="#2c3e50"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
