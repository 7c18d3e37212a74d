"""Circle self-maps represented by lifts: degree and fixed points.

A map ``f: S -> S`` is stored as a real function ``F`` with
``F(theta + 2 pi) = F(theta) + 2 pi d``; ``d`` is the degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from .config import TOL, TWO_PI
from .expr import LiftError, LiftExpr, evaluate, parse_lift, substitute


class NotACircleMapError(LiftError):
    """The lift does not wind an integer number of times."""


def canonicalize(x):
    """Reduce angle(s) to ``[0, 2 pi)``; values that round up to ``2 pi`` go to 0."""
    r = np.mod(np.asarray(x, dtype=float), TWO_PI)
    r = np.where(r >= TWO_PI, 0.0, r)
    return float(r) if r.ndim == 0 else r


def circle_distance(a, b):
    """Angular distance on the circle, in ``[0, pi]``."""
    d = np.abs(np.mod(np.asarray(a, dtype=float) - np.asarray(b, dtype=float), TWO_PI))
    d = np.minimum(d, TWO_PI - d)
    return float(d) if d.ndim == 0 else d


def wrap_pi(x):
    """Reduce to ``(-pi, pi]``."""
    r = math.pi - np.mod(math.pi - np.asarray(x, dtype=float), TWO_PI)
    return float(r) if r.ndim == 0 else r


class CircleMap(Protocol):
    degree: int

    def lift(self, theta): ...

    def __call__(self, theta): ...


@dataclass(frozen=True)
class LiftedCircleMap:
    expr: LiftExpr
    degree: int
    source: str = field(default="", compare=False)

    def lift(self, theta):
        return evaluate(self.expr, theta)

    def __call__(self, theta):
        return eval_map(self, theta)

    def __str__(self) -> str:
        return self.source or str(self.expr)


def make_circle_map(lift: LiftExpr | str, grid: int = TOL.analysis_grid) -> LiftedCircleMap:
    """Validate ``lift`` on a grid of ``[0, 2 pi]`` and attach its degree."""
    source = lift if isinstance(lift, str) else ""
    expr = parse_lift(lift) if isinstance(lift, str) else lift
    theta = np.linspace(0.0, TWO_PI, grid, endpoint=False)
    steps = evaluate(expr, theta + TWO_PI) - evaluate(expr, theta)
    winding = steps[0] / TWO_PI
    degree = int(round(winding))
    # F(theta + 2 pi) - F(theta) must equal 2 pi d everywhere, not just at 0
    bad = np.abs(steps - TWO_PI * degree) > TOL.degree * (1.0 + np.abs(steps))
    if np.any(bad):
        at = float(theta[np.argmax(bad)])
        raise NotACircleMapError(
            f"F(theta + 2pi) - F(theta) = {float(steps[np.argmax(bad)]):.12g} at theta = {at:.6g}; "
            f"not a constant multiple of 2pi, so not a circle map"
        )
    return LiftedCircleMap(expr, degree, source)


def compose(outer: LiftedCircleMap, inner: LiftedCircleMap) -> LiftedCircleMap:
    """Lift of ``outer o inner``; its degree is the product of the degrees."""
    return make_circle_map(substitute(outer.expr, inner.expr))


def eval_map(m: CircleMap, theta):
    return canonicalize(m.lift(theta))


@dataclass(frozen=True)
class FixedPointSet:
    kind: str  # "discrete", "all-fixed" or "empty"
    points: tuple[float, ...] = ()

    def __bool__(self) -> bool:
        return self.kind != "empty"

    def representative(self) -> float:
        """A fixed point to anchor an extension on."""
        if self.kind == "empty":
            raise ValueError("map has no fixed point")
        return self.points[0] if self.points else 0.0


def fixed_point_residual(m: CircleMap, theta):
    """Distance of ``F(theta) - theta`` to the nearest multiple of 2 pi."""
    g = np.asarray(m.lift(theta), dtype=float) - np.asarray(theta, dtype=float)
    r = np.abs(g - TWO_PI * np.round(g / TWO_PI))
    return float(r) if r.ndim == 0 else r


def _bisect(g, a: float, b: float, ga: float) -> float:
    while b - a > TOL.bisection_width:
        mid = 0.5 * (a + b)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (gm < 0) == (ga < 0):
            a, ga = mid, gm
        else:
            b = mid
    return 0.5 * (a + b)


def fixed_points(m: CircleMap, tol: float = TOL.fixed_point, grid: int = TOL.analysis_grid) -> FixedPointSet:
    if tol <= 0:
        raise ValueError("tol must be positive")
    theta = np.linspace(0.0, TWO_PI, grid + 1)
    diff = np.asarray(m.lift(theta)) - theta
    near = np.abs(diff - TWO_PI * np.round(diff / TWO_PI))
    if near.max() <= tol:
        return FixedPointSet("all-fixed")

    kmax = int(math.ceil((np.abs(diff).max() + TWO_PI) / TWO_PI))
    roots: list[float] = []
    for k in range(-kmax, kmax + 1):
        gk = diff - TWO_PI * k
        small = np.abs(gk) <= tol
        # runs of near-zero samples count once, at their smallest |g|
        j = 0
        while j < len(gk):
            if small[j]:
                end = j
                while end + 1 < len(gk) and small[end + 1]:
                    end += 1
                roots.append(theta[j + int(np.argmin(np.abs(gk[j : end + 1])))])
                j = end + 1
            else:
                j += 1
        for j in np.nonzero((gk[:-1] * gk[1:] < 0) & ~small[:-1] & ~small[1:])[0]:

            def g(x, k=k):
                return float(m.lift(x)) - x - TWO_PI * k

            root = _bisect(g, float(theta[j]), float(theta[j + 1]), float(gk[j]))
            if fixed_point_residual(m, root) <= tol:
                roots.append(root)

    if not roots:
        return FixedPointSet("empty")
    canon = sorted(canonicalize(np.array(roots)).tolist())
    merged: list[float] = []
    for r in canon:
        if merged and r - merged[-1] <= 10 * tol:
            continue
        merged.append(r)
    if len(merged) > 1 and TWO_PI - merged[-1] + merged[0] <= 10 * tol:
        merged.pop()
    return FixedPointSet("discrete", tuple(merged))
