"""Numerical checks for extension maps: fixed-point scans, boundary error,
oscillation near a point, and degree of sampled circle maps."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .circlemap import wrap_pi
from .config import TOL, TWO_PI, Tolerances

SelfMap = Callable[[np.ndarray], np.ndarray]


class DegreeAmbiguityError(ValueError):
    """Consecutive samples jump by half a turn or more, so unwrapping is ambiguous."""


@dataclass(frozen=True)
class FixedPointCandidate:
    location: tuple[float, ...]
    residual: float
    margin: float  # distance to the domain boundary


@dataclass
class ScanResult:
    candidates: list[FixedPointCandidate]
    flags: list[str] = field(default_factory=list)
    evaluations: int = 0
    unresolved: int = 0

    def __len__(self) -> int:
        return len(self.candidates)


def _residual(F: SelfMap, pts: np.ndarray) -> np.ndarray:
    return np.linalg.norm(F(pts) - pts, axis=-1)


def _pairwise(a: np.ndarray) -> np.ndarray:
    """Pairwise distances along axis -2 (shape ``(..., k, k)``)."""
    return np.linalg.norm(a[..., :, None, :] - a[..., None, :, :], axis=-1)


_PI, _PJ = np.triu_indices(5, 1)


def scan_fixed_points(F: SelfMap, domain, grid_n: int = 512, tol: float = 1e-6,
                      config: Tolerances = TOL) -> ScanResult:
    """Search the interior of ``domain`` for points with ``|F(z) - z| <= tol``.

    ``domain`` must offer ``polar_to_point(lam, theta)``, ``anchor`` and
    ``boundary_distance``. Rings sit at ``lam = (i + 1/2) / n * (1 - margin)``;
    the innermost ring is joined to the anchor by wedge cells.
    Each polar cell is sampled at its corners and centre; a cell is split in
    four while ``min residual - safety * diameter * slope <= tol``, where
    ``slope`` is the largest sampled difference quotient of the residual.
    """
    if grid_n < 16:
        raise ValueError("grid_n must be at least 16")
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = grid_n
    lam_max = 1.0 - config.boundary_margin
    rings = (np.arange(n) + 0.5) / n * lam_max
    dth = TWO_PI / n
    angles = np.arange(n) * dth
    L, T = np.meshgrid(rings, angles, indexing="ij")
    grid_pts = domain.polar_to_point(L, T)
    grid_res = _residual(F, grid_pts)
    anchor = np.asarray(domain.anchor, dtype=float)
    anchor_res = float(_residual(F, anchor[None, :])[0])
    evaluations = n * n + 1
    flags: list[str] = []
    found: list[tuple[np.ndarray, float]] = []

    if anchor_res <= tol:
        found.append((anchor, anchor_res))

    if np.count_nonzero(grid_res <= tol) > config.identity_fraction * n * n:
        flags.append("identity-like")
        mask = grid_res <= tol
        return ScanResult(_collect(list(zip(grid_pts[mask], grid_res[mask])) + found, domain),
                          flags, evaluations, 0)

    # coarse cells between consecutive rings, plus wedges from the anchor to the first ring
    ext_rings = np.concatenate([[0.0], rings])
    ext_pts = np.concatenate([np.broadcast_to(anchor, (1, n, anchor.shape[-1])), grid_pts])
    ext_res = np.concatenate([np.full((1, n), anchor_res), grid_res])
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    i, j = i.ravel(), j.ravel()
    jn = (j + 1) % n
    lam0, lam1 = ext_rings[i], ext_rings[i + 1]
    th0 = angles[j]
    th1 = th0 + dth
    corner_pts = np.stack([ext_pts[i, j], ext_pts[i, jn], ext_pts[i + 1, j], ext_pts[i + 1, jn]], axis=1)
    corner_res = np.stack([ext_res[i, j], ext_res[i, jn], ext_res[i + 1, j], ext_res[i + 1, jn]], axis=1)

    mid_pts = domain.polar_to_point(0.5 * (lam0 + lam1), 0.5 * (th0 + th1))
    mid_res = _residual(F, mid_pts)
    evaluations += len(lam0)

    unresolved = 0
    while len(lam0):
        pts = np.concatenate([corner_pts, mid_pts[:, None, :]], axis=1)
        res = np.concatenate([corner_res, mid_res[:, None]], axis=1)
        dz = np.sqrt(np.sum((pts[:, _PI] - pts[:, _PJ]) ** 2, axis=-1))
        dr = np.abs(res[:, _PI] - res[:, _PJ])
        with np.errstate(divide="ignore", invalid="ignore"):
            slope = np.where(dz > 0, dr / dz, 0.0).max(axis=1)
        diam = dz.max(axis=1)
        rmin = res.min(axis=1)

        hit = rmin <= tol
        for k in np.nonzero(hit)[0]:
            best = int(np.argmin(res[k]))
            found.append((pts[k, best], float(res[k, best])))

        bound = rmin - config.scan_safety * diam * slope
        open_ = ~hit & (bound <= tol)
        small = diam <= config.scan_min_diameter
        unresolved += int(np.count_nonzero(open_ & small))
        refine = np.nonzero(open_ & ~small)[0]
        if 4 * len(refine) > config.scan_max_cells:
            refine = np.sort(refine[np.argsort(bound[refine], kind="stable")[: config.scan_max_cells // 4]])
            if "refinement-truncated" not in flags:
                flags.append("refinement-truncated")
        if not len(refine):
            break

        # split each cell in four, reusing its corners and centre; cells whose
        # inner edge is the anchor are triangles and split in three instead,
        # since halving the angle at the apex only duplicates the anchor
        l0, l1, t0, t1 = lam0[refine], lam1[refine], th0[refine], th1[refine]
        lm, tm = 0.5 * (l0 + l1), 0.5 * (t0 + t1)
        c_pts, c_res = corner_pts[refine], corner_res[refine]
        m_pts, m_res = mid_pts[refine], mid_res[refine]
        edge_pts = np.stack([domain.polar_to_point(l0, tm), domain.polar_to_point(l1, tm),
                             domain.polar_to_point(lm, t0), domain.polar_to_point(lm, t1)], axis=1)
        edge_res = _residual(F, edge_pts)
        evaluations += 4 * len(l0)
        e_l0, e_l1, e_t0, e_t1 = (edge_pts[:, k] for k in range(4))
        r_l0, r_l1, r_t0, r_t1 = (edge_res[:, k] for k in range(4))
        apex = l0 == 0.0
        q, a = ~apex, apex
        lam0 = np.concatenate([l0[q], l0[q], lm[q], lm[q], l0[a], lm[a], lm[a]])
        lam1 = np.concatenate([lm[q], lm[q], l1[q], l1[q], lm[a], l1[a], l1[a]])
        th0 = np.concatenate([t0[q], tm[q], t0[q], tm[q], t0[a], t0[a], tm[a]])
        th1 = np.concatenate([tm[q], t1[q], tm[q], t1[q], t1[a], tm[a], t1[a]])
        corner_pts = np.concatenate([
            np.stack([c_pts[q, 0], e_l0[q], e_t0[q], m_pts[q]], axis=1),
            np.stack([e_l0[q], c_pts[q, 1], m_pts[q], e_t1[q]], axis=1),
            np.stack([e_t0[q], m_pts[q], c_pts[q, 2], e_l1[q]], axis=1),
            np.stack([m_pts[q], e_t1[q], e_l1[q], c_pts[q, 3]], axis=1),
            np.stack([c_pts[a, 0], c_pts[a, 1], e_t0[a], e_t1[a]], axis=1),
            np.stack([e_t0[a], m_pts[a], c_pts[a, 2], e_l1[a]], axis=1),
            np.stack([m_pts[a], e_t1[a], e_l1[a], c_pts[a, 3]], axis=1),
        ])
        corner_res = np.concatenate([
            np.stack([c_res[q, 0], r_l0[q], r_t0[q], m_res[q]], axis=1),
            np.stack([r_l0[q], c_res[q, 1], m_res[q], r_t1[q]], axis=1),
            np.stack([r_t0[q], m_res[q], c_res[q, 2], r_l1[q]], axis=1),
            np.stack([m_res[q], r_t1[q], r_l1[q], c_res[q, 3]], axis=1),
            np.stack([c_res[a, 0], c_res[a, 1], r_t0[a], r_t1[a]], axis=1),
            np.stack([r_t0[a], m_res[a], c_res[a, 2], r_l1[a]], axis=1),
            np.stack([m_res[a], r_t1[a], r_l1[a], c_res[a, 3]], axis=1),
        ])
        mid_pts = domain.polar_to_point(0.5 * (lam0 + lam1), 0.5 * (th0 + th1))
        mid_res = _residual(F, mid_pts)
        evaluations += len(lam0)

    if unresolved:
        flags.append("unresolved-cells")
    return ScanResult(_collect(found, domain), flags, evaluations, unresolved)


def _collect(found, domain) -> list[FixedPointCandidate]:
    if not found:
        return []
    locs = np.array([np.asarray(p, dtype=float) for p, _ in found])
    res = np.array([r for _, r in found])
    keys = np.round(locs, 12)
    _, first = np.unique(keys, axis=0, return_index=True)
    first = np.sort(first)
    locs, res = locs[first], res[first]
    margins = np.asarray(domain.boundary_distance(locs), dtype=float).reshape(-1)
    order = np.lexsort(tuple(locs[:, k] for k in reversed(range(locs.shape[1]))) + (res,))
    return [
        FixedPointCandidate(tuple(float(x) for x in locs[k]), float(res[k]), float(margins[k]))
        for k in order
    ]


def boundary_error(F: SelfMap, f, domain, n: int = TOL.boundary_samples) -> float:
    """Largest distance between ``F(b(theta))`` and ``b(f(theta))`` over ``n`` boundary samples."""
    if n < 3:
        raise ValueError("need at least 3 samples")
    theta = TWO_PI * np.arange(n) / n
    b = domain.boundary_point(theta)
    expected = domain.boundary_point(f(theta))
    return float(np.max(np.linalg.norm(F(b) - expected, axis=-1)))


@dataclass(frozen=True)
class OscillationProfile:
    center: tuple[float, ...]
    entries: tuple[tuple[float, float], ...]

    def at(self, delta: float) -> float:
        for d, osc in self.entries:
            if d == delta:
                return osc
        raise KeyError(delta)


def ball_offsets(m: int) -> np.ndarray:
    """Unit-ball layout: the centre, then two interleaved rings at radius 1 and 1/2."""
    outer = (m - 1 + 1) // 2
    inner = m - 1 - outer
    a = TWO_PI * np.arange(outer) / outer
    b = TWO_PI * (np.arange(inner) + 0.5) / max(inner, 1)
    ring1 = np.stack([np.cos(a), np.sin(a)], axis=-1)
    ring2 = 0.5 * np.stack([np.cos(b), np.sin(b)], axis=-1)
    return np.concatenate([np.zeros((1, 2)), ring1, ring2])


def oscillation_profile(F: SelfMap, at, deltas: Sequence[float], m: int = 64, surface=None) -> OscillationProfile:
    """Max pairwise output distance over ``m`` samples of each ``delta``-ball around ``at``.

    With ``surface`` the ball is laid out in tangent coordinates at the pole
    chart and pushed to the surface.
    """
    deltas = [float(d) for d in deltas]
    if any(d <= 0 for d in deltas) or any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("deltas must be positive and strictly decreasing")
    if m < 32:
        raise ValueError("need at least 32 samples per ball")
    at = np.asarray(at, dtype=float)
    base = surface.to_tangent(at) if surface is not None else at
    offsets = ball_offsets(m)
    entries = []
    for d in deltas:
        pts = base + d * offsets
        if surface is not None:
            pts = surface.from_tangent(pts)
        out = F(pts)
        entries.append((d, float(_pairwise(out).max())))
    return OscillationProfile(tuple(float(x) for x in at), tuple(entries))


def estimate_degree(samples) -> int:
    """Winding number of angles sampled at ``theta_k = 2 pi k / n`` (closed loop)."""
    s = np.asarray(samples, dtype=float)
    if len(s) < 64:
        raise ValueError("need at least 64 samples")
    steps = wrap_pi(np.diff(np.append(s, s[0])))
    if np.any(np.abs(steps) >= math.pi * (1 - 1e-12)):
        raise DegreeAmbiguityError("a sampled step reaches half a turn; sample more densely")
    return int(round(float(np.sum(steps)) / TWO_PI))


def sampled_degree(f, n: int = TOL.boundary_samples) -> int:
    return estimate_degree(f(TWO_PI * np.arange(n) / n))


# --------------------------------------------------------------------------
# reports


@dataclass
class VerificationReport:
    map: str
    strategy: str
    degree: int
    boundary_error: float
    candidates: list[FixedPointCandidate]
    oscillation: OscillationProfile
    flags: list[str]
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        identity_like = "identity-like" in self.flags
        out = {
            "map": self.map,
            "strategy": self.strategy,
            "degree": int(self.degree),
            "boundary_error": float(self.boundary_error),
            "candidate_count": len(self.candidates),
            "candidates": [] if identity_like else [_candidate_dict(c) for c in self.candidates],
            "oscillation": [[d, o] for d, o in self.oscillation.entries],
            "flags": sorted(set(self.flags)),
        }
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        return dumps(self.to_dict())


def _candidate_dict(c: FixedPointCandidate) -> dict:
    d = dict(zip("xyz", c.location))
    d["residual"] = c.residual
    d["margin"] = c.margin
    return d


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x!r}")
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with sorted keys and every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{dumps(str(k))}: {dumps(obj[k], indent, _level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return {True: "true", False: "false", None: "null"}[obj]
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    raise TypeError(f"cannot serialise {type(obj).__name__}")
