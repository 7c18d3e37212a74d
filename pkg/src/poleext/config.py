"""Named numerical tolerances, collected in one place so tests and code agree."""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Tolerances:
    # circle maps
    analysis_grid: int = 4096
    degree: float = 1e-9
    fixed_point: float = 1e-9
    bisection_width: float = 1e-12

    # planar geometry
    anchor_margin: float = 1e-9
    ray_nudge: float = 1e-12
    mec_containment: float = 1e-9
    radial_mec_samples: int = 1024
    radial_containment_samples: int = 8192
    roundtrip: float = 1e-9

    # surfaces
    newton_max_iter: int = 100
    newton_rtol: float = 1e-15

    # verification
    boundary_margin: float = 1e-6
    scan_safety: float = 8.0
    scan_min_diameter: float = 1e-8
    scan_max_cells: int = 4_000_000
    identity_fraction: float = 0.5
    boundary_samples: int = 1024
    curve_distance_samples: int = 4096


TOL = Tolerances()
