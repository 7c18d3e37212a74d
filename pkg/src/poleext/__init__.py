"""Fixed-point-free extensions of boundary self-maps on star-shaped domains and surfaces with a pole."""

from .circlemap import FixedPointSet, LiftedCircleMap, fixed_points, make_circle_map
from .extend import DomainExtension, extend_disc_collapse0, extend_disc_rotation, extend_domain
from .geom2d import Circle, Disc, Polygon, Radial, min_enclosing_circle
from .manifold import Euclidean, GeodesicDomain, Hyperbolic, Paraboloid, SurfaceExtension, exp_o, log_o
from .verify import VerificationReport, boundary_error, estimate_degree, oscillation_profile, scan_fixed_points

__version__ = "0.1.0"

__all__ = [
    "Circle", "Disc", "DomainExtension", "Euclidean", "FixedPointSet", "GeodesicDomain", "Hyperbolic",
    "LiftedCircleMap", "Paraboloid", "Polygon", "Radial", "SurfaceExtension", "VerificationReport",
    "boundary_error", "estimate_degree", "exp_o", "extend_disc_collapse0", "extend_disc_rotation",
    "extend_domain", "fixed_points", "log_o", "make_circle_map", "min_enclosing_circle",
    "oscillation_profile", "scan_fixed_points",
]
