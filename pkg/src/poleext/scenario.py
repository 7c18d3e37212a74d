"""Scenario files: JSON schema, loading, and the end-to-end pipeline behind the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import jsonschema
import numpy as np

from .circlemap import LiftedCircleMap, fixed_points, make_circle_map
from .config import TOL, TWO_PI
from .expr import LiftError
from .extend import DomainExtension, NoFixedPointError, StrategyError, WitnessExtension
from .geom2d import Disc, DomainError, PlanarDomain, Polygon, Radial
from .manifold import Euclidean, GeodesicDomain, Hyperbolic, Paraboloid, PoleSurface, SurfaceExtension
from .verify import (
    VerificationReport,
    boundary_error,
    format_float,
    oscillation_profile,
    sampled_degree,
    scan_fixed_points,
)

_POINT = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "extension scenario",
    "type": "object",
    "additionalProperties": False,
    "required": ["domain", "boundary_map"],
    "properties": {
        "surface": {
            "type": "object",
            "additionalProperties": False,
            "required": ["model"],
            "properties": {
                "model": {"enum": ["euclidean", "hyperbolic", "paraboloid"]},
                "kappa": {"type": "number", "exclusiveMaximum": 0},
            },
        },
        "domain": {
            "oneOf": [
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["shape", "radius"],
                    "properties": {
                        "shape": {"const": "disc"},
                        "center": _POINT,
                        "radius": {"type": "number", "exclusiveMinimum": 0},
                        "anchor": _POINT,
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["shape", "vertices"],
                    "properties": {
                        "shape": {"const": "polygon"},
                        "vertices": {"type": "array", "items": _POINT, "minItems": 3},
                        "anchor": _POINT,
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["shape", "rho"],
                    "properties": {
                        "shape": {"const": "radial"},
                        "rho": {"type": "string"},
                        "anchor": _POINT,
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["rho_g"],
                    "properties": {"rho_g": {"type": "string"}},
                },
            ]
        },
        "boundary_map": {
            "type": "object",
            "additionalProperties": False,
            "required": ["lift"],
            "properties": {"lift": {"type": "string"}},
        },
        "strategy": {"enum": ["rotation", "collapse0", "witness"]},
        "witness": {
            "type": "object",
            "additionalProperties": False,
            "required": ["v"],
            "properties": {"v": _POINT},
        },
        "verify": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "grid_n": {"type": "integer", "minimum": 16},
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "deltas": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 1},
                "samples_n": {"type": "integer", "minimum": 2},
            },
        },
        "seed": {"type": "integer"},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "verification report",
    "type": "object",
    "required": ["degree", "boundary_error", "candidates", "oscillation", "flags"],
    "properties": {
        "degree": {"type": "integer"},
        "boundary_error": {"type": "number", "minimum": 0},
        "candidates": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["x", "y", "residual"],
                "properties": {
                    "x": {"type": "number"},
                    "y": {"type": "number"},
                    "z": {"type": "number"},
                    "residual": {"type": "number", "minimum": 0},
                    "margin": {"type": "number"},
                },
            },
        },
        "oscillation": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        },
        "flags": {"type": "array", "items": {"type": "string"}},
    },
}


class ScenarioError(ValueError):
    """The scenario is malformed or describes an invalid domain or map."""


@dataclass(frozen=True)
class Scenario:
    domain: dict
    lift: str
    surface: dict | None = None
    strategy: str = "rotation"
    witness_v: tuple[float, float] = (0.3, 0.0)
    grid_n: int = 256
    tol: float = 1e-6
    deltas: tuple[float, ...] = (1e-1, 1e-2, 1e-3)
    samples_n: int = 32
    seed: int = 0
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        try:
            jsonschema.validate(data, SCENARIO_SCHEMA)
        except jsonschema.ValidationError as exc:
            where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise ScenarioError(f"scenario invalid at {where}: {exc.message}") from None
        surface = data.get("surface")
        if surface and "kappa" in surface and surface["model"] != "hyperbolic":
            raise ScenarioError("kappa applies to the hyperbolic model only")
        if "rho_g" in data["domain"] and surface is None:
            raise ScenarioError("rho_g domains need a surface")
        verify = data.get("verify", {})
        deltas = tuple(float(d) for d in verify.get("deltas", cls.deltas))
        if any(b >= a for a, b in zip(deltas, deltas[1:])):
            raise ScenarioError("verify.deltas must be strictly decreasing")
        return cls(
            domain=data["domain"],
            lift=data["boundary_map"]["lift"],
            surface=surface,
            strategy=data.get("strategy", "rotation"),
            witness_v=tuple(data.get("witness", {}).get("v", cls.witness_v)),
            grid_n=int(verify.get("grid_n", cls.grid_n)),
            tol=float(verify.get("tol", cls.tol)),
            deltas=deltas,
            samples_n=int(verify.get("samples_n", cls.samples_n)),
            seed=int(data.get("seed", 0)),
            raw=data,
        )

    @classmethod
    def load(cls, path: str | Path) -> "Scenario":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ScenarioError(f"cannot read scenario {path}: {exc}") from None
        return cls.from_dict(data)

    def with_overrides(self, **kw) -> "Scenario":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def boundary_map(self) -> LiftedCircleMap:
        return make_circle_map(self.lift)

    def build_surface(self) -> PoleSurface | None:
        if self.surface is None:
            return None
        model = self.surface["model"]
        if model == "euclidean":
            return Euclidean()
        if model == "hyperbolic":
            return Hyperbolic(self.surface.get("kappa", -1.0))
        return Paraboloid()

    def build_planar(self, on_surface: bool = False) -> PlanarDomain:
        dom = self.domain
        anchor = dom.get("anchor")
        if on_surface:
            if anchor is not None and any(anchor):
                raise DomainError("on a surface the anchor is the pole (origin)")
            anchor = (0.0, 0.0)
        if "rho_g" in dom:
            return Radial(dom["rho_g"])
        shape = dom["shape"]
        if shape == "disc":
            return Disc(dom.get("center", (0.0, 0.0)), dom["radius"], anchor)
        if shape == "polygon":
            return Polygon(dom["vertices"], anchor)
        return Radial(dom["rho"], anchor)

    def build_domain(self):
        surface = self.build_surface()
        if surface is None:
            return self.build_planar()
        return GeodesicDomain(surface, self.build_planar(on_surface=True))

    def build_extension(self, domain, f):
        if self.strategy == "witness":
            if isinstance(domain, GeodesicDomain):
                raise StrategyError("the witness map is planar only")
            return WitnessExtension(domain, self.witness_v)
        if isinstance(domain, GeodesicDomain):
            return SurfaceExtension(domain, f, self.strategy, self.seed)
        return DomainExtension(domain, f, self.strategy, seed=self.seed)


@dataclass
class PipelineResult:
    scenario: Scenario
    f: LiftedCircleMap
    domain: object
    extension: object
    report: VerificationReport


def prepare(scenario: Scenario):
    """Parse the map, build the domain and extension; raises the errors the CLI maps to exit codes."""
    try:
        f = scenario.boundary_map()
        domain = scenario.build_domain()
    except (LiftError, DomainError, ValueError) as exc:
        raise ScenarioError(str(exc)) from None
    if not fixed_points(f):
        raise NoFixedPointError(f"boundary map {scenario.lift!r} has no fixed point")
    return f, domain, scenario.build_extension(domain, f)


def _flags(scenario: Scenario, domain, extension) -> list[str]:
    flags = []
    planar = domain.tangent if isinstance(domain, GeodesicDomain) else domain
    if scenario.strategy != "witness":
        flags.append("MEC-as-circumscribed")
        flags.append("image-in-boundary")
    if scenario.strategy == "rotation":
        flags.append("center-value-by-fiat")
    if isinstance(domain, GeodesicDomain) and domain.surface.name != "euclidean":
        flags.append("assumed-convex")
    if isinstance(planar, Polygon) and not planar.is_convex:
        flags.append("non-convex-polygon")
    return flags


def run_pipeline(scenario: Scenario) -> PipelineResult:
    f, domain, ext = prepare(scenario)
    surface = domain.surface if isinstance(domain, GeodesicDomain) else None
    scan = scan_fixed_points(ext, domain, scenario.grid_n, scenario.tol)
    osc = oscillation_profile(ext, domain.anchor, scenario.deltas, surface=surface)
    extra = {
        "lift_degree": f.degree,
        "domain_shape": domain.kind,
        "surface": surface.to_dict() if surface is not None else {"model": "plane"},
        "seed": scenario.seed,
        "grid_n": scenario.grid_n,
        "tol": scenario.tol,
    }
    if hasattr(ext, "circle"):
        extra["circle"] = {"center": [float(c) for c in ext.circle.center], "radius": float(ext.circle.radius)}
    if hasattr(ext, "planar") or hasattr(ext, "p"):
        extra["fixed_point"] = float((ext.planar if hasattr(ext, "planar") else ext).p)
    report = VerificationReport(
        map=scenario.lift,
        strategy=scenario.strategy,
        degree=sampled_degree(f),
        boundary_error=boundary_error(ext, f, domain),
        candidates=scan.candidates,
        oscillation=osc,
        flags=_flags(scenario, domain, ext) + scan.flags,
        extra=extra,
    )
    return PipelineResult(scenario, f, domain, ext, report)


def sample_rows(result: PipelineResult) -> tuple[list[str], list[list[str]]]:
    """Polar sample grid of interior points and their images, as CSV text cells."""
    k = result.scenario.samples_n
    lam = (np.arange(k) + 0.5) / k * (1.0 - TOL.boundary_margin)
    theta = TWO_PI * np.arange(k) / k
    L, T = np.meshgrid(lam, theta, indexing="ij")
    pts = result.domain.polar_to_point(L.ravel(), T.ravel())
    images = result.extension(pts)
    dim = pts.shape[-1]
    axes = "xyz"[:dim]
    header = list(axes) + ["F" + a for a in axes]
    rows = [[format_float(v) for v in np.concatenate([p, q])] for p, q in zip(pts, images)]
    return header, rows
