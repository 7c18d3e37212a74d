"""Acceptance criteria, one test per criterion, each logging a PASS/FAIL line."""

import json
import math
import random

import numpy as np

from poleext.circlemap import (
    NotACircleMapError,
    circle_distance,
    fixed_point_residual,
    fixed_points,
    make_circle_map,
)
from poleext.cli import main
from poleext.extend import DomainExtension
from poleext.geom2d import min_enclosing_circle
from poleext.manifold import (
    Euclidean,
    GeodesicDomain,
    Hyperbolic,
    Paraboloid,
    SurfaceExtension,
    exp_o,
    log_o,
    meridian_arclength,
    meridian_radius,
)
from poleext.verify import estimate_degree

from conftest import ACCEPTANCE_GRID, ACCEPTANCE_TOL, SCENARIOS
from oracles import brute_force_mec, meridian_arclength_quad, meridian_radius_bisect

SHAPES = ("disc", "square", "radial")
STRATEGIES = ("rotation", "collapse0")
MODELS = ("euclidean", "hyperbolic", "paraboloid")
PRODUCT = [f"{m}_{s}_{g}" for m in MODELS for s in SHAPES for g in STRATEGIES]
PLANAR = ["plane_disc_rotation", "plane_square_rotation", "plane_radial_rotation", "plane_lshape_rotation",
          "plane_shifted_disc_degree2", "plane_disc_collapse0"]


def record(log, name, ok, detail):
    log.append((name, bool(ok), detail))
    assert ok, f"{name}: {detail}"


def _grid_points(domain, n):
    lam = (np.arange(n) + 0.5) / n * (1.0 - 1e-6)
    theta = 2 * math.pi * np.arange(n) / n
    L, T = np.meshgrid(lam, theta, indexing="ij")
    return domain.polar_to_point(L.ravel(), T.ravel())


def test_c1_boundary_restriction(pipeline_results, acceptance_log):
    errs = {name: pipeline_results[name].report.boundary_error for name in PRODUCT}
    worst = max(errs, key=errs.get)
    record(acceptance_log, "C1 boundary restriction", errs[worst] <= 1e-9,
           f"{len(errs)} fixtures, max error {errs[worst]:.3e} ({worst}) <= 1e-9")


def test_c2_no_interior_fixed_point(pipeline_results, acceptance_log):
    counts = {name: len(r.report.candidates) for name, r in pipeline_results.items()}
    worst_margin, where = math.inf, None
    for name, r in pipeline_results.items():
        if r.scenario.strategy == "witness":
            continue
        q = _grid_points(r.domain, ACCEPTANCE_GRID)
        gap = np.linalg.norm(r.extension(q) - q, axis=-1) - np.asarray(r.domain.boundary_distance(q))
        if gap.min() < worst_margin:
            worst_margin, where = float(gap.min()), name
    bad = sorted(n for n, c in counts.items() if c)
    ok = not bad and worst_margin >= -1e-9
    record(acceptance_log, "C2 no interior fixed point", ok,
           f"{len(counts)} fixtures at grid {ACCEPTANCE_GRID}, tol {ACCEPTANCE_TOL:g}: "
           f"{sum(counts.values())} candidates {bad or ''}; min(|psi(q)-q| - dist(q, boundary)) = "
           f"{worst_margin:.3e} ({where}) >= -1e-9")


def test_c3_center_oscillation(pipeline_results, acceptance_log):
    rot = json.loads(pipeline_results["plane_disc_identity_rotation"].report.to_json())
    col = json.loads(pipeline_results["plane_disc_collapse0"].report.to_json())
    o_rot = dict(map(tuple, rot["oscillation"]))[1e-3]
    o_col = dict(map(tuple, col["oscillation"]))[1e-3]
    assert col["map"] == "0.8*sin(t)" and rot["map"] == "t"
    record(acceptance_log, "C3 center oscillation", o_rot >= 1.9 and o_col <= 0.05,
           f"rotation/identity osc(1e-3) = {o_rot:.6f} >= 1.9 (discontinuity at the center); "
           f"collapse0/0.8 sin osc(1e-3) = {o_col:.3e} <= 0.05")


def test_c4_enclosing_circle_oracle(acceptance_log):
    rng = random.Random(20261018)
    worst = 0.0
    for k in range(200):
        n = rng.randint(1, 12)
        pts = [(rng.uniform(-10, 10), rng.uniform(-10, 10)) for _ in range(n)]
        c = min_enclosing_circle(pts, seed=k)
        (bx, by), br = brute_force_mec(pts)
        worst = max(worst, abs(c.radius - br), abs(c.center[0] - bx), abs(c.center[1] - by))
    tri = min_enclosing_circle([(0, 0), (2, 0), (1, 3)])
    tri_err = max(abs(tri.center[0] - 1), abs(tri.center[1] - 4 / 3), abs(tri.radius - 5 / 3))
    record(acceptance_log, "C4 enclosing circle oracle", worst <= 1e-9 and tri_err <= 1e-9,
           f"200 random sets, max deviation from brute force {worst:.3e}; triangle fixture error {tri_err:.3e}")


def test_c5_exp_log_fidelity(acceptance_log):
    rng = np.random.default_rng(5)
    r = 5.0 * np.sqrt(rng.uniform(0, 1, 10_000))
    theta = rng.uniform(0, 2 * math.pi, 10_000)
    v = np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)
    roundtrip = {}
    for surface in (Euclidean(), Hyperbolic(-1.0), Paraboloid()):
        back = log_o(surface, exp_o(surface, r, theta))
        w = np.stack([back.r * np.cos(back.theta), back.r * np.sin(back.theta)], axis=-1)
        roundtrip[surface.name] = float(np.max(np.linalg.norm(w - v, axis=-1)))
    s_grid = np.linspace(0.0, 10.0, 1001)
    rho = meridian_radius(s_grid)
    forward = max(abs(meridian_arclength_quad(float(p)) - s) for p, s in zip(rho, s_grid))
    s_sub = np.linspace(0.0, 10.0, 21)
    inverse = max(abs(float(meridian_radius(s)) - meridian_radius_bisect(float(s))) for s in s_sub)
    spot = abs(float(meridian_arclength(1.0)) - meridian_arclength_quad(1.0))
    ok = max(roundtrip.values()) <= 1e-10 and forward <= 1e-10 and inverse <= 1e-10 and spot <= 1e-9
    record(acceptance_log, "C5 exp/log fidelity", ok,
           "roundtrip " + ", ".join(f"{k} {e:.1e}" for k, e in roundtrip.items())
           + f"; Newton vs quadrature {max(forward, inverse):.1e}; s(1) = {float(meridian_arclength(1.0)):.12f} "
           f"(oracle gap {spot:.1e})")


def test_c6_degree_machinery(acceptance_log):
    lifts = {-2: "-2*t + 0.3*sin(t)", -1: "-t", 0: "0.8*sin(t)", 1: "t + 0.5*sin(t)", 2: "2*t", 3: "3*t + cos(t)"}
    theta = 2 * math.pi * np.arange(1024) / 1024
    got = {d: estimate_degree(make_circle_map(s)(theta)) for d, s in lifts.items()}
    lift_deg = {d: make_circle_map(s).degree for d, s in lifts.items()}
    rejected = []
    for s in ("0.5*t", "t^2", "sin(t/2)", "1.5*t + sin(t)"):
        try:
            make_circle_map(s)
        except NotACircleMapError:
            rejected.append(s)
    ok = all(got[d] == d == lift_deg[d] for d in lifts) and len(rejected) == 4
    record(acceptance_log, "C6 degree machinery", ok,
           f"sampled degrees {[got[d] for d in sorted(got)]} for {sorted(lifts)}; {len(rejected)}/4 non-circle lifts rejected")


def test_c7_fixed_point_gate(tmp_path, write_scenario, capsys, acceptance_log):
    disc = {"shape": "disc", "radius": 1.0}
    gate = main(["extend", "--scenario", write_scenario({"domain": disc, "boundary_map": {"lift": "t + 0.7"}}),
                 "--out", str(tmp_path / "o")])
    code = main(["fixed-points", "--scenario",
                 write_scenario({"domain": disc, "boundary_map": {"lift": "t + 0.5*sin(t)"}}, "b.json")])
    printed = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    f = make_circle_map("t + 0.5*sin(t)")
    fps = fixed_points(f)
    res = max(float(fixed_point_residual(f, p)) for p in fps.points)
    set_ok = len(printed) == 2 and abs(printed[0]) <= 1e-9 and abs(printed[1] - math.pi) <= 1e-9
    ok = gate == 2 and code == 0 and set_ok and res <= 1e-9 and not (tmp_path / "o" / "report.json").exists()
    record(acceptance_log, "C7 fixed-point gate", ok,
           f"'t + 0.7' extend exit {gate}; 't + 0.5*sin(t)' fixed set {printed} (exit {code}), max residual {res:.1e}")


def test_c8_conjugation_transport(pipeline_results, acceptance_log):
    worst_fix, worst_rt = 0.0, 0.0
    for name in PLANAR:
        r = pipeline_results[name]
        ext = r.extension
        h = ext.homeo
        for p in fixed_points(r.f).points:
            phi = h.to_circle(p)
            worst_fix = max(worst_fix, float(circle_distance(ext.f_conj(phi), phi)))
        b = r.domain.boundary_point(2 * math.pi * np.arange(1024) / 1024)
        worst_rt = max(worst_rt, float(np.max(np.linalg.norm(h.inverse(h.forward(b)) - b, axis=-1))))
    record(acceptance_log, "C8 conjugation transport", worst_fix <= 1e-9 and worst_rt <= 1e-9,
           f"{len(PLANAR)} planar fixtures: fixed-point transport error {worst_fix:.1e}, "
           f"boundary roundtrip error {worst_rt:.1e}")


def test_c9_determinism(tmp_path, capsys, acceptance_log):
    names = ["plane_disc_rotation", "plane_lshape_rotation", "paraboloid_geodesic_disc"]
    same = []
    for name in names:
        blobs = []
        for k in range(2):
            out = tmp_path / name / str(k)
            assert main(["extend", "--scenario", str(SCENARIOS / f"{name}.json"), "--out", str(out), "--seed", "11"]) == 0
            assert main(["render", "--scenario", str(SCENARIOS / f"{name}.json"), "--out", str(out / "f.svg"),
                         "--seed", "11"]) == 0
            blobs.append([(out / f).read_bytes() for f in ("report.json", "samples.csv", "f.svg")])
        same.append(blobs[0] == blobs[1])
    capsys.readouterr()
    record(acceptance_log, "C9 determinism", all(same),
           f"{sum(same)}/{len(names)} scenarios byte-identical across runs (report.json, samples.csv, SVG)")


def test_surface_euclidean_matches_plane(pipeline_results):
    for s in SHAPES:
        for g in STRATEGIES:
            a = pipeline_results[f"plane_{s}_{g}"]
            b = pipeline_results[f"euclidean_{s}_{g}"]
            assert isinstance(b.extension, SurfaceExtension) and isinstance(a.extension, DomainExtension)
            q = _grid_points(a.domain, 64)
            assert np.array_equal(a.extension(q), b.extension(q))
            assert isinstance(b.domain, GeodesicDomain)
