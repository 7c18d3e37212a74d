import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poleext.geom2d import (
    BoundaryHomeo,
    Circle,
    Disc,
    DomainError,
    GeometryError,
    Polygon,
    Radial,
    circle_exit,
    curve_distance,
    domain_boundary_samples,
    min_enclosing_circle,
    polygon_kernel,
    project_to_circle,
    ray_boundary_intersection,
)

from oracles import brute_force_mec

SQUARE = [(-1, -1), (1, -1), (1, 1), (-1, 1)]
L_SHAPE = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]


def test_mec_triangle():
    c = min_enclosing_circle([(0, 0), (2, 0), (1, 3)])
    assert c.center == pytest.approx((1.0, 4.0 / 3.0), abs=1e-12)
    assert c.radius == pytest.approx(5.0 / 3.0, abs=1e-12)


def test_mec_degenerate_inputs():
    assert min_enclosing_circle([(3, 4)]) == Circle((3.0, 4.0), 0.0)
    c = min_enclosing_circle([(0, 0), (1, 1), (2, 2), (3, 3)])
    assert c.center == pytest.approx((1.5, 1.5))
    assert c.radius == pytest.approx(math.hypot(3, 3) / 2)
    with pytest.raises(ValueError):
        min_enclosing_circle([])


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.floats(-100, 100), st.floats(-100, 100)), min_size=1, max_size=10), st.integers(0, 9))
def test_mec_matches_brute_force(points, seed):
    c = min_enclosing_circle(points, seed)
    (bx, by), br = brute_force_mec(points)
    assert c.radius == pytest.approx(br, abs=1e-7 * (1 + br))
    for p in points:
        assert math.dist(c.center, p) <= c.radius * (1 + 1e-9) + 1e-9


def test_mec_seed_independent_result():
    rng = random.Random(3)
    pts = [(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(40)]
    radii = {round(min_enclosing_circle(pts, s).radius, 12) for s in range(5)}
    assert len(radii) == 1


def test_disc_queries():
    d = Disc((1.0, 2.0), 3.0)
    assert np.allclose(d.boundary_point(0.0), (4.0, 2.0))
    lam, th = d.point_to_polar(np.array([1.0, 3.5]))
    assert lam == pytest.approx(0.5) and th == pytest.approx(math.pi / 2)
    assert d.boundary_distance(np.array([1.0, 2.0])) == pytest.approx(3.0)
    off = Disc((0, 0), 1.0, anchor=(0.5, 0.0))
    assert off.boundary_radius(math.pi) == pytest.approx(1.5)
    assert off.boundary_radius(0.0) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        Disc((0, 0), 1.0, anchor=(1.0, 0.0))


def test_square_examples():
    sq = Polygon(SQUARE)
    assert sq.is_convex
    assert np.allclose(sq.anchor, (0, 0))
    c = sq.circumscribed_circle()
    assert c.radius == pytest.approx(math.sqrt(2))
    h = BoundaryHomeo(sq, c)
    assert h.forward(np.array([1.0, 1.0])) == pytest.approx(math.pi / 4)
    assert np.allclose(h.inverse(0.0), (1.0, 0.0))
    assert np.allclose(ray_boundary_intersection(sq, 0.0).point, (1.0, 0.0))


def test_clockwise_input_is_reoriented():
    cw = Polygon(SQUARE[::-1])
    assert np.allclose(cw.boundary_point(0.0), (1.0, 0.0))


def test_l_shape_star_kernel():
    poly = Polygon(L_SHAPE, anchor=(0.5, 0.5))
    assert not poly.is_convex
    k = polygon_kernel(L_SHAPE)
    assert k[:, 0].max() <= 1 + 1e-12 and k[:, 1].max() <= 1 + 1e-12
    th = np.linspace(0, 2 * math.pi, 500, endpoint=False)
    assert np.all(poly.ray_hit_count(th) == 1)
    with pytest.raises(DomainError):
        Polygon(L_SHAPE, anchor=(1.8, 0.5))


def test_non_star_and_non_simple_rejected():
    comb = [(0, 0), (5, 0), (5, 3), (4, 3), (4, 1), (3, 1), (3, 3), (2, 3), (2, 1), (1, 1), (1, 3), (0, 3)]
    with pytest.raises(DomainError):
        Polygon(comb)
    with pytest.raises(DomainError):
        Polygon([(0, 0), (1, 1), (1, 0), (0, 1)])


def test_radial_domain():
    r = Radial("2 + cos(t)")
    assert np.allclose(r.boundary_point(0.0), (3.0, 0.0))
    c = r.circumscribed_circle()
    pts = domain_boundary_samples(r, 8192)
    assert np.all(np.hypot(*(pts - c.center).T) <= c.radius * (1 + 1e-12))
    with pytest.raises(DomainError):
        Radial("cos(t)")
    with pytest.raises(DomainError):
        Radial("2 + cos(t)", anchor=(0.1, 0))


def test_project_to_circle_example():
    d = Disc()
    assert project_to_circle(d, Circle((0.0, 0.0), 1.0), (0.5, 0.5)) == pytest.approx(math.pi / 4)
    sq = Polygon(SQUARE)
    c = sq.circumscribed_circle()
    with pytest.raises(GeometryError):
        project_to_circle(sq, c, (0.0, 0.0))
    with pytest.raises(GeometryError):
        project_to_circle(sq, c, (3.0, 0.0))


@pytest.mark.parametrize("domain", [Disc(), Disc((0.2, -0.1), 1.5, anchor=(0.5, 0.3)), Polygon(SQUARE),
                                    Polygon(L_SHAPE, anchor=(0.5, 0.5)), Radial("2 + cos(t)")],
                         ids=["disc", "offdisc", "square", "lshape", "radial"])
def test_boundary_homeo_roundtrip(domain):
    h = BoundaryHomeo(domain, domain.circumscribed_circle())
    th = 2 * math.pi * np.arange(1024) / 1024
    back = h.from_circle(h.to_circle(th))
    assert np.max(np.abs((back - th + math.pi) % (2 * math.pi) - math.pi)) <= 1e-9
    pts = h.inverse(h.to_circle(th))
    assert np.max(np.linalg.norm(pts - domain.boundary_point(th), axis=-1)) <= 1e-9
    lift = h.to_circle_lift(th)
    assert np.all(np.diff(lift) > 0)


def test_polar_roundtrip_and_containment():
    poly = Polygon(L_SHAPE, anchor=(0.5, 0.5))
    rng = np.random.default_rng(0)
    lam = rng.uniform(0.01, 0.99, 500)
    th = rng.uniform(0, 2 * math.pi, 500)
    q = poly.polar_to_point(lam, th)
    lam2, th2 = poly.point_to_polar(q)
    assert np.allclose(lam, lam2, atol=1e-12) and np.allclose(th, th2, atol=1e-12)
    assert np.all(poly.contains(q))


def test_curve_distance_against_disc():
    d = Disc((0.0, 0.0), 2.0)
    pts = np.random.default_rng(1).uniform(-1.5, 1.5, (200, 2))
    assert np.allclose(curve_distance(pts, d.boundary_point), d.boundary_distance(pts), atol=1e-10)


def test_circle_exit_outside_raises():
    with pytest.raises(GeometryError):
        circle_exit((3.0, 0.0), Circle((0.0, 0.0), 1.0), 0.0)
