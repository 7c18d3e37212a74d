import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poleext.circlemap import canonicalize, circle_distance, fixed_points, make_circle_map
from poleext.extend import (
    DiscExtension,
    DomainExtension,
    NoFixedPointError,
    StrategyError,
    WitnessExtension,
    conjugate_boundary_map,
    extend_disc_collapse0,
    extend_disc_rotation,
    witness_identity_extension,
)
from poleext.geom2d import Disc, Polygon, Radial

SQUARE = [(-1, -1), (1, -1), (1, 1), (-1, 1)]
DOMAINS = {
    "disc": Disc(),
    "offdisc": Disc((0.2, -0.1), 1.5, anchor=(0.5, 0.3)),
    "square": Polygon(SQUARE),
    "lshape": Polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)], anchor=(0.5, 0.5)),
    "radial": Radial("2 + cos(t)"),
}


def test_disc_examples():
    ident = make_circle_map("t")
    assert extend_disc_rotation(ident, 0.0, 0.5, math.pi / 4) == pytest.approx(5 * math.pi / 4)
    assert extend_disc_rotation(ident, 0.0, 0.0, 1.234) == 0.0
    f0 = make_circle_map("0.8*sin(t)")
    assert extend_disc_collapse0(f0, 0.0, 0.5, math.pi / 2) == pytest.approx(0.4)
    assert extend_disc_collapse0(f0, 0.0, 0.0, 2.0) == 0.0


def test_collapse0_requires_degree_zero():
    with pytest.raises(StrategyError):
        DiscExtension("collapse0", make_circle_map("t"), 0.0)
    with pytest.raises(StrategyError):
        DiscExtension("spiral", make_circle_map("t"), 0.0)
    with pytest.raises(ValueError):
        DiscExtension("rotation", make_circle_map("t + 0.5*sin(t)"), 1.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 2 * math.pi), st.sampled_from(["t + 0.5*sin(t)", "2*t", "-t", "0.8*sin(t)", "3*t + 1"]))
def test_disc_extension_restricts_to_f(phi, lift):
    f = make_circle_map(lift)
    p = fixed_points(f).representative()
    for strat in (["rotation", "collapse0"] if f.degree == 0 else ["rotation"]):
        g = DiscExtension(strat, f, p)
        assert circle_distance(g(1.0, phi), f(phi)) <= 1e-9


def test_no_fixed_point_refused():
    with pytest.raises(NoFixedPointError):
        DomainExtension(Disc(), make_circle_map("t + 0.7"))


@pytest.mark.parametrize("name", list(DOMAINS))
def test_image_lies_on_boundary_and_anchor_goes_to_fixed_point(name):
    dom = DOMAINS[name]
    f = make_circle_map("t + 0.5*sin(t)")
    ext = DomainExtension(dom, f)
    rng = np.random.default_rng(0)
    q = dom.polar_to_point(rng.uniform(0.05, 0.95, 300), rng.uniform(0, 2 * math.pi, 300))
    img = ext(q)
    lam, _ = dom.point_to_polar(img)
    assert np.allclose(lam, 1.0, atol=1e-9)
    assert np.allclose(ext(dom.anchor), dom.boundary_point(ext.p), atol=1e-12)


@pytest.mark.parametrize("name", list(DOMAINS))
def test_conjugation_transports_fixed_points(name):
    dom = DOMAINS[name]
    f = make_circle_map("t + 0.5*sin(t)")
    fc = conjugate_boundary_map(dom, dom.circumscribed_circle(), f)
    for p in (0.0, math.pi):
        phi = fc.homeo.to_circle(p)
        assert circle_distance(fc(phi), phi) <= 1e-9
    assert fc.degree == 1


def test_square_conjugation_of_half_turn():
    sq = DOMAINS["square"]
    fc = conjugate_boundary_map(sq, sq.circumscribed_circle(), make_circle_map("t + pi"))
    phi = np.linspace(0, 2 * math.pi, 64)
    assert np.allclose(circle_distance(fc(phi), canonicalize(phi + math.pi)), 0, atol=1e-12)


def test_witness_map():
    z = np.array([[0.0, 0.0], [0.5, 0.0], [0.6, 0.8]])
    out = witness_identity_extension((0.3, 0.0), z)
    assert np.allclose(out - z, [[0.3, 0], [0.15, 0], [0, 0]])
    with pytest.raises(ValueError):
        witness_identity_extension((0.0, 0.0), z)
    w = WitnessExtension(Disc((1.0, 1.0), 2.0))
    assert np.allclose(w(np.array([1.0, 1.0])), (1.6, 1.0))
    with pytest.raises(StrategyError):
        WitnessExtension(DOMAINS["square"])
