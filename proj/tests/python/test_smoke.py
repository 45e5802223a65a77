import json
import math
import os
import tempfile

import pytest

import cflow


def unit_circle(n=128):
    return cflow.circle_curve(1.0, n)


def test_circle_area_and_length():
    c = unit_circle(256)
    assert cflow.signed_area(c) == pytest.approx(128 * math.sin(2 * math.pi / 256), rel=1e-12)
    assert cflow.length(c) == pytest.approx(512 * math.sin(math.pi / 256), rel=1e-12)
    assert cflow.validate(c) == ""


def test_curve_from_python_list():
    c = cflow.ClosedCurve([(0, 0), (1, 0), (1, 1), (0.5, 1.5), (0, 1), (-0.5, 0.8), (-0.6, 0.4), (-0.3, 0.1)])
    assert len(c) == 8
    assert c.orientation == cflow.Orientation.counterclockwise
    assert cflow.classify_point(c, (0.5, 0.5)) == "interior"


def test_invalid_curve_reported():
    bowtie = cflow.ClosedCurve([(0, 0), (1, 1), (1, 0), (0, 1), (0.2, 0.5), (0.1, 0.3), (0.05, 0.2), (0.01, 0.1)])
    assert cflow.validate(bowtie) != ""
    with pytest.raises(ValueError):
        cflow.evolve(bowtie, 0.01)


def test_distances_of_concentric_circles():
    a, b = cflow.circle_curve(1.0, 64), cflow.circle_curve(2.0, 64)
    assert cflow.hausdorff(a, b)["value"] == pytest.approx(1.0, abs=1e-12)
    assert cflow.frechet_closed(a, b)["value"] == pytest.approx(1.0, abs=2e-3)


def test_evolve_follows_circle_law():
    s = cflow.evolve(unit_circle(128), 0.1)
    assert s.alive
    r = cflow.circle_oracle(1.0, 0.1)
    assert r == pytest.approx(math.sqrt(0.8))
    radii = [math.hypot(x, y) for x, y in s.curve.vertices]
    assert max(abs(q - r) for q in radii) < 2e-3


def test_intersections_of_shifted_circles():
    rec = cflow.intersect_curves(unit_circle(), cflow.circle_curve(1.0, 128, (1.0, 0.0)))
    assert len(rec["points"]) == 2
    assert rec["kinds"] == ["transversal", "transversal"]


def test_corpus_and_file_round_trip():
    stars = cflow.generate_corpus("stars", 7)
    assert stars == cflow.generate_corpus("stars", 7)
    c = stars["star_k3_a0.2"]
    with tempfile.TemporaryDirectory() as d:
        p = os.path.join(d, "c.json")
        cflow.write_curve(c, p)
        with open(p) as f:
            assert json.load(f)["orientation"] == "ccw"
        assert cflow.read_curve(p) == c
    with pytest.raises(ValueError):
        cflow.generate_corpus("nope")


def test_eta_family_member_is_a_jordan_curve():
    g = unit_circle(128)
    T = cflow.family_horizon(g)
    p = cflow.make_eta_params(g, g[0], 0.5, T)
    assert p.E_radius > 2 * math.sqrt(2 * T) + 2 * p.r
    eta = cflow.build_eta(g, p)
    assert cflow.validate(eta) == ""
