#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cflow/error.hpp"
#include "cflow/geometry.hpp"
#include "cflow/metrics.hpp"
#include "generators.hpp"

using namespace cflow;

namespace {

ClosedCurve unit_square_ccw() {
  // Eight vertices so that the square passes the vertex-count invariant.
  return ClosedCurve({{0, 0}, {0.5, 0}, {1, 0}, {1, 0.5}, {1, 1}, {0.5, 1}, {0, 1}, {0, 0.5}});
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("validate accepts a regular polygon") {
  CHECK(validate(gen::ngon(64, 1.0)).ok());
}

TEST_CASE("validate reports a figure eight as not simple") {
  std::vector<Point2> v;
  for (int i = 0; i < 16; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 16.0;
    v.push_back({std::sin(t), std::sin(t) * std::cos(t)});
  }
  const ValidationReport r = validate(ClosedCurve(v));
  CHECK(r.has(ViolationKind::not_simple));
}

TEST_CASE("validate reports a repeated vertex as a degenerate edge") {
  const ClosedCurve c({{0, 0}, {0.5, 0}, {1, 0}, {1, 0}, {1, 1}, {0.5, 1}, {0, 1}, {0, 0.5}});
  CHECK(validate(c).has(ViolationKind::degenerate_edge));
}

TEST_CASE("validate reports too few vertices and non-finite input") {
  CHECK(validate(ClosedCurve({{0, 0}, {1, 0}, {1, 1}, {0, 1}})).has(ViolationKind::too_few_vertices));
  ClosedCurve c({{0, 0}, {0.5, 0}, {1, 0}, {1, NAN}, {1, 1}, {0.5, 1}, {0, 1}, {0, 0.5}});
  CHECK(validate(c).has(ViolationKind::non_finite_coordinate));
}

TEST_CASE("validate flags a contradictory orientation flag") {
  const ClosedCurve sq = unit_square_ccw();
  const ClosedCurve lying(std::vector<Point2>(sq.vertices().begin(), sq.vertices().end()), Orientation::clockwise);
  CHECK(validate(lying).has(ViolationKind::orientation_mismatch));
}

TEST_CASE("signed area of the unit square") {
  CHECK(signed_area(unit_square_ccw()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(signed_area(reversed(unit_square_ccw())) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(unit_square_ccw().orientation() == Orientation::counterclockwise);
  CHECK(reversed(unit_square_ccw()).orientation() == Orientation::clockwise);
}

TEST_CASE("signed area of a regular 256-gon matches the closed form") {
  // Oracle: n triangles of area sin(2 pi / n) / 2.
  const double oracle = 128.0 * std::sin(2.0 * std::numbers::pi / 256.0);
  CHECK(oracle == doctest::Approx(3.1412772509327729).epsilon(1e-15));
  const double a = signed_area(gen::ngon(256, 1.0));
  CHECK(a == doctest::Approx(oracle).epsilon(1e-13));
  CHECK(std::abs(a - std::numbers::pi) < 1e-3);
}

TEST_CASE("curvature vector on regular polygons") {
  const ClosedCurve c2 = gen::ngon(256, 2.0);
  for (std::size_t i : {0u, 17u, 128u, 255u}) {
    const Point2 k = curvature_vector(c2, i);
    CHECK(std::abs(norm(k) - 0.5) <= 1e-3);
    // Points at the centre.
    CHECK(dot(normalized(k), normalized(-c2[i])) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const ClosedCurve c1 = gen::ngon(256, 1.0);
  CHECK(std::abs(norm(curvature_vector(c1, 3)) - 1.0) <= 1e-3);
}

TEST_CASE("curvature vector vanishes on a straight triple") {
  const Point2 k = curvature_vector(unit_square_ccw(), 1);
  CHECK(k.x == 0.0);
  CHECK(k.y == 0.0);
}

TEST_CASE("curvature error is nonincreasing as the polygon is refined") {
  double prev = 1.0;
  for (std::size_t n : {64u, 128u, 256u}) {
    const ClosedCurve c = gen::ngon(n, 1.3);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(norm(curvature_vector(c, i)) - 1.0 / 1.3));
    CHECK((err <= prev || err <= 1e-12));
    prev = err;
  }
}

TEST_CASE("classify_point on the 64-gon") {
  const ClosedCurve c = gen::ngon(64, 1.0);
  CHECK(classify_point(c, {0, 0}, 0.0) == Side::interior);
  CHECK(classify_point(c, {3, 0}, 0.0) == Side::exterior);
  CHECK(classify_point(c, {1, 0}, 1e-6) == Side::boundary);
  // Ray through a vertex.
  CHECK(classify_point(c, {0.5, 0}, 0.0) == Side::interior);
  CHECK(classify_point(c, {-2, 0}, 0.0) == Side::exterior);
}

TEST_CASE("winding number agrees with the side classification") {
  gen::Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const ClosedCurve c = gen::any_star(rng);
    for (int k = 0; k < 40; ++k) {
      const Point2 p = gen::point_in_box(rng, 3.5);
      if (distance_to_curve(c, p) < 1e-9) continue;
      const Side s = classify_point(c, p, 0.0);
      const int w = winding_number(c, p);
      CHECK(w == (s == Side::interior ? 1 : 0));
      CHECK(winding_number(reversed(c), p) == -w);
    }
  }
}

TEST_CASE("dilate_contains") {
  const ClosedCurve c = gen::ngon(256, 1.0);
  CHECK(dilate_contains(c, {1.05, 0}, 0.1));
  CHECK_FALSE(dilate_contains(c, {1.2, 0}, 0.1));
  for (std::size_t i = 0; i < c.size(); i += 31) CHECK(dilate_contains(c, c[i], 0.0));
  CHECK_THROWS_AS(dilate_contains(c, {0, 0}, -0.1), PreconditionError);
}

TEST_CASE("project_to_curve examples") {
  const ClosedCurve c = gen::ngon(256, 1.0);
  const Point2 q = project_to_curve(c, {2, 0});
  CHECK(distance(q, {1, 0}) <= 1.0 - std::cos(std::numbers::pi / 256));
  CHECK(project_to_curve(c, c[40]) == c[40]);
  const Point2 mid = lerp(c[7], c[8], 0.3);
  CHECK(distance(project_to_curve(c, mid), mid) < 1e-15);
  // From the centre every edge midpoint is nearest, at the inradius.
  const Projection pr = project(c, {0, 0});
  CHECK(pr.param == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(pr.distance == doctest::Approx(std::cos(std::numbers::pi / 256)).epsilon(1e-14));
}

TEST_CASE("projection is a point of the curve that no vertex beats") {
  gen::Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const ClosedCurve c = gen::any_star(rng);
    const Point2 p = gen::point_in_box(rng, 4.0);
    const Projection pr = project(c, p);
    CHECK(distance_to_curve(c, pr.point) < 1e-12);
    for (const Point2& v : c.vertices()) CHECK(distance(p, v) >= pr.distance - 1e-12);
  }
}

TEST_CASE("resample examples") {
  const ClosedCurve c = gen::ngon(64, 1.0);
  const ClosedCurve r = resample(c, 128);
  CHECK(r.size() == 128);
  // Oracle: perimeter of the 64-gon is 128 sin(pi / 64); resampling inscribes
  // in it, so the length can only drop.
  const double before = 128.0 * std::sin(std::numbers::pi / 64.0);
  CHECK(length(c) == doctest::Approx(before).epsilon(1e-14));
  CHECK(std::abs(length(r) - before) <= 0.005 * before);
  CHECK(r.orientation() == c.orientation());

  const ClosedCurve same = resample(c, 64);
  for (std::size_t i = 0; i < 64; ++i) CHECK(distance(same[i], c[i]) <= 1e-9);

  CHECK_THROWS_AS(resample(c, 4), PreconditionError);
}

TEST_CASE("resample stays within length / n in Hausdorff distance") {
  gen::Rng rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const ClosedCurve c = gen::any_star(rng);
    const std::size_t n = 8 + rng.below(120);
    CHECK(hausdorff(resample(c, n), c).value <= length(c) / static_cast<double>(n));
  }
}

TEST_CASE("offset_curve on the unit circle") {
  const ClosedCurve c = gen::ngon(256, 1.0);
  const ClosedCurve out = offset_curve(c, 0.1, OffsetSide::outward);
  const ClosedCurve in = offset_curve(c, 0.1, OffsetSide::inward);
  CHECK(gen::max_radial_error(out, 1.1) < 2e-4);
  CHECK(gen::max_radial_error(in, 0.9) < 2e-4);
  CHECK(validate(out).ok());
  CHECK(validate(in).ok());
  CHECK_THROWS_WITH_AS(offset_curve(c, 1.5, OffsetSide::inward), doctest::Contains("offset exceeds inradius"), Error);
}

TEST_CASE("offset out and back in returns near a convex original") {
  for (double r : {0.7, 1.0, 2.0}) {
    const ClosedCurve c = gen::ngon(256, r);
    const ClosedCurve out = offset_curve(c, 0.1, OffsetSide::outward);
    const ClosedCurve back = offset_curve(out, 0.1, OffsetSide::inward);
    auto chord = [](double rad, std::size_t n) { return rad * (1.0 - std::cos(std::numbers::pi / static_cast<double>(n))); };
    const double bound = 2.0 * std::max({chord(r, c.size()), chord(r + 0.1, out.size()), chord(r, back.size())});
    CHECK(hausdorff(back, c).value <= bound);
  }
}

TEST_CASE("rigid motions and relabelings") {
  const ClosedCurve c = gen::ngon(32, 1.0);
  CHECK(signed_area(rotate(c, 0.7)) == doctest::Approx(signed_area(c)).epsilon(1e-13));
  CHECK(centroid(translate(c, {2, -1})).x == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(length(scale(c, 3.0)) == doctest::Approx(3.0 * length(c)).epsilon(1e-13));
  CHECK(shifted(c, 5)[0] == c[5]);
  CHECK(c.cyclic(-1) == c[31]);
  CHECK(diameter(c) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("convexity defect") {
  CHECK(convexity_defect(gen::ngon(40, 1.0)) == 0.0);
  std::vector<Point2> v;
  for (int i = 0; i < 64; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 64.0;
    const double r = 1.0 + 0.35 * std::cos(3 * t);
    v.push_back({r * std::cos(t), r * std::sin(t)});
  }
  CHECK(convexity_defect(ClosedCurve(v)) > 0.1);
}

}  // TEST_SUITE
