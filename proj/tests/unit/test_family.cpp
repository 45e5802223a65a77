#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cflow/corpus.hpp"
#include "cflow/error.hpp"
#include "cflow/family.hpp"
#include "cflow/metrics.hpp"
#include "generators.hpp"

using namespace cflow;

namespace {

struct CircleSetup {
  ClosedCurve gamma = gen::ngon(128, 1.0);
  double T = 0.0;
  double t_inf = 0.0;
  CircleSetup() {
    T = family_horizon(gamma, FlowConfig{});
    t_inf = 0.75 * T;
  }
};

bool arc_on_curve(const EtaCurve& e, std::size_t arc, const ClosedCurve& c, double tol) {
  const ArcRange r = e.arcs[arc];
  for (std::size_t k = 0; k < r.count; ++k) {
    if (distance_to_curve(c, e.curve.cyclic(static_cast<std::ptrdiff_t>(r.first + k))) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("family") {

TEST_CASE("horizon and parameters of the unit circle") {
  const CircleSetup c;
  // 0.8 of the extinction time 1/2.
  CHECK(std::abs(c.T - 0.4) <= 0.004);
  const EtaParams p = make_eta_params(c.gamma, {1, 0}, 0.5, c.T);
  CHECK(p.r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.D_radius == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(p.E_radius > 2.0 * std::sqrt(2.0 * c.T) + 2.0 * p.r);
  CHECK(norm(p.center) < 1e-12);
}

TEST_CASE("end members follow the arcs of gamma") {
  const CircleSetup c;
  const EtaCurve e0 = build_eta(c.gamma, make_eta_params(c.gamma, {1, 0}, 0.0, c.T));
  CHECK(e0.curve[0] == Point2{1, 0});
  CHECK(distance(e0.antipode, {-1, 0}) < 1e-9);
  CHECK(e0.curve.orientation() == Orientation::counterclockwise);
  CHECK(arc_on_curve(e0, 0, c.gamma, 1e-9));
  // V is the clockwise arc from x, so eta_1 at s = 0 runs below the axis.
  const ArcRange a0 = e0.arcs[0];
  CHECK(e0.curve[a0.first + a0.count / 2].y < -0.9);

  const EtaCurve e1 = build_eta(c.gamma, make_eta_params(c.gamma, {1, 0}, 1.0, c.T));
  CHECK(arc_on_curve(e1, 0, c.gamma, 1e-9));
  const ArcRange a1 = e1.arcs[0];
  CHECK(e1.curve[a1.first + a1.count / 2].y > 0.9);
}

TEST_CASE("interior members meet gamma at exactly the anchor and antipode") {
  const CircleSetup c;
  for (double s : {0.25, 0.5, 0.75}) {
    const EtaCurve e = build_eta(c.gamma, make_eta_params(c.gamma, {0, 1}, s, c.T));
    CHECK(validate(e.curve).ok());
    CHECK(clustered_intersections(c.gamma, e.curve).count() == 2);
    // The outer arc lies on the circle of radius E_radius.
    CHECK(std::abs(norm(e.curve[e.arcs[5].first + e.arcs[5].count / 2]) - e.params.E_radius) < 1e-9);
  }
}

TEST_CASE("build_eta preconditions") {
  const CircleSetup c;
  EtaParams p = make_eta_params(c.gamma, {1, 0}, 0.5, c.T);
  p.s = 1.5;
  CHECK_THROWS_AS(build_eta(c.gamma, p), PreconditionError);
  p.s = 0.5;
  p.E_radius = 1.0;
  CHECK_THROWS_AS(build_eta(c.gamma, p), PreconditionError);
  CHECK_THROWS_AS(build_eta(c.gamma, make_eta_params(c.gamma, {3, 0}, 0.5, c.T)), PreconditionError);
  // A U shape whose notch swallows its centroid.
  const ClosedCurve u = resample(ClosedCurve({{0, 0}, {3, 0}, {3, 3}, {2, 3}, {2, 1}, {1, 1}, {1, 3}, {0, 3}}), 64);
  REQUIRE(validate(u).ok());
  CHECK_FALSE(is_star_shaped(u, centroid(u)));
  CHECK_THROWS_WITH_AS(build_eta(u, make_eta_params(u, u[0], 0.5, 0.01)), doctest::Contains("star-shaped"),
                       PreconditionError);
  CHECK_THROWS_AS(make_eta_params(c.gamma, {1, 0}, 0.5, 0.0), PreconditionError);
}

TEST_CASE("end members are C1 and C3") {
  const CircleSetup c;
  const FamilyProbe probe(c.gamma, c.t_inf, FlowConfig{});
  CHECK(probe.classify(build_eta(c.gamma, make_eta_params(c.gamma, {1, 0}, 0.0, c.T)).curve) == ClassLabel::C1);
  CHECK(probe.classify(build_eta(c.gamma, make_eta_params(c.gamma, {1, 0}, 1.0, c.T)).curve) == ClassLabel::C3);
  // A far-away curve leaves evolved gamma entirely outside.
  CHECK(probe.classify(gen::ngon(64, 1.0, {10, 0})) == ClassLabel::C1);
  CHECK(to_string(ClassLabel::C2) == "C2");
}

TEST_CASE("scan labels are ordered") {
  const CircleSetup c;
  const FamilyProbe probe(c.gamma, c.t_inf, FlowConfig{});
  const std::vector<LabelledS> labels = scan_family(probe, make_eta_params(c.gamma, {1, 0}, 0.0, c.T), 8);
  REQUIRE(labels.size() == 9);
  CHECK(labels.front().label == ClassLabel::C1);
  CHECK(labels.back().label == ClassLabel::C3);
  CHECK(labels_ordered(labels));

  std::vector<LabelledS> bad = {{0.0, ClassLabel::C3}, {0.5, ClassLabel::C1}};
  CHECK_FALSE(labels_ordered(bad));
}

TEST_CASE("nu0 of the circle is one half at two resolutions") {
  for (std::size_t n : {128u, 256u}) {
    const ClosedCurve g = gen::ngon(n, 1.0);
    const double T = family_horizon(g, FlowConfig{});
    const EtaParams p = make_eta_params(g, {1, 0}, 0.5, T);
    const NuTriple nu = find_nus(g, {1, 0}, 0.75 * T, p, FlowConfig{});
    CHECK(std::abs(nu.nu0 - 0.5) <= kDefaultTolS);
    CHECK(nu.nu1 <= nu.nu0);
    CHECK(nu.nu0 <= nu.nu2);
    CHECK(labels_ordered(nu.probes));
  }
}

TEST_CASE("find_nus rejects a nonpositive tolerance and accepts a coarse one") {
  const CircleSetup c;
  const FamilyProbe probe(c.gamma, c.t_inf, FlowConfig{});
  const EtaParams p = make_eta_params(c.gamma, {1, 0}, 0.5, c.T);
  CHECK_THROWS_AS(find_nus(probe, p, 0.0), PreconditionError);
  const NuTriple coarse = find_nus(probe, p, 0.5);
  CHECK(coarse.nu1 <= coarse.nu0);
  CHECK(coarse.nu0 <= coarse.nu2);
}

TEST_CASE("hit_target recovers the anchor on the circle") {
  const CircleSetup c;
  const Point2 x0{std::cos(0.6), std::sin(0.6)};
  // The evolved circle has radius sqrt(1 - 2 t); z is the image of x0 on it.
  const Point2 z = x0 * std::sqrt(1.0 - 2.0 * c.t_inf);
  const EtaParams p0 = make_eta_params(c.gamma, c.gamma[0], 0.5, c.T);
  const HitResult h = hit_target(c.gamma, z, c.t_inf, p0, FlowConfig{});
  const double tol = 2.0 * max_edge_length(c.gamma);
  CHECK(h.miss <= tol);
  CHECK(distance(h.x, x0) <= tol);
  REQUIRE_FALSE(h.trajectory.samples.empty());
  CHECK(distance(h.trajectory.samples.back().point, z) == doctest::Approx(h.miss).epsilon(1e-12));
}

TEST_CASE("hit_target refuses a target off the evolved curve") {
  const CircleSetup c;
  const EtaParams p0 = make_eta_params(c.gamma, c.gamma[0], 0.5, c.T);
  CHECK_THROWS_AS(hit_target(c.gamma, {5, 5}, c.t_inf, p0, FlowConfig{}), PreconditionError);
}

TEST_CASE("stadium pair separates immediately and stays nested") {
  const auto [inner, outer] = stadium_pair();
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.01 * i);
  const CommonArcReport r = common_arc_experiment(inner, outer, grid, FlowConfig{});
  CHECK(r.shared_vertices >= 2);
  CHECK(r.inner_index == 0);
  CHECK(r.nested_at_start);
  CHECK(r.disjoint_after_start());
  CHECK(r.nesting_preserved());
  CHECK(r.samples.front().overlap);
  CHECK_THROWS_AS(common_arc_experiment(outer, outer, grid, FlowConfig{}), PreconditionError);
  CHECK_THROWS_AS(common_arc_experiment(gen::ngon(64, 1.0), gen::ngon(64, 2.0), grid, FlowConfig{}),
                  PreconditionError);
}

TEST_CASE("normal perturbation") {
  const ClosedCurve g = gen::ngon(256, 1.0);
  CHECK(normal_perturbation(g, 0.0, 3) == g);
  const ClosedCurve p = normal_perturbation(g, 0.05, 3);
  CHECK(std::abs(hausdorff(p, g).value - 0.05) <= 1e-3);
}

TEST_CASE("continuity experiment with zero amplitude") {
  const ClosedCurve g = ellipse_curve(1.5, 1.0, 128);
  const std::vector<double> amps = {0.1, 0.0};
  const ContinuityTable t = continuity_experiment(g, 0.3, amps, 3, FlowConfig{});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1].ok());
  CHECK(t.rows[1].frechet == 0.0);
  CHECK(t.rows[1].hausdorff == 0.0);
  CHECK(t.rows[0].frechet >= t.rows[0].hausdorff);
  CHECK(t.rows[0].frechet > t.rows[1].frechet);
  const std::vector<double> rising = {0.0, 0.1};
  CHECK_THROWS_AS(continuity_experiment(g, 0.3, rising, 3, FlowConfig{}), PreconditionError);
}

}  // TEST_SUITE
