#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cflow/corpus.hpp"
#include "cflow/error.hpp"
#include "cflow/flow.hpp"
#include "cflow/metrics.hpp"
#include "cflow/verify.hpp"
#include "generators.hpp"

using namespace cflow;

TEST_SUITE("flow") {

TEST_CASE("circle oracle") {
  CHECK(*circle_oracle(1.0, 0.375) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_FALSE(circle_oracle(1.0, 0.5).has_value());
  CHECK(*circle_oracle(2.5, 0.0) == 2.5);
  CHECK(*circle_oracle(2.0, 1.5) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("config validation") {
  FlowConfig cfg;
  CHECK_NOTHROW(cfg.check());
  cfg.dt_rule = ExplicitCfl{0.6};
  CHECK_THROWS_AS(cfg.check(), PreconditionError);
  cfg.dt_rule = ExplicitCfl{0.5};
  CHECK_NOTHROW(cfg.check());
  cfg.extinction_area = 0.0;
  CHECK_THROWS_AS(cfg.check(), PreconditionError);
}

TEST_CASE("one explicit step shrinks a circle by dt / r") {
  FlowConfig cfg;
  cfg.dt_rule = ExplicitCfl{0.5};
  const ClosedCurve c = gen::ngon(256, 1.0);
  // Oracle: r' = -1 / r, so one step of 1e-5 removes 1e-5 from the radius.
  const double dt = 1e-5;
  REQUIRE(time_step(c, cfg) > dt);
  const FlowState s = step(FlowState::start(c), cfg, dt);
  CHECK(s.time == dt);
  for (const Point2& p : s.curve.vertices()) CHECK(std::abs((1.0 - norm(p)) - dt) <= 0.1 * dt);
}

TEST_CASE("vertices on straight spans do not move") {
  // Stadium: the flat bottom has zero curvature away from its ends.
  const auto [inner, outer] = stadium_pair();
  FlowConfig cfg;
  cfg.tangential_redistribution = false;
  cfg.dt_rule = ExplicitCfl{0.25};
  const FlowState s = step(FlowState::start(outer), cfg);
  for (std::size_t k = 4; k < 28; ++k) CHECK(std::abs(s.curve[k].y) < 1e-12);
}

TEST_CASE("stepping an extinct state is refused") {
  FlowState s = evolve(gen::ngon(64, 0.1), 1.0, FlowConfig{});
  REQUIRE_FALSE(s.alive());
  CHECK_THROWS_AS(step(s, FlowConfig{}), PreconditionError);
}

TEST_CASE("evolve follows the circle law") {
  const FlowState s = evolve(gen::ngon(256, 1.0), 0.375, FlowConfig{});
  REQUIRE(s.alive());
  CHECK(s.time == 0.375);
  CHECK(gen::max_radial_error(s.curve, 0.5) <= 1e-3);
}

TEST_CASE("a unit circle vanishes at t = 1/2") {
  const FlowState s = evolve(gen::ngon(256, 1.0), 0.6, FlowConfig{});
  REQUIRE_FALSE(s.alive());
  CHECK(std::abs(s.extinction->time - 0.5) <= 0.005);
  CHECK(norm(s.extinction->point) < 1e-6);
}

TEST_CASE("zero time returns the input") {
  gen::Rng rng(4);
  const ClosedCurve c = gen::any_star(rng);
  const FlowState s = evolve(c, 0.0, FlowConfig{});
  CHECK(s.alive());
  CHECK(s.curve == c);
  CHECK(s.step_count == 0);
}

TEST_CASE("evolve is deterministic") {
  const ClosedCurve c = star_curve(3, 0.2, 128);
  CHECK(evolve(c, 0.05, FlowConfig{}).curve == evolve(c, 0.05, FlowConfig{}).curve);
}

TEST_CASE("max_steps is enforced") {
  FlowConfig cfg;
  cfg.max_steps = 10;
  CHECK_THROWS_AS(evolve(gen::ngon(64, 1.0), 0.1, cfg), Error);
}

TEST_CASE("area series of a circle follows A = pi (1 - 2t)") {
  const std::vector<double> grid = {0.0, 0.1, 0.2};
  const AreaSeries s = enclosed_area_series(gen::ngon(256, 1.0), grid, FlowConfig{});
  REQUIRE(s.samples.size() == 3);
  for (const AreaSample& a : s.samples) {
    const double oracle = std::numbers::pi * (1.0 - 2.0 * a.time);
    CHECK(std::abs(a.area - oracle) <= 0.01 * oracle);
  }
  CHECK(enclosed_area_series(gen::ngon(64, 1.0), {}, FlowConfig{}).samples.empty());
}

TEST_CASE("area series truncates at extinction") {
  const std::vector<double> grid = {0.0, 0.1, 0.2};
  const AreaSeries s = enclosed_area_series(gen::ngon(128, 0.5), grid, FlowConfig{});
  CHECK(s.samples.size() == 2);
  REQUIRE(s.extinction_time);
  CHECK(std::abs(*s.extinction_time - 0.125) < 0.005);
}

TEST_CASE("area rate of a 2 x 1 ellipse is -2 pi at two resolutions") {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.02 * i);
  for (std::size_t n : {128u, 256u}) {
    const double rate = area_rate(enclosed_area_series(ellipse_curve(2.0, 1.0, n), grid, FlowConfig{}));
    CHECK(std::abs(rate + 2.0 * std::numbers::pi) <= 0.05 * 2.0 * std::numbers::pi);
  }
}

TEST_CASE("explicit scheme converges at second order on the circle") {
  FlowConfig cfg;
  cfg.dt_rule = ExplicitCfl{0.25};
  double prev = 1.0;
  for (std::size_t n : {128u, 256u, 512u}) {
    const double err = gen::max_radial_error(evolve(gen::ngon(n, 1.0), 0.25, cfg).curve, std::sqrt(0.5));
    CHECK(err <= 0.5 * prev);
    prev = err;
  }
}

TEST_CASE("enclosed area decreases strictly") {
  gen::Rng rng(17);
  for (int trial = 0; trial < 3; ++trial) {
    const ClosedCurve c = resample(gen::star_polygon(rng, 40, {}, 1.0, 0.15), 128);
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(0.02 * i);
    const AreaSeries s = enclosed_area_series(c, grid, FlowConfig{});
    for (std::size_t i = 1; i < s.samples.size(); ++i) CHECK(s.samples[i].area < s.samples[i - 1].area);
  }
}

TEST_CASE("nested circles stay disjoint and nested") {
  std::vector<double> grid;
  for (int i = 0; i <= 30; ++i) grid.push_back(0.02 * i);
  const AvoidanceReport r = check_avoidance(gen::ngon(128, 1.0), gen::ngon(128, 2.0), grid, FlowConfig{});
  CHECK(r.ok());
  REQUIRE(r.inner_extinction);
  CHECK(*r.inner_extinction == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("a nonconvex star becomes convex before it vanishes") {
  const ClosedCurve c = star_curve(3, 0.2, 128);
  REQUIRE(convexity_defect(c) > 0.0);
  FlowState s = FlowState::start(c);
  bool convex = false;
  for (int i = 1; i <= 40 && s.alive(); ++i) {
    s = advance(std::move(s), 0.01 * i, FlowConfig{});
    if (s.alive() && convexity_defect(s.curve) == 0.0) convex = true;
    if (convex && s.alive()) CHECK(convexity_defect(s.curve) == 0.0);
  }
  CHECK(convex);
}

TEST_CASE("redistribute keeps vertex 0 and equalizes spacing") {
  const ClosedCurve c = ellipse_curve(2.0, 1.0, 64);
  const ClosedCurve r = redistribute(c, 100);
  CHECK(r.size() == 100);
  CHECK(r[0] == c[0]);
  CHECK(max_edge_length(r) / min_edge_length(r) < 1.01);
  // Cubic interpolation leaves the point set far closer than one edge.
  CHECK(hausdorff(r, c).value < 0.05 * max_edge_length(c));
}

}  // TEST_SUITE
