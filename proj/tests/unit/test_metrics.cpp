#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cflow/metrics.hpp"
#include "generators.hpp"

using namespace cflow;

namespace {

// Oracle: directed Hausdorff distance from dense samples of a (k points per
// edge) to the edges of b, written with plain loops.
double dense_directed(const ClosedCurve& a, const ClosedCurve& b, int k) {
  auto seg_dist = [](Point2 p, Point2 u, Point2 v) {
    const Point2 d = v - u;
    double t = dot(p - u, d) / dot(d, d);
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, u + d * t);
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int s = 0; s < k; ++s) {
      const Point2 p = lerp(a[i], a.cyclic(static_cast<std::ptrdiff_t>(i) + 1), static_cast<double>(s) / k);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < b.size(); ++j) best = std::min(best, seg_dist(p, b[j], b.cyclic(static_cast<std::ptrdiff_t>(j) + 1)));
      worst = std::max(worst, best);
    }
  }
  return worst;
}

// Oracle: the textbook discrete Frechet recursion over every shift and both
// directions, without any pruning.
double brute_frechet(const ClosedCurve& a, const ClosedCurve& b) {
  const std::size_t n = a.size(), m = b.size();
  double best = std::numeric_limits<double>::infinity();
  for (int dir = 0; dir < 2; ++dir) {
    for (std::size_t shift = 0; shift < m; ++shift) {
      std::vector<Point2> q;
      for (std::size_t k = 0; k <= m; ++k) q.push_back(dir == 0 ? b[(shift + k) % m] : b[(shift + m - k % m) % m]);
      std::vector<Point2> p(a.vertices().begin(), a.vertices().end());
      p.push_back(a[0]);
      std::vector<std::vector<double>> ca(n + 1, std::vector<double>(m + 1));
      for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= m; ++j) {
          const double d = distance(p[i], q[j]);
          if (i == 0 && j == 0) ca[i][j] = d;
          else if (i == 0) ca[i][j] = std::max(ca[i][j - 1], d);
          else if (j == 0) ca[i][j] = std::max(ca[i - 1][j], d);
          else ca[i][j] = std::max(std::min({ca[i - 1][j], ca[i][j - 1], ca[i - 1][j - 1]}), d);
        }
      }
      best = std::min(best, ca[n][m]);
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("hausdorff of concentric circles") {
  const ClosedCurve a = gen::ngon(256, 1.0), b = gen::ngon(256, 2.0);
  const DistanceReport r = hausdorff(a, b);
  CHECK(std::abs(r.value - 1.0) <= 2e-3);
  REQUIRE(r.witness);
  CHECK(distance(r.witness->first, r.witness->second) == doctest::Approx(r.value).epsilon(1e-12));
}

TEST_CASE("hausdorff of identical curves is zero") {
  const ClosedCurve a = gen::ngon(100, 1.0);
  CHECK(hausdorff(a, a).value == 0.0);
}

TEST_CASE("hausdorff of a translated circle against a dense-sampling oracle") {
  const ClosedCurve a = gen::ngon(256, 1.0), b = translate(a, {0.3, 0.0});
  const double oracle = std::max(dense_directed(a, b, 16), dense_directed(b, a, 16));
  // Frozen output of the oracle above.
  CHECK(oracle == doctest::Approx(0.29999999999999993).epsilon(1e-9));
  CHECK(std::abs(oracle - 0.3) <= 2e-3);
  // The exact value can only exceed the sampled one.
  const double h = hausdorff(a, b).value;
  CHECK(h >= oracle - 1e-12);
  CHECK(h - oracle <= 1e-6);
}

TEST_CASE("directed hausdorff is exact on a nested pair") {
  gen::Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const ClosedCurve a = gen::any_star(rng), b = gen::any_star(rng);
    const double exact = directed_hausdorff(a, b).value;
    const double sampled = dense_directed(a, b, 64);
    CHECK(exact >= sampled - 1e-12);
    CHECK(exact - sampled <= 0.5 * max_edge_length(a) / 64.0 + 1e-12);
  }
}

TEST_CASE("frechet examples") {
  const ClosedCurve a = gen::ngon(64, 1.0);
  CHECK(frechet_closed(a, a).value == 0.0);
  CHECK(frechet_closed(a, shifted(a, 17)).value == 0.0);
  CHECK(frechet_closed(a, reversed(a)).value == 0.0);
  const ClosedCurve b = gen::ngon(64, 2.0);
  const double oracle = brute_frechet(a, b);
  CHECK(oracle == doctest::Approx(1.0).epsilon(1e-12));
  const DistanceReport r = frechet_closed(a, b);
  CHECK(std::abs(r.value - 1.0) <= 2e-3);
  CHECK(r.value == doctest::Approx(oracle).epsilon(1e-12));
  REQUIRE(r.alignment);
  CHECK(r.alignment->shift == 0);
  CHECK_FALSE(r.alignment->reversed);
}

TEST_CASE("frechet agrees with the brute-force oracle on random pairs") {
  gen::Rng rng(21);
  for (int trial = 0; trial < 12; ++trial) {
    const ClosedCurve a = gen::any_star(rng), b = gen::any_star(rng);
    CHECK(frechet_closed(a, b).value == doctest::Approx(brute_frechet(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("coarse-to-fine search never beats the exhaustive one") {
  gen::Rng rng(8);
  for (int trial = 0; trial < 6; ++trial) {
    const ClosedCurve a = gen::any_star(rng), b = gen::any_star(rng);
    FrechetOptions o;
    o.search = ShiftSearch::coarse_to_fine;
    CHECK(frechet_closed(a, b, o).value >= frechet_closed(a, b).value - 1e-12);
  }
  const ClosedCurve c = gen::ngon(300, 1.0);
  FrechetOptions o;
  o.search = ShiftSearch::coarse_to_fine;
  CHECK(frechet_closed(c, shifted(c, 123), o).value == 0.0);
}

TEST_CASE("metric axioms on random triples") {
  gen::Rng rng(2024);
  const double slack = 1e-9;
  for (int trial = 0; trial < 20; ++trial) {
    const ClosedCurve a = gen::any_star(rng), b = gen::any_star(rng), c = gen::any_star(rng);
    const double hab = hausdorff(a, b).value, hbc = hausdorff(b, c).value, hac = hausdorff(a, c).value;
    const double fab = frechet_closed(a, b).value, fbc = frechet_closed(b, c).value, fac = frechet_closed(a, c).value;
    CHECK(std::abs(hab - hausdorff(b, a).value) <= slack);
    CHECK(std::abs(fab - frechet_closed(b, a).value) <= slack);
    CHECK(hac <= hab + hbc + slack);
    CHECK(fac <= fab + fbc + slack);
    CHECK(fab >= hab - slack);
  }
}

TEST_CASE("frechet is invariant under a common rigid motion") {
  gen::Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const ClosedCurve a = gen::any_star(rng), b = gen::any_star(rng);
    const double angle = rng.uniform(0.0, 6.3);
    const Point2 by = gen::point_in_box(rng, 5.0);
    const double moved = frechet_closed(translate(rotate(a, angle), by), translate(rotate(b, angle), by)).value;
    CHECK(std::abs(moved - frechet_closed(a, b).value) <= 1e-9);
  }
}

TEST_CASE("discrete frechet self-converges on convex pairs") {
  for (double aspect : {1.2, 1.5, 2.0}) {
    std::vector<Point2> v;
    for (int i = 0; i < 80; ++i) {
      const double t = 2.0 * std::numbers::pi * i / 80.0;
      v.push_back({aspect * std::cos(t), std::sin(t)});
    }
    const ClosedCurve a(v), b = gen::ngon(80, 1.3);
    const double f1 = frechet_closed(a, b).value;
    const double f2 = frechet_closed(resample(a, 160), resample(b, 160)).value;
    CHECK(std::abs(f1 - f2) <= std::max(max_edge_length(a), max_edge_length(b)));
  }
}

TEST_CASE("open discrete frechet") {
  const std::vector<Point2> p = {{0, 0}, {1, 0}, {2, 0}};
  const std::vector<Point2> q = {{0, 1}, {2, 1}};
  CHECK(discrete_frechet(p, q) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

}  // TEST_SUITE
