#include "cflow/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "cflow/corpus.hpp"
#include "cflow/error.hpp"
#include "cflow/family.hpp"
#include "cflow/io.hpp"
#include "cflow/levelset.hpp"
#include "cflow/metrics.hpp"

namespace cflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

// Index of the first sample that rises above the running minimum, or npos.
std::size_t first_rise(const CountSeries& series) {
  std::size_t lowest = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < series.samples.size(); ++i) {
    const CountSample& s = series.samples[i];
    // An overlap has infinitely many contact points.
    const std::size_t c = s.overlap ? std::numeric_limits<std::size_t>::max() : s.count;
    if (i > 0 && c > lowest) return i;
    lowest = std::min(lowest, c);
  }
  return std::string::npos;
}

std::vector<double> with_midpoints(std::span<const double> grid) {
  std::vector<double> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) out.push_back(0.5 * (grid[i - 1] + grid[i]));
    out.push_back(grid[i]);
  }
  return out;
}

}  // namespace

MonotonicityReport check_count_monotone(const ClosedCurve& a, const ClosedCurve& b,
                                        std::span<const double> t_grid, const FlowConfig& cfg) {
  MonotonicityReport report;
  report.series = count_over_time(a, b, t_grid, cfg);
  const std::size_t i = first_rise(report.series);
  if (i == std::string::npos) return report;

  const auto& s = report.series.samples;
  const bool tangential = s[i].tangential > 0 || s[i - 1].tangential > 0;
  const bool isolated = i + 1 == s.size() || (!s[i + 1].overlap && s[i + 1].count <= s[i - 1].count);
  if (isolated && tangential) {
    report.retested = true;
    FlowConfig fine = cfg;
    if (fine.target_vertex_spacing > 0.0) fine.target_vertex_spacing *= 0.5;
    const std::vector<double> grid = with_midpoints(t_grid);
    report.retest_series =
        count_over_time(resample(a, 2 * a.size()), resample(b, 2 * b.size()), grid, fine);
    const std::size_t j = first_rise(report.retest_series);
    if (j == std::string::npos) {
      report.detail = fmt("rise at t=%.6g resolved at double resolution", s[i].time);
      return report;
    }
    report.monotone = false;
    report.detail = fmt("count rises at t=%.6g and again at t=%.6g after refinement", s[i].time,
                        report.retest_series.samples[j].time);
    return report;
  }
  report.monotone = false;
  report.detail = "count rises from " + std::to_string(s[i - 1].count) + " to " +
                  std::to_string(s[i].count) + fmt(" at t=%.6g", s[i].time);
  return report;
}

ConfirmedMonotonicity check_count_monotone_confirmed(const ClosedCurve& a, const ClosedCurve& b,
                                                     std::span<const double> t_grid,
                                                     const FlowConfig& cfg) {
  ConfirmedMonotonicity report;
  report.coarse = count_over_time(a, b, t_grid, cfg);
  FlowConfig fine = cfg;
  if (fine.target_vertex_spacing > 0.0) fine.target_vertex_spacing *= 0.5;
  report.fine = count_over_time(resample(a, 2 * a.size()), resample(b, 2 * b.size()), t_grid, fine);
  report.samples = std::min(report.coarse.samples.size(), report.fine.samples.size());
  std::size_t lowest = std::numeric_limits<std::size_t>::max();
  double lowest_time = 0.0;
  for (std::size_t i = 0; i < report.samples; ++i) {
    const CountSample& c = report.coarse.samples[i];
    const CountSample& f = report.fine.samples[i];
    if (c.overlap || f.overlap || c.tangential > 0 || f.tangential > 0 || c.count != f.count) continue;
    ++report.confirmed;
    if (c.count > lowest && report.monotone) {
      report.monotone = false;
      report.detail = "confirmed count rises from " + std::to_string(lowest) + fmt(" (t=%.6g)", lowest_time) +
                      " to " + std::to_string(c.count) + fmt(" at t=%.6g", c.time);
    }
    if (c.count < lowest) {
      lowest = c.count;
      lowest_time = c.time;
    }
  }
  if (report.monotone) {
    report.detail = std::to_string(report.confirmed) + " of " + std::to_string(report.samples) +
                    " grid times confirmed";
  }
  return report;
}

AvoidanceReport check_avoidance(const ClosedCurve& inner, const ClosedCurve& outer,
                                std::span<const double> t_grid, const FlowConfig& cfg) {
  AvoidanceReport report;
  FlowState si = FlowState::start(inner);
  FlowState so = FlowState::start(outer);
  for (double t : t_grid) {
    si = advance(std::move(si), t, cfg);
    if (!si.alive()) {
      report.inner_extinction = si.extinction->time;
      break;
    }
    so = advance(std::move(so), t, cfg);
    if (!so.alive()) {
      report.contained = false;
      report.detail = fmt("outer curve extinct at t=%.6g before the inner one", so.extinction->time);
      break;
    }
    ++report.samples;
    const IntersectionRecord r = intersect_curves(si.curve, so.curve);
    if (r.overlap || r.count() > 0) {
      report.disjoint = false;
      report.detail = std::to_string(r.count()) + fmt(" contact(s) at t=%.6g", t);
      break;
    }
    for (const Point2& v : si.curve.vertices()) {
      if (classify_point(so.curve, v, 0.0) != Side::interior) {
        report.contained = false;
        report.detail = fmt("inner vertex (%.6g, %.6g) outside at t=%.6g", v.x, v.y, t);
        break;
      }
    }
    if (!report.contained) break;
  }
  return report;
}

namespace {

using Check = std::function<std::pair<bool, std::string>()>;

struct Suite {
  std::vector<PropertyResult> results;

  void run(std::string module, std::string name, const Check& check) {
    PropertyResult r{std::move(module), std::move(name), false, {}, 0.0};
    const auto start = std::chrono::steady_clock::now();
    try {
      auto [ok, detail] = check();
      r.passed = ok;
      r.detail = std::move(detail);
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
};

std::vector<double> uniform_grid(double t_end, std::size_t intervals) {
  std::vector<double> g;
  for (std::size_t i = 0; i <= intervals; ++i) {
    g.push_back(t_end * static_cast<double>(i) / static_cast<double>(intervals));
  }
  return g;
}

double max_radial_error(const ClosedCurve& c, double r) {
  double err = 0.0;
  for (const Point2& p : c.vertices()) err = std::max(err, std::abs(norm(p) - r));
  return err;
}

void geometry_checks(Suite& suite, std::mt19937_64& rng) {
  suite.run("geometry", "curvature of regular polygons converges to 1/r", [] {
    double prev = std::numeric_limits<double>::infinity();
    std::string detail;
    bool ok = true;
    for (std::size_t n : {64u, 128u, 256u}) {
      const double r = 1.7;
      const ClosedCurve c = circle_curve(r, n);
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(norm(curvature_vector(c, i)) - 1.0 / r));
      ok = ok && (err <= prev || err <= 1e-12);
      prev = err;
      detail += fmt("n=%.0f err=%.2e ", static_cast<double>(n), err);
    }
    return std::pair{ok, detail};
  });

  suite.run("geometry", "winding number agrees with orientation", [&rng] {
    std::size_t tested = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const ClosedCurve c = random_star_polygon(rng, 16 + trial);
      const ClosedCurve r = reversed(c);
      for (int k = 0; k < 50; ++k) {
        const Point2 p{2.6 * unit_double(rng) - 1.3, 2.6 * unit_double(rng) - 1.3};
        if (distance_to_curve(c, p) < 1e-9) continue;
        const Side side = classify_point(c, p, 0.0);
        const int w = winding_number(c, p);
        const int wr = winding_number(r, p);
        if (side == Side::interior && (w != 1 || wr != -1)) {
          return std::pair{false, fmt("interior point (%.6g, %.6g) has winding %.0f", p.x, p.y, w)};
        }
        if (side == Side::exterior && (w != 0 || wr != 0)) {
          return std::pair{false, fmt("exterior point (%.6g, %.6g) has winding %.0f", p.x, p.y, w)};
        }
        ++tested;
      }
    }
    return std::pair{true, std::to_string(tested) + " points"};
  });

  suite.run("geometry", "resample stays within length/n in Hausdorff distance", [&rng] {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const ClosedCurve c = random_star_polygon(rng, 20 + 3 * trial);
      for (std::size_t n : {16u, 50u, 200u}) {
        const double h = hausdorff(resample(c, n), c).value;
        const double bound = length(c) / static_cast<double>(n);
        worst = std::max(worst, h / bound);
        if (h > bound) return std::pair{false, fmt("n=%.0f distance %.3g > bound %.3g", static_cast<double>(n), h, bound)};
      }
    }
    return std::pair{true, fmt("worst ratio %.3f", worst)};
  });

  suite.run("geometry", "offset out then in returns near the original", [] {
    const ClosedCurve c = circle_curve(1.0, 256);
    const double delta = 0.1;
    const ClosedCurve out = offset_curve(c, delta, OffsetSide::outward);
    const ClosedCurve back = offset_curve(out, delta, OffsetSide::inward);
    auto chord = [](double r, std::size_t n) { return r * (1.0 - std::cos(std::numbers::pi / static_cast<double>(n))); };
    const double bound = 2.0 * std::max({chord(1.0, c.size()), chord(1.0 + delta, out.size()), chord(1.0, back.size())});
    const double h = hausdorff(back, c).value;
    return std::pair{h <= bound, fmt("distance %.3g, bound %.3g", h, bound)};
  });

  suite.run("geometry", "projection is never beaten by a vertex", [&rng] {
    for (int trial = 0; trial < 20; ++trial) {
      const ClosedCurve c = random_star_polygon(rng, 12 + trial);
      for (int k = 0; k < 40; ++k) {
        const Point2 p{4.0 * unit_double(rng) - 2.0, 4.0 * unit_double(rng) - 2.0};
        const Point2 q = project_to_curve(c, p);
        if (distance_to_curve(c, q) > 1e-12) return std::pair{false, std::string("projection is off the curve")};
        const double d = distance(p, q);
        for (const Point2& v : c.vertices()) {
          if (distance(p, v) < d - 1e-12) return std::pair{false, fmt("vertex closer by %.3g", d - distance(p, v))};
        }
      }
    }
    return std::pair{true, std::string("800 queries")};
  });
}

void metric_checks(Suite& suite, std::mt19937_64& rng) {
  auto random_curve = [&rng] {
    const Point2 c{unit_double(rng) - 0.5, unit_double(rng) - 0.5};
    return random_star_polygon(rng, 12 + static_cast<std::size_t>(unit_double(rng) * 9), c,
                               0.6 + unit_double(rng), 0.3);
  };
  suite.run("metrics", "symmetry and triangle inequality", [&] {
    const double slack = 1e-9;
    for (int trial = 0; trial < 15; ++trial) {
      const ClosedCurve a = random_curve(), b = random_curve(), c = random_curve();
      const double hab = hausdorff(a, b).value, hba = hausdorff(b, a).value;
      const double hbc = hausdorff(b, c).value, hac = hausdorff(a, c).value;
      const double fab = frechet_closed(a, b).value, fba = frechet_closed(b, a).value;
      const double fbc = frechet_closed(b, c).value, fac = frechet_closed(a, c).value;
      if (std::abs(hab - hba) > slack || std::abs(fab - fba) > slack) {
        return std::pair{false, fmt("asymmetry H %.3g F %.3g", hab - hba, fab - fba)};
      }
      if (hac > hab + hbc + slack || fac > fab + fbc + slack) {
        return std::pair{false, std::string("triangle inequality violated")};
      }
      if (hausdorff(a, a).value > slack || frechet_closed(a, a).value > slack) {
        return std::pair{false, std::string("nonzero self distance")};
      }
    }
    return std::pair{true, std::string("15 triples")};
  });

  suite.run("metrics", "Frechet bounds Hausdorff from above", [&] {
    double tightest = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 20; ++trial) {
      const ClosedCurve a = random_curve(), b = random_curve();
      const double gap = frechet_closed(a, b).value - hausdorff(a, b).value;
      tightest = std::min(tightest, gap);
      if (gap < -1e-9) return std::pair{false, fmt("F - H = %.3g", gap)};
    }
    return std::pair{true, fmt("smallest gap %.3g", tightest)};
  });

  suite.run("metrics", "Frechet invariant under rigid motion", [&] {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const ClosedCurve a = random_curve(), b = random_curve();
      const double angle = kTwoPi * unit_double(rng);
      const Point2 shift{4.0 * unit_double(rng) - 2.0, 4.0 * unit_double(rng) - 2.0};
      auto move = [&](const ClosedCurve& c) { return translate(rotate(c, angle), shift); };
      worst = std::max(worst, std::abs(frechet_closed(a, b).value - frechet_closed(move(a), move(b)).value));
    }
    return std::pair{worst <= 1e-9, fmt("largest change %.3g", worst)};
  });

  suite.run("metrics", "discrete Frechet self-converges under refinement", [] {
    std::string detail;
    bool ok = true;
    for (auto [a, b] : {std::pair{ellipse_curve(1.5, 1.0, 64), circle_curve(1.2, 64)},
                        std::pair{ellipse_curve(2.0, 1.0, 100), ellipse_curve(1.0, 1.5, 100)}}) {
      const double f1 = frechet_closed(a, b).value;
      const ClosedCurve a2 = resample(a, 2 * a.size()), b2 = resample(b, 2 * b.size());
      const double f2 = frechet_closed(a2, b2).value;
      const double bound = std::max(max_edge_length(a), max_edge_length(b));
      ok = ok && std::abs(f1 - f2) <= bound;
      detail += fmt("|%.4g - %.4g| vs %.3g; ", f1, f2, bound);
    }
    return std::pair{ok, detail};
  });
}

void flow_checks(Suite& suite, const FlowConfig& cfg) {
  suite.run("flow", "circle error at least halves per refinement", [&cfg] {
    FlowConfig explicit_cfg = cfg;
    explicit_cfg.dt_rule = ExplicitCfl{};
    std::vector<double> errs;
    for (std::size_t n : {128u, 256u, 512u}) {
      const FlowState s = evolve(circle_curve(1.0, n), 0.25, explicit_cfg);
      errs.push_back(max_radial_error(s.curve, *circle_oracle(1.0, 0.25)));
    }
    const bool ok = errs[1] <= 0.5 * errs[0] && errs[2] <= 0.5 * errs[1];
    return std::pair{ok, fmt("errors %.3g %.3g %.3g", errs[0], errs[1], errs[2])};
  });

  suite.run("flow", "nested curves stay disjoint and nested", [&cfg] {
    const std::vector<std::pair<ClosedCurve, ClosedCurve>> pairs = {
        {circle_curve(1.0, 256), circle_curve(2.0, 256)},
        {ellipse_curve(0.75, 0.5, 256), circle_curve(2.0, 256)},
    };
    const std::vector<double> grid = uniform_grid(0.6, 30);
    for (const auto& [inner, outer] : pairs) {
      const AvoidanceReport r = check_avoidance(inner, outer, grid, cfg);
      if (!r.ok()) return std::pair{false, r.detail};
    }
    return std::pair{true, std::string("2 pairs")};
  });

  suite.run("flow", "convex curves reach extinction", [&cfg] {
    std::string detail;
    for (const ClosedCurve& c : {circle_curve(1.0, 256), ellipse_curve(2.0, 1.0, 256)}) {
      const FlowState s = evolve(c, 10.0, cfg);
      if (s.alive()) return std::pair{false, std::string("curve still alive at t=10")};
      detail += fmt("extinct at %.4g; ", s.extinction->time);
    }
    return std::pair{true, detail};
  });

  suite.run("flow", "nonconvex star becomes convex and stays convex", [&cfg] {
    const ClosedCurve star = star_curve(3, 0.2, 256);
    const double t_ext = extinction_time(star, cfg);
    FlowState s = FlowState::start(star);
    std::optional<double> convex_at;
    const std::size_t samples = 200;
    for (std::size_t i = 1; i <= samples; ++i) {
      s = advance(std::move(s), t_ext * static_cast<double>(i) / static_cast<double>(samples + 1), cfg);
      if (!s.alive()) break;
      const double defect = convexity_defect(s.curve);
      if (defect == 0.0 && !convex_at) convex_at = s.time;
      if (convex_at && defect > 0.0) return std::pair{false, fmt("convexity lost again at t=%.4g", s.time)};
    }
    if (!convex_at) return std::pair{false, std::string("never convex before extinction")};
    return std::pair{true, fmt("convex from t=%.4g, extinct at %.4g", *convex_at, t_ext)};
  });

  suite.run("flow", "enclosed area decreases strictly", [&cfg] {
    for (const ClosedCurve& c : {star_curve(4, 0.35, 256), ellipse_curve(3.0, 1.0, 256)}) {
      const AreaSeries a = enclosed_area_series(c, uniform_grid(0.4, 40), cfg);
      for (std::size_t i = 1; i < a.samples.size(); ++i) {
        if (!(a.samples[i].area < a.samples[i - 1].area)) {
          return std::pair{false, fmt("area rises at t=%.4g", a.samples[i].time)};
        }
      }
    }
    return std::pair{true, std::string("2 curves, 41 samples each")};
  });
}

void levelset_checks(Suite& suite, const FlowConfig& cfg) {
  struct Case {
    const char* name;
    ClosedCurve gamma;
  };
  const std::vector<Case> cases = {{"circle", circle_curve(1.0, 256)}, {"ellipse", ellipse_curve(1.5, 1.0, 256)}};
  const double t = 0.1;
  std::vector<LevelSetResult> results;
  std::vector<ClosedCurve> direct;
  for (const Case& c : cases) {
    results.push_back(levelset_evolve(c.gamma, t, 3, 0.2, cfg));
    direct.push_back(evolve(c.gamma, t, cfg).curve);
  }

  suite.run("levelset", "direct flow lies inside every annulus", [&] {
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const AnnulusFamily& f = results[i].evolved;
      for (std::size_t k = 0; k < f.levels(); ++k) {
        for (const Point2& v : direct[i].vertices()) {
          if (classify_point(f.inner[k], v, 0.0) != Side::exterior ||
              classify_point(f.outer[k], v, 0.0) != Side::interior) {
            return std::pair{false, std::string(cases[i].name) + " level " + std::to_string(k + 1)};
          }
        }
      }
    }
    return std::pair{true, std::string("circle and ellipse, K=3")};
  });

  suite.run("levelset", "representative matches direct flow", [&] {
    std::string detail;
    bool ok = true;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const double h = hausdorff(results[i].representative, direct[i]).value;
      const double bound = results[i].width + 2.0 * max_edge_length(direct[i]);
      ok = ok && h <= bound;
      detail += std::string(cases[i].name) + fmt(" %.3g <= %.3g; ", h, bound);
    }
    return std::pair{ok, detail};
  });

  suite.run("levelset", "widths shrink by 1.5 per level", [&] {
    std::string detail;
    bool ok = true;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto& w = results[i].per_k_widths;
      for (std::size_t k = 1; k < w.size(); ++k) {
        ok = ok && w[k - 1] >= 1.5 * w[k];
        detail += fmt("%.3f ", w[k - 1] / w[k]);
      }
    }
    return std::pair{ok, "ratios " + detail};
  });
}

void intersect_checks(Suite& suite, const FlowConfig& cfg) {
  const ClosedCurve c0 = circle_curve(1.0, 256);
  const ClosedCurve c1 = circle_curve(1.0, 256, {1.0, 0.0});

  suite.run("intersect", "intersection count never increases", [&] {
    const std::vector<std::pair<ClosedCurve, ClosedCurve>> pairs = {
        {c0, c1}, {ellipse_curve(1.5, 1.0, 256), ellipse_curve(1.5, 1.0, 256, {}, 0.5 * std::numbers::pi)}};
    std::string detail;
    for (const auto& [a, b] : pairs) {
      const MonotonicityReport r = check_count_monotone(a, b, uniform_grid(0.45, 45), cfg);
      if (!r.monotone) return std::pair{false, r.detail};
      detail += std::to_string(r.series.samples.front().count) + "->" +
                std::to_string(r.series.samples.back().count) + " ";
    }
    return std::pair{true, detail};
  });

  const IntersectionRecord start = intersect_curves(c0, c1);
  const Point2 upper = start.points[0].y > 0 ? start.points[0] : start.points[1];
  const Point2 lower = start.points[0].y > 0 ? start.points[1] : start.points[0];

  suite.run("intersect", "trajectory steps scale like sqrt(dt)", [&] {
    auto worst_ratio = [&](std::size_t intervals) {
      TrackOptions o;
      o.intervals = intervals;
      const Trajectory tr = track_intersection(c0, c1, upper, 0.3, cfg, o);
      double worst = 0.0;
      for (std::size_t i = 1; i < tr.samples.size(); ++i) {
        const double dt = tr.samples[i].time - tr.samples[i - 1].time;
        worst = std::max(worst, distance(tr.samples[i].point, tr.samples[i - 1].point) / std::sqrt(dt));
      }
      return worst;
    };
    // C is fitted on the coarse run; refining must not make steps outgrow it.
    const double c_fit = worst_ratio(16);
    const double c_fine = worst_ratio(64);
    return std::pair{c_fine <= 2.0 * c_fit, fmt("C fitted %.3g, refined %.3g", c_fit, c_fine)};
  });

  suite.run("intersect", "every time-T point is reached by a trajectory", [&] {
    const double T = 0.2;
    const Trajectory tu = track_intersection(c0, c1, upper, T, cfg);
    const Trajectory tl = track_intersection(c0, c1, lower, T, cfg);
    const IntersectionRecord at_t = intersect_curves(evolve(c0, T, cfg).curve, evolve(c1, T, cfg).curve);
    const double tol = 2.0 * max_edge_length(tu.final_a);
    for (const Point2& p : at_t.points) {
      const double d = std::min(distance(p, tu.samples.back().point), distance(p, tl.samples.back().point));
      if (d > tol) return std::pair{false, fmt("point (%.4g, %.4g) missed by %.3g", p.x, p.y, d)};
    }
    return std::pair{at_t.count() == 2, std::to_string(at_t.count()) + " points at T reached"};
  });

  // A crossing with angle above twice the threshold continues to the next
  // sample. When one is missing there, the interval is bisected down to the
  // last time the crossing still exists; by then it must have weakened to a
  // near-tangency, otherwise it vanished abruptly.
  suite.run("intersect", "strongly transversal crossings persist", [&] {
    IntersectOptions strong;
    strong.angle_threshold = 2.0 * kDefaultAngleThreshold;
    constexpr double kReach = 0.25;
    auto nearest = [](const IntersectionRecord& r, Point2 p) {
      std::size_t best = r.count();
      double d = kReach;
      for (std::size_t j = 0; j < r.count(); ++j) {
        if (distance(r.points[j], p) <= d) {
          d = distance(r.points[j], p);
          best = j;
        }
      }
      return best;
    };
    FlowState a = FlowState::start(c0), b = FlowState::start(c1);
    IntersectionRecord prev = intersect_curves(a.curve, b.curve, strong);
    std::size_t checked = 0, faded = 0;
    for (double t : uniform_grid(0.4, 40)) {
      if (t == 0.0) continue;
      const FlowState a0 = a, b0 = b;
      a = advance(std::move(a), t, cfg);
      b = advance(std::move(b), t, cfg);
      if (!a.alive() || !b.alive()) break;
      const IntersectionRecord now = intersect_curves(a.curve, b.curve, strong);
      for (std::size_t i = 0; i < prev.count(); ++i) {
        if (prev.kinds[i] != CrossingKind::transversal) continue;
        ++checked;
        if (nearest(now, prev.points[i]) < now.count()) continue;
        FlowState la = a0, lb = b0;
        Point2 p = prev.points[i];
        CrossingKind kind = prev.kinds[i];
        double hi = t;
        for (int it = 0; it < 24; ++it) {
          const double mid = 0.5 * (la.time + hi);
          FlowState ma = advance(la, mid, cfg), mb = advance(lb, mid, cfg);
          const IntersectionRecord r = intersect_curves(ma.curve, mb.curve, strong);
          const std::size_t j = nearest(r, p);
          if (j < r.count()) {
            la = std::move(ma);
            lb = std::move(mb);
            p = r.points[j];
            kind = r.kinds[j];
          } else {
            hi = mid;
          }
        }
        if (kind != CrossingKind::tangential) {
          return std::pair{false, fmt("crossing vanished while strongly transversal near t=%.6g", la.time)};
        }
        ++faded;
      }
      prev = now;
    }
    return std::pair{true, std::to_string(checked) + " continuations checked, " + std::to_string(faded) +
                               " crossing(s) faded through a near-tangency"};
  });
}

void family_checks(Suite& suite, const FlowConfig& cfg, std::uint64_t seed) {
  const ClosedCurve circle = circle_curve(1.0, 256);
  const ClosedCurve star = generate_corpus("stars", seed)[0].curve;

  suite.run("family", "every member meets gamma at exactly two points", [&] {
    std::size_t built = 0;
    for (const ClosedCurve& g : {circle, star}) {
      const double T = family_horizon(g, cfg);
      for (std::size_t a = 0; a < 4; ++a) {
        for (double s : {0.125, 0.5, 0.875}) {
          const EtaCurve eta = build_eta(g, make_eta_params(g, g[a * g.size() / 4], s, T));
          const IntersectionRecord r = clustered_intersections(eta.curve, g);
          if (r.overlap || r.count() != 2) {
            return std::pair{false, std::to_string(r.count()) + fmt(" points at anchor %.0f, s=%.3g", static_cast<double>(a), s)};
          }
          ++built;
        }
      }
    }
    return std::pair{true, std::to_string(built) + " members"};
  });

  suite.run("family", "every member survives to the horizon", [&] {
    std::size_t ok = 0;
    for (const ClosedCurve& g : {circle, star}) {
      const double T = family_horizon(g, cfg);
      for (std::size_t a : {0u, 2u}) {
        for (double s : {0.0, 0.5, 1.0}) {
          const EtaCurve eta = build_eta(g, make_eta_params(g, g[a * g.size() / 4], s, T));
          if (!evolve(eta.curve, T, cfg).alive()) return std::pair{false, fmt("member s=%.3g extinct before T", s)};
          ++ok;
        }
      }
    }
    return std::pair{true, std::to_string(ok) + " members alive at T"};
  });

  suite.run("family", "class labels are ordered along an s-scan", [&] {
    const double T = family_horizon(star, cfg);
    const FamilyProbe probe(star, 0.75 * T, cfg);
    const auto labels = scan_family(probe, make_eta_params(star, star[0], 0.0, T), 8);
    std::string seq;
    for (const LabelledS& l : labels) seq += std::string(to_string(l.label)) + ' ';
    return std::pair{labels_ordered(labels), seq};
  });

  suite.run("family", "nu1 varies continuously with the anchor", [&] {
    const ClosedCurve e = ellipse_curve(1.5, 1.0, 128);
    const double T = family_horizon(e, cfg);
    const FamilyProbe probe(e, 0.75 * T, cfg);
    std::vector<double> nu(8);
    for (std::size_t k = 0; k < 8; ++k) {
      nu[k] = find_nus(probe, make_eta_params(e, e[k * e.size() / 8], 0.0, T)).nu1;
    }
    auto max_jump = [&](std::size_t stride) {
      double j = 0.0;
      for (std::size_t k = 0; k < nu.size(); k += stride) j = std::max(j, std::abs(nu[(k + stride) % nu.size()] - nu[k]));
      return j;
    };
    const double coarse = max_jump(2), fine = max_jump(1);
    // nu1 is only known to within tol_s, which bounds what halving can show.
    return std::pair{fine <= 0.5 * coarse + kDefaultTolS, fmt("max jump %.4g at 4 anchors, %.4g at 8", coarse, fine)};
  });

  suite.run("family", "member at nu1 touches evolved gamma once", [&] {
    const double T = family_horizon(circle, cfg);
    const FamilyProbe probe(circle, 0.75 * T, cfg);
    EtaParams p = make_eta_params(circle, circle[0], 0.0, T);
    const NuTriple nus = find_nus(probe, p, 1.0 / 16384.0);
    p.s = nus.nu1;
    const ClosedCurve e = probe.evolve_member(build_eta(circle, p).curve);
    const IntersectionRecord r = clustered_intersections(e, probe.evolved_gamma());
    return std::pair{r.count() == 1 && !r.overlap, std::to_string(r.count()) + fmt(" clustered point(s) at nu1=%.5g", nus.nu1)};
  });

  suite.run("family", "continuity table nonincreasing above its floor", [&] {
    const ClosedCurve e = ellipse_curve(1.5, 1.0, 256);
    const std::vector<double> eps = {0.2, 0.1, 0.05, 0.025, 0.0};
    const ContinuityTable table = continuity_experiment(e, 0.3, eps, 3, cfg);
    const double floor = table.rows.back().frechet;
    std::string detail;
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
      if (!table.rows[k].ok()) return std::pair{false, table.rows[k].error};
      detail += fmt("%.3g ", table.rows[k].frechet);
      if (k > 0 && table.rows[k].frechet > table.rows[k - 1].frechet + floor) {
        return std::pair{false, "column rises: " + detail};
      }
    }
    return std::pair{true, detail};
  });
}

void io_checks(Suite& suite, std::mt19937_64& rng, std::uint64_t seed) {
  suite.run("cli_io", "curve files round-trip exactly", [&rng] {
    const ClosedCurve c = random_star_polygon(rng, 256, {0.3, -1e-7}, 1e3);
    for (CurveFormat f : {CurveFormat::json, CurveFormat::csv}) {
      const ClosedCurve back = parse_curve(serialize_curve(c, f), f);
      if (back.size() != c.size()) return std::pair{false, std::string("vertex count changed")};
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (distance(back[i], c[i]) > 1e-12 * norm(c[i])) return std::pair{false, std::string("vertex moved")};
      }
    }
    return std::pair{true, std::string("json and csv")};
  });

  suite.run("cli_io", "corpus generation is deterministic", [seed] {
    for (std::string_view name : corpus_names()) {
      const auto a = generate_corpus(name, seed), b = generate_corpus(name, seed);
      if (a.size() != b.size()) return std::pair{false, std::string(name)};
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || !(a[i].curve == b[i].curve)) return std::pair{false, std::string(name)};
      }
    }
    return std::pair{true, std::to_string(corpus_names().size()) + " sets"};
  });

  suite.run("cli_io", "SVG output is deterministic", [] {
    const std::vector<std::pair<ClosedCurve, CurveStyle>> in = {{circle_curve(1.0, 64), {}},
                                                               {ellipse_curve(2.0, 1.0, 64), {"#d62728", 2.0, true}}};
    return std::pair{render_svg(in) == render_svg(in), std::string("2 curves")};
  });
}

}  // namespace

std::vector<PropertyResult> run_property_suite(std::uint64_t seed, const FlowConfig& cfg) {
  cfg.check();
  Suite suite;
  std::mt19937_64 rng(seed);
  geometry_checks(suite, rng);
  metric_checks(suite, rng);
  flow_checks(suite, cfg);
  levelset_checks(suite, cfg);
  intersect_checks(suite, cfg);
  family_checks(suite, cfg, seed);
  io_checks(suite, rng, seed);
  return suite.results;
}

std::string format_property_table(const std::vector<PropertyResult>& results) {
  std::size_t wm = 6, wn = 8;
  for (const auto& r : results) {
    wm = std::max(wm, r.module.size());
    wn = std::max(wn, r.name.size());
  }
  std::ostringstream out;
  char buf[64];
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
  out << pad("module", wm) << "  " << pad("property", wn) << "  result  seconds  detail\n";
  std::size_t failed = 0;
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%7.2f", r.seconds);
    out << pad(r.module, wm) << "  " << pad(r.name, wn) << "  " << (r.passed ? "PASS  " : "FAIL  ") << "  "
        << buf << "  " << r.detail << '\n';
    failed += r.passed ? 0 : 1;
  }
  out << results.size() - failed << " passed, " << failed << " failed\n";
  return out.str();
}

}  // namespace cflow
