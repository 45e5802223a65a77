#include "cflow/intersect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cflow/error.hpp"
#include "cflow/segments.hpp"

namespace cflow {

std::string_view to_string(CrossingKind kind) {
  return kind == CrossingKind::transversal ? "transversal" : "tangential";
}

std::string_view to_string(TrackEnd end) {
  switch (end) {
    case TrackEnd::completed: return "completed";
    case TrackEnd::merged: return "merged";
    case TrackEnd::ambiguous: return "merge event";
    case TrackEnd::extinct: return "extinct";
  }
  return "?";
}

std::size_t IntersectionRecord::tangential_count() const {
  return static_cast<std::size_t>(std::count(kinds.begin(), kinds.end(), CrossingKind::tangential));
}

namespace {

std::vector<Segment> edges_of(const ClosedCurve& c) {
  std::vector<Segment> out;
  out.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out.push_back(edge(c, i));
  return out;
}

// Acute angle between the lines of two segments, in [0, pi/2].
double line_angle(const Segment& s, const Segment& t) {
  const Point2 d1 = s.direction();
  const Point2 d2 = t.direction();
  return std::atan2(std::abs(cross(d1, d2)), std::abs(dot(d1, d2)));
}

struct Contact {
  Point2 point;
  double angle;
};

}  // namespace

IntersectionRecord intersect_curves(const ClosedCurve& a, const ClosedCurve& b,
                                    const IntersectOptions& options) {
  if (a.empty() || b.empty()) throw PreconditionError("intersect_curves: empty curve");
  const double tol = 1e-9 * std::max(diameter(a), diameter(b));
  const double radius = options.cluster_radius > 0.0 ? options.cluster_radius : tol;

  const std::vector<Segment> ea = edges_of(a);
  const std::vector<Segment> eb = edges_of(b);
  IntersectionRecord record;
  record.angle_threshold = options.angle_threshold;

  std::vector<Contact> contacts;
  for_each_candidate_pair(ea, eb, tol, [&](std::size_t i, std::size_t j) {
    const SegmentContact c = segment_contact(ea[i], eb[j], tol);
    if (c.kind == ContactKind::none) return;
    if (c.kind == ContactKind::overlap) {
      record.overlap = true;
      return;
    }
    contacts.push_back({c.point, line_angle(ea[i], eb[j])});
  });

  if (record.overlap) return record;

  // Greedy clustering in a deterministic order (lexicographic by position).
  std::sort(contacts.begin(), contacts.end(), [](const Contact& p, const Contact& q) {
    return p.point.x < q.point.x || (p.point.x == q.point.x && p.point.y < q.point.y);
  });
  std::vector<bool> used(contacts.size(), false);
  for (std::size_t i = 0; i < contacts.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::vector<std::size_t> members{i};
    // Grow the cluster transitively so a chain of close contacts is one point.
    for (std::size_t m = 0; m < members.size(); ++m) {
      for (std::size_t j = i + 1; j < contacts.size(); ++j) {
        if (!used[j] && distance(contacts[members[m]].point, contacts[j].point) <= radius) {
          used[j] = true;
          members.push_back(j);
        }
      }
    }
    Point2 sum;
    double max_angle = 0.0;
    for (std::size_t m : members) {
      sum += contacts[m].point;
      max_angle = std::max(max_angle, contacts[m].angle);
    }
    record.points.push_back(sum / static_cast<double>(members.size()));
    record.kinds.push_back(max_angle < options.angle_threshold ? CrossingKind::tangential
                                                               : CrossingKind::transversal);
  }
  return record;
}

namespace {

void check_grid(std::span<const double> t_grid, const char* who) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw PreconditionError(std::string(who) + ": time grid must be increasing and >= 0");
    }
  }
}

}  // namespace

CountSeries count_over_time(const ClosedCurve& a, const ClosedCurve& b,
                            std::span<const double> t_grid, const FlowConfig& cfg,
                            const IntersectOptions& options) {
  check_grid(t_grid, "count_over_time");
  CountSeries series;
  if (t_grid.empty()) return series;
  FlowState sa = FlowState::start(a);
  FlowState sb = FlowState::start(b);
  for (double t : t_grid) {
    sa = advance(std::move(sa), t, cfg);
    sb = advance(std::move(sb), t, cfg);
    if (!sa.alive() || !sb.alive()) {
      series.extinction_time = std::min(sa.alive() ? t : sa.extinction->time,
                                        sb.alive() ? t : sb.extinction->time);
      break;
    }
    const IntersectionRecord r = intersect_curves(sa.curve, sb.curve, options);
    series.samples.push_back({t, r.count(), r.tangential_count(), r.overlap});
  }
  return series;
}

Trajectory track_intersection(const ClosedCurve& a, const ClosedCurve& b, Point2 x, double t_end,
                              const FlowConfig& cfg, const TrackOptions& options) {
  if (!(t_end >= 0.0)) throw PreconditionError("track_intersection: t_end must be >= 0");
  if (options.intervals == 0) throw PreconditionError("track_intersection: intervals must be > 0");
  const IntersectionRecord start = intersect_curves(a, b, options.intersect);
  if (start.count() != 2 || start.overlap) {
    throw PreconditionError("track_intersection: curves must cross at exactly 2 points (found " +
                            std::to_string(start.count()) + ")");
  }
  const double seed_tol = options.seed_tolerance > 0.0
                              ? options.seed_tolerance
                              : std::max(max_edge_length(a), max_edge_length(b));
  const std::size_t nearest =
      distance(start.points[0], x) <= distance(start.points[1], x) ? 0 : 1;
  if (distance(start.points[nearest], x) > seed_tol) {
    throw PreconditionError("track_intersection: seed is not an intersection point");
  }

  Trajectory traj;
  traj.seed = x;
  traj.samples.push_back({0.0, start.points[nearest]});
  traj.final_a = a;
  traj.final_b = b;
  if (t_end == 0.0) return traj;

  const double tie_tol = 1e-9 * std::max(diameter(a), diameter(b));
  FlowState sa = FlowState::start(a);
  FlowState sb = FlowState::start(b);
  for (std::size_t i = 1; i <= options.intervals; ++i) {
    const double t = i == options.intervals
                         ? t_end
                         : t_end * static_cast<double>(i) / static_cast<double>(options.intervals);
    sa = advance(std::move(sa), t, cfg);
    sb = advance(std::move(sb), t, cfg);
    if (!sa.alive() || !sb.alive()) {
      traj.end = TrackEnd::extinct;
      return traj;
    }
    traj.final_a = sa.curve;
    traj.final_b = sb.curve;
    const IntersectionRecord r = intersect_curves(sa.curve, sb.curve, options.intersect);
    if (r.count() == 0) {
      traj.end = TrackEnd::merged;
      traj.merge_time = t;
      return traj;
    }
    const Point2 prev = traj.samples.back().point;
    std::vector<std::pair<double, std::size_t>> by_distance;
    for (std::size_t k = 0; k < r.count(); ++k) by_distance.push_back({distance(prev, r.points[k]), k});
    std::sort(by_distance.begin(), by_distance.end());
    if (by_distance.size() > 1 && by_distance[1].first - by_distance[0].first <= tie_tol) {
      traj.end = TrackEnd::ambiguous;
      return traj;
    }
    traj.samples.push_back({t, r.points[by_distance[0].second]});
    if (r.count() == 2) {
      const double merge_gap = 2.0 * std::max(max_edge_length(sa.curve), max_edge_length(sb.curve));
      if (distance(r.points[0], r.points[1]) <= merge_gap) {
        traj.end = TrackEnd::merged;
        traj.merge_time = t;
        return traj;
      }
    }
  }
  return traj;
}

}  // namespace cflow
