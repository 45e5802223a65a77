#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cflow/flow.hpp"
#include "cflow/geometry.hpp"

namespace cflow {

enum class CrossingKind { transversal, tangential };
std::string_view to_string(CrossingKind kind);

inline constexpr double kDefaultAngleThreshold = 0.02;

struct IntersectOptions {
  // Clusters whose largest edge-pair crossing angle is below this are tangential.
  double angle_threshold = kDefaultAngleThreshold;
  // Contacts closer than this are merged into one point. Zero means the
  // contact tolerance 1e-9 * (larger diameter).
  double cluster_radius = 0.0;
};

struct IntersectionRecord {
  std::vector<Point2> points;
  std::vector<CrossingKind> kinds;
  double angle_threshold = kDefaultAngleThreshold;
  // Set when the curves share a collinear piece. Such a record carries no
  // points: the contact set is not finite.
  bool overlap = false;

  std::size_t count() const { return points.size(); }
  std::size_t tangential_count() const;
};

IntersectionRecord intersect_curves(const ClosedCurve& a, const ClosedCurve& b,
                                    const IntersectOptions& options = {});

struct CountSample {
  double time;
  std::size_t count;
  std::size_t tangential;
  bool overlap;
};

struct CountSeries {
  std::vector<CountSample> samples;
  // Set when either curve went extinct before the last grid time.
  std::optional<double> extinction_time;
};

// Both curves are evolved with the same configuration and sampled on the
// same grid.
CountSeries count_over_time(const ClosedCurve& a, const ClosedCurve& b,
                            std::span<const double> t_grid, const FlowConfig& cfg,
                            const IntersectOptions& options = {});

enum class TrackEnd {
  completed,  // reached t_end
  merged,     // the two intersection points met (or vanished)
  ambiguous,  // two candidates equidistant from the last sample: merge event
  extinct,    // one of the curves shrank to a point
};
std::string_view to_string(TrackEnd end);

struct TrajectorySample {
  double time;
  Point2 point;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  Point2 seed;
  TrackEnd end = TrackEnd::completed;
  std::optional<double> merge_time;
  // Curves at the time of the last sample.
  ClosedCurve final_a;
  ClosedCurve final_b;
};

struct TrackOptions {
  // Number of equal time intervals between 0 and t_end.
  std::size_t intervals = 64;
  IntersectOptions intersect;
  // A seed farther than this from every intersection point is rejected.
  // Zero means the larger max edge length of the two curves.
  double seed_tolerance = 0.0;
};

// Follows the intersection point that starts at x. The pair must cross at
// exactly two points initially. Throws PreconditionError when x is not one
// of them.
Trajectory track_intersection(const ClosedCurve& a, const ClosedCurve& b, Point2 x, double t_end,
                              const FlowConfig& cfg, const TrackOptions& options = {});

}  // namespace cflow
