#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "cflow/geometry.hpp"

namespace cflow {

struct Segment {
  Point2 a;
  Point2 b;

  Point2 direction() const { return b - a; }
  double length() const { return distance(a, b); }
};

// Edge i of a closed curve: vertex i to vertex i+1 (cyclic).
Segment edge(const ClosedCurve& curve, std::size_t i);

// Sign-tolerant orientation of c relative to the directed line a->b.
// Returns +1 (left), -1 (right) or 0 when |cross| <= eps.
int orient(Point2 a, Point2 b, Point2 c, double eps);

struct PointSegmentDistance {
  double distance;
  double param;  // closest point is lerp(s.a, s.b, param)
};
PointSegmentDistance point_segment_distance(Point2 p, const Segment& s);

enum class ContactKind { none, crossing, touch, overlap };

// How two closed segments meet. `crossing` is a proper crossing with both
// parameters interior; `touch` is contact within tol at or near an endpoint
// (or a non-overlapping collinear meeting); `overlap` is a collinear shared
// piece longer than tol.
struct SegmentContact {
  ContactKind kind = ContactKind::none;
  Point2 point;
  double ta = 0.0;
  double tb = 0.0;
};

SegmentContact segment_contact(const Segment& s, const Segment& t, double tol);

// Calls fn(i, j) for every pair of segments whose bounding boxes, padded by
// pad, overlap. With `second` empty the pairs are drawn from `first` alone
// (i < j); otherwise i indexes `first` and j indexes `second`.
void for_each_candidate_pair(std::span<const Segment> first,
                             std::span<const Segment> second, double pad,
                             const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace cflow
