#include "cflow/segments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace cflow {

Segment edge(const ClosedCurve& curve, std::size_t i) {
  const std::size_t n = curve.size();
  return {curve[i % n], curve[(i + 1) % n]};
}

int orient(Point2 a, Point2 b, Point2 c, double eps) {
  const double v = cross(b - a, c - a);
  if (v > eps) return 1;
  if (v < -eps) return -1;
  return 0;
}

PointSegmentDistance point_segment_distance(Point2 p, const Segment& s) {
  const Point2 d = s.direction();
  const double len2 = dot(d, d);
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return {distance(p, lerp(s.a, s.b, t)), t};
}

namespace {

SegmentContact collinear_contact(const Segment& s, const Segment& t, double tol) {
  const Point2 d = s.direction();
  const double len = norm(d);
  if (len == 0.0) return {};
  const Point2 u = d / len;
  // Both endpoints of t must sit on s's supporting line.
  if (std::abs(cross(u, t.a - s.a)) > tol || std::abs(cross(u, t.b - s.a)) > tol) return {};
  const double t0 = dot(t.a - s.a, u);
  const double t1 = dot(t.b - s.a, u);
  const double lo = std::max(0.0, std::min(t0, t1));
  const double hi = std::min(len, std::max(t0, t1));
  if (hi < lo - tol) return {};
  SegmentContact c;
  const double mid = std::clamp(0.5 * (lo + hi), 0.0, len);
  c.point = s.a + u * mid;
  c.ta = mid / len;
  c.tb = point_segment_distance(c.point, t).param;
  c.kind = (hi - lo > tol) ? ContactKind::overlap : ContactKind::touch;
  return c;
}

}  // namespace

SegmentContact segment_contact(const Segment& s, const Segment& t, double tol) {
  const Point2 d1 = s.direction();
  const Point2 d2 = t.direction();
  const double l1 = norm(d1);
  const double l2 = norm(d2);
  const double denom = cross(d1, d2);

  if (std::abs(denom) <= 1e-12 * l1 * l2) {
    SegmentContact c = collinear_contact(s, t, tol);
    if (c.kind != ContactKind::none) return c;
  } else {
    const Point2 w = t.a - s.a;
    const double ta = cross(w, d2) / denom;
    const double tb = cross(w, d1) / denom;
    const double ea = l1 > 0.0 ? tol / l1 : 0.0;
    const double eb = l2 > 0.0 ? tol / l2 : 0.0;
    if (ta >= -ea && ta <= 1.0 + ea && tb >= -eb && tb <= 1.0 + eb) {
      SegmentContact c;
      c.ta = std::clamp(ta, 0.0, 1.0);
      c.tb = std::clamp(tb, 0.0, 1.0);
      c.point = lerp(s.a, s.b, c.ta);
      const bool interior = ta > ea && ta < 1.0 - ea && tb > eb && tb < 1.0 - eb;
      c.kind = interior ? ContactKind::crossing : ContactKind::touch;
      return c;
    }
  }

  // No crossing: the segments can still come within tol at an endpoint.
  SegmentContact best;
  double best_d = tol;
  auto consider = [&](Point2 p, const Segment& other, bool p_on_s, double p_param) {
    const PointSegmentDistance pd = point_segment_distance(p, other);
    if (pd.distance <= best_d) {
      best_d = pd.distance;
      const Point2 q = lerp(other.a, other.b, pd.param);
      best.kind = ContactKind::touch;
      best.point = 0.5 * (p + q);
      best.ta = p_on_s ? p_param : pd.param;
      best.tb = p_on_s ? pd.param : p_param;
    }
  };
  consider(s.a, t, true, 0.0);
  consider(s.b, t, true, 1.0);
  consider(t.a, s, false, 0.0);
  consider(t.b, s, false, 1.0);
  return best;
}

void for_each_candidate_pair(std::span<const Segment> first,
                             std::span<const Segment> second, double pad,
                             const std::function<void(std::size_t, std::size_t)>& fn) {
  struct Box {
    double x0, x1, y0, y1;
    std::size_t index;
    bool from_second;
  };
  const bool self = second.empty();
  std::vector<Box> boxes;
  boxes.reserve(first.size() + second.size());
  auto add = [&](std::span<const Segment> segs, bool from_second) {
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const Segment& s = segs[i];
      boxes.push_back({std::min(s.a.x, s.b.x) - pad, std::max(s.a.x, s.b.x) + pad,
                       std::min(s.a.y, s.b.y) - pad, std::max(s.a.y, s.b.y) + pad, i,
                       from_second});
    }
  };
  add(first, false);
  if (!self) add(second, true);
  std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) {
    if (a.x0 != b.x0) return a.x0 < b.x0;
    if (a.from_second != b.from_second) return !a.from_second;
    return a.index < b.index;
  });

  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Box& bi = boxes[i];
    for (std::size_t j = i + 1; j < boxes.size() && boxes[j].x0 <= bi.x1; ++j) {
      const Box& bj = boxes[j];
      if (bj.y0 > bi.y1 || bi.y0 > bj.y1) continue;
      if (self) {
        fn(std::min(bi.index, bj.index), std::max(bi.index, bj.index));
      } else if (bi.from_second != bj.from_second) {
        if (bi.from_second) fn(bj.index, bi.index);
        else fn(bi.index, bj.index);
      }
    }
  }
}

}  // namespace cflow
