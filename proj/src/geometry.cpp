#include "cflow/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "cflow/error.hpp"
#include "cflow/segments.hpp"
#include "detail.hpp"

namespace cflow {

namespace {

double shoelace(std::span<const Point2> v) {
  const std::size_t n = v.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice += cross(v[i], v[(i + 1) % n]);
  return 0.5 * twice;
}

std::vector<Segment> edges_of(const ClosedCurve& c) {
  std::vector<Segment> out;
  out.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out.push_back(edge(c, i));
  return out;
}

double bbox_diagonal_of(std::span<const Point2> v) {
  if (v.empty()) return 0.0;
  double x0 = v[0].x, x1 = v[0].x, y0 = v[0].y, y1 = v[0].y;
  for (const Point2& p : v) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return std::hypot(x1 - x0, y1 - y0);
}

bool adjacent(std::size_t i, std::size_t j, std::size_t n) {
  return j == i + 1 || (i == 0 && j == n - 1);
}

// Returns the first offending edge pair, or {n, n} when simple.
std::pair<std::size_t, std::size_t> find_self_contact(const ClosedCurve& c) {
  const std::size_t n = c.size();
  const std::vector<Segment> segs = edges_of(c);
  const double tol = 1e-12 * std::max(bbox_diagonal_of(c.vertices()), 1e-300);
  std::pair<std::size_t, std::size_t> hit{n, n};
  for_each_candidate_pair(segs, {}, tol, [&](std::size_t i, std::size_t j) {
    if (hit.first != n) return;
    const SegmentContact contact = segment_contact(segs[i], segs[j], tol);
    if (adjacent(i, j, n)) {
      // Neighbouring edges always share a vertex; only a fold-back counts.
      if (contact.kind == ContactKind::overlap) hit = {i, j};
    } else if (contact.kind != ContactKind::none) {
      hit = {i, j};
    }
  });
  return hit;
}

double orientation_sign(const ClosedCurve& c) {
  return signed_area(c) >= 0.0 ? 1.0 : -1.0;
}

}  // namespace

ClosedCurve::ClosedCurve(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  orientation_ = shoelace(vertices_) >= 0.0 ? Orientation::counterclockwise
                                             : Orientation::clockwise;
}

ClosedCurve::ClosedCurve(std::vector<Point2> vertices, Orientation orientation)
    : vertices_(std::move(vertices)), orientation_(orientation) {}

const Point2& ClosedCurve::cyclic(std::ptrdiff_t i) const {
  const auto n = static_cast<std::ptrdiff_t>(vertices_.size());
  return vertices_[static_cast<std::size_t>(((i % n) + n) % n)];
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].detail;
  }
  return os.str();
}

ValidationReport validate(const ClosedCurve& curve) {
  ValidationReport report;
  const std::size_t n = curve.size();
  if (n < kMinVertices) {
    report.violations.push_back({ViolationKind::too_few_vertices,
                                 "too few vertices: " + std::to_string(n) + " < " +
                                     std::to_string(kMinVertices)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!curve[i].finite()) {
      report.violations.push_back({ViolationKind::non_finite_coordinate,
                                   "non-finite coordinate at vertex " + std::to_string(i)});
      return report;
    }
  }
  if (n < 3) return report;

  const double scale = bbox_diagonal(curve);
  bool degenerate = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(curve[i], curve.cyclic(static_cast<std::ptrdiff_t>(i) + 1)) <= 1e-12 * scale) {
      report.violations.push_back({ViolationKind::degenerate_edge,
                                   "degenerate edge at vertex " + std::to_string(i)});
      degenerate = true;
      break;
    }
  }
  if (!degenerate) {
    const auto [i, j] = find_self_contact(curve);
    if (i != n) {
      report.violations.push_back({ViolationKind::not_simple,
                                   "not simple: edges " + std::to_string(i) + " and " +
                                       std::to_string(j) + " meet"});
    }
  }
  const double area = signed_area(curve);
  if (std::abs(area) <= 1e-12 * scale * scale) {
    report.violations.push_back({ViolationKind::zero_area, "zero signed area"});
  } else {
    const bool ccw = area > 0.0;
    if (ccw != (curve.orientation() == Orientation::counterclockwise)) {
      report.violations.push_back({ViolationKind::orientation_mismatch,
                                   "orientation flag disagrees with signed area"});
    }
  }
  return report;
}

void require_valid(const ClosedCurve& curve, std::string_view context) {
  const ValidationReport report = validate(curve);
  if (!report.ok()) {
    throw InvalidCurveError(std::string(context) + ": " + report.summary());
  }
}

bool is_simple(const ClosedCurve& curve) {
  if (curve.size() < 3) return false;
  return find_self_contact(curve).first == curve.size();
}

double signed_area(const ClosedCurve& curve) { return shoelace(curve.vertices()); }

double length(const ClosedCurve& curve) {
  double total = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) total += edge(curve, i).length();
  return total;
}

double min_edge_length(const ClosedCurve& curve) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.size(); ++i) m = std::min(m, edge(curve, i).length());
  return m;
}

double max_edge_length(const ClosedCurve& curve) {
  double m = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) m = std::max(m, edge(curve, i).length());
  return m;
}

double mean_edge_length(const ClosedCurve& curve) {
  return curve.empty() ? 0.0 : length(curve) / static_cast<double>(curve.size());
}

Point2 centroid(const ClosedCurve& curve) {
  const std::size_t n = curve.size();
  if (n == 0) return {};
  double a2 = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = curve[i];
    const Point2 q = curve[(i + 1) % n];
    const double w = cross(p, q);
    a2 += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  if (std::abs(a2) <= 1e-300) {
    Point2 mean;
    for (const Point2& p : curve.vertices()) mean += p;
    return mean / static_cast<double>(n);
  }
  return {cx / (3.0 * a2), cy / (3.0 * a2)};
}

double diameter(const ClosedCurve& curve) {
  double d = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i)
    for (std::size_t j = i + 1; j < curve.size(); ++j) d = std::max(d, distance(curve[i], curve[j]));
  return d;
}

double bbox_diagonal(const ClosedCurve& curve) { return bbox_diagonal_of(curve.vertices()); }

Point2 curvature_vector(const ClosedCurve& curve, std::size_t i) {
  const auto k = static_cast<std::ptrdiff_t>(i);
  const Point2 b = curve.cyclic(k);
  const Point2 u = curve.cyclic(k - 1) - b;
  const Point2 w = curve.cyclic(k + 1) - b;
  const double d = 2.0 * cross(u, w);
  const double uu = dot(u, u);
  const double ww = dot(w, w);
  if (std::abs(d) <= 1e-14 * std::sqrt(uu * ww)) return {};
  // Circumcentre relative to b; the curvature vector is (o - b) / |o - b|^2.
  const Point2 o{(w.y * uu - u.y * ww) / d, (u.x * ww - w.x * uu) / d};
  return o / dot(o, o);
}

double convexity_defect(const ClosedCurve& curve) {
  const double sign = orientation_sign(curve);
  double defect = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(curve.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Point2 e0 = curve.cyclic(i) - curve.cyclic(i - 1);
    const Point2 e1 = curve.cyclic(i + 1) - curve.cyclic(i);
    const double turn = std::atan2(cross(e0, e1), dot(e0, e1));
    defect += std::max(0.0, -sign * turn);
  }
  return defect;
}

std::string_view to_string(Side side) {
  switch (side) {
    case Side::interior: return "interior";
    case Side::exterior: return "exterior";
    case Side::boundary: return "boundary";
  }
  return "?";
}

namespace {

// Ray direction from p that passes no vertex of the curve. The first angle is
// deliberately off-axis; later ones perturb it when a vertex lies on the ray.
Point2 clear_ray(const ClosedCurve& curve, Point2 p) {
  for (int k = 0; k < 64; ++k) {
    const double angle = 0.1234567 + 0.7390851 * k;
    const Point2 d{std::cos(angle), std::sin(angle)};
    bool clear = true;
    for (const Point2& v : curve.vertices()) {
      const Point2 r = v - p;
      if (dot(r, d) > 0.0 && std::abs(cross(d, r)) <= 1e-12 * norm(r)) {
        clear = false;
        break;
      }
    }
    if (clear) return d;
  }
  return {std::cos(0.1234567), std::sin(0.1234567)};
}

}  // namespace

int winding_number(const ClosedCurve& curve, Point2 p) {
  const Point2 d = clear_ray(curve, p);
  int winding = 0;
  const std::size_t n = curve.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = curve[i] - p;
    const Point2 b = curve[(i + 1) % n] - p;
    const double sa = cross(d, a);
    const double sb = cross(d, b);
    if ((sa > 0.0) == (sb > 0.0)) continue;
    const Point2 e = b - a;
    const double lambda = cross(a, e) / cross(d, e);
    if (lambda <= 0.0) continue;
    winding += (sb > 0.0) ? 1 : -1;
  }
  return winding;
}

Side classify_point(const ClosedCurve& curve, Point2 p, double tol) {
  if (distance_to_curve(curve, p) <= tol) return Side::boundary;
  // Even-odd rule: the parity of the winding count equals the crossing parity.
  return (winding_number(curve, p) % 2 != 0) ? Side::interior : Side::exterior;
}

Projection project(const ClosedCurve& curve, Point2 p) {
  Projection best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Segment s = edge(curve, i);
    const PointSegmentDistance d = point_segment_distance(p, s);
    if (d.distance < best.distance) {
      best = {lerp(s.a, s.b, d.param), i, d.param, d.distance};
    }
  }
  return best;
}

Point2 project_to_curve(const ClosedCurve& curve, Point2 p) { return project(curve, p).point; }

double distance_to_curve(const ClosedCurve& curve, Point2 p) { return project(curve, p).distance; }

bool dilate_contains(const ClosedCurve& curve, Point2 p, double delta) {
  if (!(delta >= 0.0)) throw PreconditionError("dilate_contains: delta must be >= 0");
  return distance_to_curve(curve, p) <= delta;
}

namespace detail {

std::vector<Point2> resample_points(std::span<const Point2> v, std::size_t n) {
  const std::size_t m = v.size();
  std::vector<double> cum(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) cum[i + 1] = cum[i] + distance(v[i], v[(i + 1) % m]);
  const double total = cum[m];
  std::vector<Point2> out;
  out.reserve(n);
  std::size_t seg = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double target = total * static_cast<double>(j) / static_cast<double>(n);
    while (seg + 1 < m && cum[seg + 1] <= target) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double t = len > 0.0 ? (target - cum[seg]) / len : 0.0;
    out.push_back(lerp(v[seg], v[(seg + 1) % m], std::clamp(t, 0.0, 1.0)));
  }
  return out;
}

}  // namespace detail

ClosedCurve resample(const ClosedCurve& curve, std::size_t n) {
  if (n < kMinVertices) {
    throw PreconditionError("resample: target vertex count " + std::to_string(n) + " < " +
                            std::to_string(kMinVertices));
  }
  require_valid(curve, "resample");
  return ClosedCurve(detail::resample_points(curve.vertices(), n), curve.orientation());
}

namespace {

struct RawVertex {
  Point2 p;
  long node = -1;  // crossing id, or -1 for an ordinary vertex
};

// Splits a closed, possibly self-crossing polyline at its proper crossings
// into simple loops. Each crossing occurs twice in the expanded sequence; a
// loop is closed off whenever the walk returns to a crossing still on the
// stack.
std::vector<std::vector<Point2>> split_loops(const std::vector<Point2>& raw) {
  const std::size_t n = raw.size();
  std::vector<Segment> segs;
  segs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) segs.push_back({raw[i], raw[(i + 1) % n]});

  struct Hit {
    double t;
    long node;
    Point2 p;
  };
  std::vector<std::vector<Hit>> hits(n);
  long next_node = 0;
  const double tol = 1e-12 * std::max(bbox_diagonal_of(raw), 1e-300);
  for_each_candidate_pair(segs, {}, tol, [&](std::size_t i, std::size_t j) {
    if (adjacent(i, j, n)) return;
    const SegmentContact c = segment_contact(segs[i], segs[j], 0.0);
    if (c.kind != ContactKind::crossing) return;
    const long id = next_node++;
    hits[i].push_back({c.ta, id, c.point});
    hits[j].push_back({c.tb, id, c.point});
  });

  std::vector<RawVertex> seq;
  seq.reserve(n + 2 * static_cast<std::size_t>(next_node));
  for (std::size_t i = 0; i < n; ++i) {
    seq.push_back({raw[i], -1});
    auto& h = hits[i];
    std::sort(h.begin(), h.end(), [](const Hit& a, const Hit& b) { return a.t < b.t; });
    for (const Hit& x : h) seq.push_back({x.p, x.node});
  }

  std::vector<std::vector<Point2>> loops;
  std::vector<RawVertex> stack;
  std::unordered_map<long, std::size_t> on_stack;
  for (const RawVertex& rv : seq) {
    if (rv.node >= 0) {
      auto it = on_stack.find(rv.node);
      if (it != on_stack.end()) {
        const std::size_t pos = it->second;
        std::vector<Point2> loop;
        for (std::size_t k = pos; k < stack.size(); ++k) {
          loop.push_back(stack[k].p);
          if (k > pos && stack[k].node >= 0) on_stack.erase(stack[k].node);
        }
        stack.resize(pos + 1);
        loops.push_back(std::move(loop));
        continue;
      }
      on_stack[rv.node] = stack.size();
    }
    stack.push_back(rv);
  }
  std::vector<Point2> rest;
  for (const RawVertex& rv : stack) rest.push_back(rv.p);
  loops.push_back(std::move(rest));
  return loops;
}

}  // namespace

ClosedCurve offset_curve(const ClosedCurve& curve, double delta, OffsetSide side) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw PreconditionError("offset_curve: delta must be positive and finite");
  }
  require_valid(curve, "offset_curve");
  const std::size_t n = curve.size();
  const double sign = orientation_sign(curve);
  const double side_sign = side == OffsetSide::outward ? 1.0 : -1.0;
  const double h = mean_edge_length(curve);

  // Offset normal of each edge: outward is to the right of a CCW traversal.
  std::vector<Point2> normal(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 d = normalized(edge(curve, i).direction());
    normal[i] = Point2{d.y, -d.x} * (sign * side_sign);
  }

  std::vector<Point2> raw;
  raw.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t next = (i + 1) % n;
    const Point2 v0 = curve[i];
    const Point2 v1 = curve[next];
    raw.push_back(v0 + normal[i] * delta);
    raw.push_back(v1 + normal[i] * delta);
    // Round join around v1 from this edge's normal to the next edge's normal.
    const double a0 = std::atan2(normal[i].y, normal[i].x);
    double sweep = std::atan2(cross(normal[i], normal[next]), dot(normal[i], normal[next]));
    const auto pieces = static_cast<int>(std::ceil(std::abs(sweep) * delta / h));
    for (int k = 1; k < pieces; ++k) {
      const double a = a0 + sweep * k / pieces;
      raw.push_back(v1 + Point2{std::cos(a), std::sin(a)} * delta);
    }
  }
  // Drop coincident consecutive points.
  const double merge = 1e-12 * std::max(bbox_diagonal(curve), delta);
  std::vector<Point2> cleaned;
  cleaned.reserve(raw.size());
  for (const Point2& p : raw) {
    if (cleaned.empty() || distance(cleaned.back(), p) > merge) cleaned.push_back(p);
  }
  while (cleaned.size() > 1 && distance(cleaned.front(), cleaned.back()) <= merge) cleaned.pop_back();

  const auto loops = split_loops(cleaned);
  const std::vector<Point2>* best = nullptr;
  double best_area = 0.0;
  for (const auto& loop : loops) {
    const double a = std::abs(shoelace(loop));
    if (loop.size() >= 3 && a > best_area) {
      best_area = a;
      best = &loop;
    }
  }
  const auto collapse = [] {
    return PreconditionError("offset_curve: offset exceeds inradius");
  };
  if (best == nullptr) throw collapse();
  const double loop_sign = shoelace(*best) >= 0.0 ? 1.0 : -1.0;
  if (loop_sign != sign) throw collapse();

  double loop_length = 0.0;
  for (std::size_t i = 0; i < best->size(); ++i)
    loop_length += distance((*best)[i], (*best)[(i + 1) % best->size()]);
  const auto count = std::max<std::size_t>(
      kMinVertices, static_cast<std::size_t>(std::llround(loop_length / h)));
  std::vector<Point2> pts = detail::resample_points(*best, count);
  // Resampled vertices sit on chords of the raw loop; push each back out to
  // distance delta. A loop far closer than delta is the inverted remnant of
  // a collapsed offset.
  const std::size_t m = pts.size();
  std::vector<Point2> foot(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Projection pr = project(curve, pts[i]);
    if (pr.distance < 0.5 * delta) throw collapse();
    foot[i] = pr.point;
    pts[i] = pr.point + (pts[i] - pr.point) * (delta / pr.distance);
  }
  // The chords now sag off the offset by roughly their sagitta; move each
  // vertex by half the sagitta of its two edges so the polygon straddles it.
  std::vector<double> mid_dist(m);
  for (std::size_t i = 0; i < m; ++i) mid_dist[i] = distance_to_curve(curve, lerp(pts[i], pts[(i + 1) % m], 0.5));
  for (std::size_t i = 0; i < m; ++i) {
    const double sag = 0.5 * (mid_dist[(i + m - 1) % m] + mid_dist[i]) - delta;
    const double target = delta - 0.5 * std::clamp(sag, -0.25 * delta, 0.25 * delta);
    pts[i] = foot[i] + (pts[i] - foot[i]) * (target / delta);
  }
  ClosedCurve out(std::move(pts), curve.orientation());

  if (!validate(out).ok()) throw collapse();
  const Side expected = side == OffsetSide::inward ? Side::interior : Side::exterior;
  if (classify_point(curve, out[0], 0.0) != expected) throw collapse();
  return out;
}

ClosedCurve translate(const ClosedCurve& curve, Point2 by) {
  std::vector<Point2> v(curve.vertices().begin(), curve.vertices().end());
  for (Point2& p : v) p += by;
  return ClosedCurve(std::move(v), curve.orientation());
}

ClosedCurve rotate(const ClosedCurve& curve, double angle, Point2 about) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  std::vector<Point2> v;
  v.reserve(curve.size());
  for (const Point2& p : curve.vertices()) {
    const Point2 r = p - about;
    v.push_back(about + Point2{c * r.x - s * r.y, s * r.x + c * r.y});
  }
  return ClosedCurve(std::move(v), curve.orientation());
}

ClosedCurve scale(const ClosedCurve& curve, double factor, Point2 about) {
  if (!(factor > 0.0)) throw PreconditionError("scale: factor must be positive");
  std::vector<Point2> v;
  v.reserve(curve.size());
  for (const Point2& p : curve.vertices()) v.push_back(about + (p - about) * factor);
  return ClosedCurve(std::move(v), curve.orientation());
}

ClosedCurve reversed(const ClosedCurve& curve) {
  std::vector<Point2> v(curve.vertices().rbegin(), curve.vertices().rend());
  const Orientation o = curve.orientation() == Orientation::counterclockwise
                            ? Orientation::clockwise
                            : Orientation::counterclockwise;
  return ClosedCurve(std::move(v), o);
}

ClosedCurve shifted(const ClosedCurve& curve, std::size_t k) {
  const std::size_t n = curve.size();
  std::vector<Point2> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v.push_back(curve[(i + k) % n]);
  return ClosedCurve(std::move(v), curve.orientation());
}

}  // namespace cflow
