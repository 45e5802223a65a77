#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cflow {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2() = default;
  constexpr Point2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Point2& operator+=(Point2 o) { x += o.x; y += o.y; return *this; }
  constexpr Point2& operator-=(Point2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Point2& operator*=(double s) { x *= s; y *= s; return *this; }

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator-(Point2 a) { return {-a.x, -a.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {a.x * s, a.y * s}; }
  friend constexpr Point2 operator/(Point2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Point2, Point2) = default;

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
constexpr Point2 perp(Point2 a) { return {-a.y, a.x}; }
constexpr Point2 lerp(Point2 a, Point2 b, double t) { return a + (b - a) * t; }
inline Point2 normalized(Point2 a) {
  const double n = norm(a);
  return n > 0.0 ? a / n : Point2{};
}

enum class Orientation { counterclockwise, clockwise };

// A closed polygon given by its cyclic vertex sequence; the closing edge from
// the last vertex back to the first is implicit. Construction does not enforce
// the Jordan invariants so that malformed input can be inspected with
// validate(); operations that need a Jordan polygon call require_valid().
class ClosedCurve {
 public:
  ClosedCurve() = default;
  // Orientation derived from the sign of the shoelace area.
  explicit ClosedCurve(std::vector<Point2> vertices);
  ClosedCurve(std::vector<Point2> vertices, Orientation orientation);

  std::span<const Point2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  const Point2& operator[](std::size_t i) const { return vertices_[i]; }
  // Index taken modulo size(); negative indices wrap.
  const Point2& cyclic(std::ptrdiff_t i) const;
  Orientation orientation() const { return orientation_; }

  friend bool operator==(const ClosedCurve&, const ClosedCurve&) = default;

 private:
  std::vector<Point2> vertices_;
  Orientation orientation_ = Orientation::counterclockwise;
};

enum class ViolationKind {
  too_few_vertices,
  non_finite_coordinate,
  degenerate_edge,
  not_simple,
  zero_area,
  orientation_mismatch,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string summary() const;
};

inline constexpr std::size_t kMinVertices = 8;

ValidationReport validate(const ClosedCurve& curve);
// Throws InvalidCurveError carrying the violation summary.
void require_valid(const ClosedCurve& curve, std::string_view context);
// Only the simplicity part of validate(); used by the flow's embeddedness guard.
bool is_simple(const ClosedCurve& curve);

double signed_area(const ClosedCurve& curve);
double length(const ClosedCurve& curve);
double min_edge_length(const ClosedCurve& curve);
double max_edge_length(const ClosedCurve& curve);
double mean_edge_length(const ClosedCurve& curve);
// Area centroid (falls back to the vertex mean for zero area).
Point2 centroid(const ClosedCurve& curve);
// Largest distance between two vertices.
double diameter(const ClosedCurve& curve);
// Diagonal of the axis-aligned bounding box; used to scale tolerances.
double bbox_diagonal(const ClosedCurve& curve);

// Menger curvature vector at vertex i: magnitude 1/R of the circle through
// the vertex and its two neighbours, pointing at that circle's centre.
Point2 curvature_vector(const ClosedCurve& curve, std::size_t i);

// Sum of turning angles of the wrong sign for the curve's orientation; zero
// exactly when the polygon is convex.
double convexity_defect(const ClosedCurve& curve);

enum class Side { interior, exterior, boundary };
std::string_view to_string(Side side);

Side classify_point(const ClosedCurve& curve, Point2 p, double tol);
// Winding number of the curve around p (p must not lie on the curve).
int winding_number(const ClosedCurve& curve, Point2 p);

struct Projection {
  Point2 point;
  std::size_t edge = 0;  // edge i runs from vertex i to vertex i+1
  double param = 0.0;    // position along the edge in [0, 1]
  double distance = 0.0;
};

Projection project(const ClosedCurve& curve, Point2 p);
Point2 project_to_curve(const ClosedCurve& curve, Point2 p);
double distance_to_curve(const ClosedCurve& curve, Point2 p);
bool dilate_contains(const ClosedCurve& curve, Point2 p, double delta);

// n vertices equally spaced in arc length, starting at vertex 0.
ClosedCurve resample(const ClosedCurve& curve, std::size_t n);

enum class OffsetSide { inward, outward };
ClosedCurve offset_curve(const ClosedCurve& curve, double delta, OffsetSide side);

ClosedCurve translate(const ClosedCurve& curve, Point2 by);
ClosedCurve rotate(const ClosedCurve& curve, double angle, Point2 about = {});
ClosedCurve scale(const ClosedCurve& curve, double factor, Point2 about = {});
// Same point set traversed the other way.
ClosedCurve reversed(const ClosedCurve& curve);
// Same point set with the vertex list rotated so that vertex k comes first.
ClosedCurve shifted(const ClosedCurve& curve, std::size_t k);

}  // namespace cflow
