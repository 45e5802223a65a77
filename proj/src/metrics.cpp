#include "cflow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "cflow/error.hpp"
#include "cflow/segments.hpp"

namespace cflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Nearest {
  double distance;
  Point2 point;
};

Nearest nearest_on(const ClosedCurve& c, Point2 p) {
  const Projection pr = project(c, p);
  return {pr.distance, pr.point};
}

// Distance to one segment is convex along a line, so over the piece p0-p1 the
// distance to b never exceeds the larger endpoint distance to any single edge.
double piece_bound(const ClosedCurve& b, Point2 p0, Point2 p1) {
  double best = kInf;
  for (std::size_t j = 0; j < b.size(); ++j) {
    const Segment e = edge(b, j);
    best = std::min(best, std::max(point_segment_distance(p0, e).distance, point_segment_distance(p1, e).distance));
  }
  return best;
}

}  // namespace

DistanceReport directed_hausdorff(const ClosedCurve& a, const ClosedCurve& b) {
  if (a.empty() || b.empty()) throw PreconditionError("hausdorff: empty curve");
  const double tol = 1e-12 * std::max(bbox_diagonal(a), bbox_diagonal(b));
  const std::size_t n = a.size();

  DistanceReport report;
  report.value = -1.0;
  std::vector<double> at_vertex(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Nearest q = nearest_on(b, a[i]);
    at_vertex[i] = q.distance;
    if (q.distance > report.value) {
      report.value = q.distance;
      report.witness = std::make_pair(a[i], q.point);
    }
  }

  // Along a piece of length L with end values f0, f1 the 1-Lipschitz distance
  // function is bounded by (f0 + f1 + L) / 2; piece_bound is tighter but costs
  // a pass over b.
  struct Piece {
    Point2 p0, p1;
    double f0, f1;
    int depth;
  };
  std::vector<Piece> stack;
  for (std::size_t i = 0; i < n; ++i) {
    stack.push_back({a[i], a[(i + 1) % n], at_vertex[i], at_vertex[(i + 1) % n], 0});
    while (!stack.empty()) {
      const Piece pc = stack.back();
      stack.pop_back();
      const double len = distance(pc.p0, pc.p1);
      if (0.5 * (pc.f0 + pc.f1 + len) <= report.value + tol || pc.depth > 60) continue;
      if (piece_bound(b, pc.p0, pc.p1) <= report.value + tol) continue;
      const Point2 mid = 0.5 * (pc.p0 + pc.p1);
      const Nearest q = nearest_on(b, mid);
      if (q.distance > report.value) {
        report.value = q.distance;
        report.witness = std::make_pair(mid, q.point);
      }
      stack.push_back({pc.p0, mid, pc.f0, q.distance, pc.depth + 1});
      stack.push_back({mid, pc.p1, q.distance, pc.f1, pc.depth + 1});
    }
  }
  report.slack = tol;
  return report;
}

DistanceReport hausdorff(const ClosedCurve& a, const ClosedCurve& b) {
  DistanceReport ab = directed_hausdorff(a, b);
  DistanceReport ba = directed_hausdorff(b, a);
  if (ba.value > ab.value) {
    // Keep the witness ordered as (point on a, point on b).
    std::swap(ba.witness->first, ba.witness->second);
    return ba;
  }
  return ab;
}

double discrete_frechet(std::span<const Point2> p, std::span<const Point2> q) {
  if (p.empty() || q.empty()) throw PreconditionError("discrete_frechet: empty sequence");
  const std::size_t m = q.size();
  std::vector<double> prev(m), cur(m);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = distance(p[i], q[j]);
      double reach;
      if (i == 0 && j == 0) reach = 0.0;
      else if (i == 0) reach = cur[j - 1];
      else if (j == 0) reach = prev[j];
      else reach = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = std::max(d, reach);
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

namespace {

// Closed loop of b starting at vertex `shift`, in the requested direction,
// with the start repeated at the end.
std::vector<Point2> loop_of(const ClosedCurve& b, std::size_t shift, bool reverse) {
  const std::size_t m = b.size();
  std::vector<Point2> out;
  out.reserve(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    const std::size_t idx = reverse ? (shift + m - (k % m)) % m : (shift + k) % m;
    out.push_back(b[idx]);
  }
  return out;
}

// Discrete Fréchet distance with early exit: returns +inf as soon as a whole
// DP row exceeds `bound`, since every coupling passes through each row.
double bounded_frechet(std::span<const Point2> p, std::span<const Point2> q, double bound) {
  const std::size_t m = q.size();
  std::vector<double> prev(m), cur(m);
  for (std::size_t i = 0; i < p.size(); ++i) {
    double row_min = kInf;
    for (std::size_t j = 0; j < m; ++j) {
      const double d = distance(p[i], q[j]);
      double reach;
      if (i == 0 && j == 0) reach = 0.0;
      else if (i == 0) reach = cur[j - 1];
      else if (j == 0) reach = prev[j];
      else reach = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = std::max(d, reach);
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > bound) return kInf;
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

// Full DP with backtracking; returns the largest-distance pair on an optimal
// coupling.
std::pair<Point2, Point2> frechet_witness(std::span<const Point2> p, std::span<const Point2> q) {
  const std::size_t n = p.size();
  const std::size_t m = q.size();
  std::vector<double> dp(n * m);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return dp[i * m + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = distance(p[i], q[j]);
      double reach;
      if (i == 0 && j == 0) reach = 0.0;
      else if (i == 0) reach = at(i, j - 1);
      else if (j == 0) reach = at(i - 1, j);
      else reach = std::min({at(i - 1, j), at(i, j - 1), at(i - 1, j - 1)});
      at(i, j) = std::max(d, reach);
    }
  }
  std::size_t i = n - 1, j = m - 1;
  std::pair<Point2, Point2> worst{p[i], q[j]};
  double worst_d = distance(p[i], q[j]);
  while (i > 0 || j > 0) {
    if (i == 0) --j;
    else if (j == 0) --i;
    else {
      const double diag = at(i - 1, j - 1);
      const double up = at(i - 1, j);
      const double left = at(i, j - 1);
      if (diag <= up && diag <= left) { --i; --j; }
      else if (up <= left) --i;
      else --j;
    }
    const double d = distance(p[i], q[j]);
    if (d > worst_d) {
      worst_d = d;
      worst = {p[i], q[j]};
    }
  }
  return worst;
}

}  // namespace

DistanceReport frechet_closed(const ClosedCurve& a, const ClosedCurve& b,
                              const FrechetOptions& options) {
  if (a.empty() || b.empty()) throw PreconditionError("frechet_closed: empty curve");
  const std::size_t m = b.size();
  std::vector<Point2> pa(a.vertices().begin(), a.vertices().end());
  pa.push_back(a[0]);

  double best = kInf;
  Alignment best_alignment;
  // Candidate order key: forward shifts before reversed, then by shift index.
  auto key = [m](std::size_t shift, bool rev) { return (rev ? m : 0) + shift; };
  std::size_t best_key = 2 * m;

  auto evaluate = [&](std::size_t shift, bool rev) {
    const std::size_t k = key(shift, rev);
    // The start pairing (a0, b_shift) lies on every coupling for this shift.
    const double lb = distance(a[0], b[shift]);
    if (lb > best || (lb == best && k >= best_key)) return;
    const std::vector<Point2> pb = loop_of(b, shift, rev);
    const double v = bounded_frechet(pa, pb, best);
    if (v < best || (v == best && k < best_key)) {
      best = v;
      best_key = k;
      best_alignment = {shift, rev};
    }
  };

  // Visit shifts in order of their start-pair lower bound so the running
  // minimum tightens early; ties in value are resolved by key.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return distance(a[0], b[x]) < distance(a[0], b[y]);
  });

  if (options.search == ShiftSearch::exhaustive || m < 64) {
    for (bool rev : {false, true})
      for (std::size_t s : order) evaluate(s, rev);
  } else {
    const auto stride = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m))));
    for (bool rev : {false, true})
      for (std::size_t s : order)
        if (s % stride == 0) evaluate(s, rev);
    const Alignment coarse = best_alignment;
    for (std::size_t d = 1; d < stride; ++d) {
      evaluate((coarse.shift + d) % m, coarse.reversed);
      evaluate((coarse.shift + m - d) % m, coarse.reversed);
    }
  }

  DistanceReport report;
  report.value = best;
  report.alignment = best_alignment;
  report.slack = std::max(max_edge_length(a), max_edge_length(b));
  report.witness = frechet_witness(pa, loop_of(b, best_alignment.shift, best_alignment.reversed));
  return report;
}

}  // namespace cflow
