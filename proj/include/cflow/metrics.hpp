#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "cflow/geometry.hpp"

namespace cflow {

// Cyclic alignment of the second curve that realizes a Fréchet value: vertex
// `shift` of b (after optional reversal) is coupled with vertex 0 of a.
struct Alignment {
  std::size_t shift = 0;
  bool reversed = false;
};

struct DistanceReport {
  double value = 0.0;
  // Points (on a, on b) at which the value is attained.
  std::optional<std::pair<Point2, Point2>> witness;
  // Discretization slack of the estimate (largest edge length for the
  // vertex-based Fréchet distance; the refinement tolerance for Hausdorff).
  double slack = 0.0;
  std::optional<Alignment> alignment;
};

// Point-set Hausdorff distance between two polygons. Each directed distance
// starts from the vertices and bisects edges by branch and bound until the
// remaining bound is within a 1e-12 relative tolerance of the best value.
DistanceReport hausdorff(const ClosedCurve& a, const ClosedCurve& b);
// sup over points of a of their distance to b.
DistanceReport directed_hausdorff(const ClosedCurve& a, const ClosedCurve& b);

enum class ShiftSearch {
  // Every cyclic shift and both traversal directions; shifts whose start
  // pairing already exceeds the running minimum are pruned, which is exact.
  exhaustive,
  // Strided shifts first, then a window around the best; for large inputs.
  coarse_to_fine,
};

struct FrechetOptions {
  ShiftSearch search = ShiftSearch::exhaustive;
};

// Discrete Fréchet distance between closed polygons: minimum over cyclic
// shifts and traversal directions of b of the discrete Fréchet distance of
// the vertex loops (each loop closed by repeating its first vertex).
DistanceReport frechet_closed(const ClosedCurve& a, const ClosedCurve& b,
                              const FrechetOptions& options = {});

// Discrete Fréchet distance of two open vertex sequences with matched
// endpoints.
double discrete_frechet(std::span<const Point2> p, std::span<const Point2> q);

}  // namespace cflow
