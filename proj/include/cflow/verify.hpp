#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cflow/flow.hpp"
#include "cflow/geometry.hpp"
#include "cflow/intersect.hpp"

namespace cflow {

// Intersection count must never rise above its running minimum. A rise at a
// single grid point where either sample has a tangential cluster is checked
// again with both curves at twice the vertex count on a grid with midpoints
// added; the pair passes when that run is monotone.
struct MonotonicityReport {
  bool monotone = true;
  bool retested = false;
  CountSeries series;
  CountSeries retest_series;
  std::string detail;
};

MonotonicityReport check_count_monotone(const ClosedCurve& a, const ClosedCurve& b,
                                        std::span<const double> t_grid, const FlowConfig& cfg);

// Runs the pair at its own vertex count and at twice that. A grid time is
// confirmed when both runs report the same count with no tangential cluster
// and no overlap; the confirmed counts must never rise above their running
// minimum. Late in the flow two curves heading for the same round limit sit
// closer together than the discretization error, and those samples go
// unconfirmed.
struct ConfirmedMonotonicity {
  bool monotone = true;
  std::size_t samples = 0;    // grid times reached by both runs
  std::size_t confirmed = 0;
  CountSeries coarse;
  CountSeries fine;
  std::string detail;
};

ConfirmedMonotonicity check_count_monotone_confirmed(const ClosedCurve& a, const ClosedCurve& b,
                                                     std::span<const double> t_grid,
                                                     const FlowConfig& cfg);

// Evolves a nested disjoint pair and checks, at every grid time until the
// inner curve goes extinct, that the curves do not meet and that every inner
// vertex is interior to the outer curve.
struct AvoidanceReport {
  bool disjoint = true;
  bool contained = true;
  std::size_t samples = 0;
  std::optional<double> inner_extinction;
  std::string detail;

  bool ok() const { return disjoint && contained; }
};

AvoidanceReport check_avoidance(const ClosedCurve& inner, const ClosedCurve& outer,
                                std::span<const double> t_grid, const FlowConfig& cfg);

struct PropertyResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the invariant checks of every module (takes a minute or two).
std::vector<PropertyResult> run_property_suite(std::uint64_t seed, const FlowConfig& cfg);

std::string format_property_table(const std::vector<PropertyResult>& results);

}  // namespace cflow
