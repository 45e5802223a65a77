#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "cflow/geometry.hpp"

namespace cflow {

// Explicit Euler on the Menger curvature, dt = c * h_min^2.
struct ExplicitCfl {
  double c = 0.25;
};

// Linearly implicit step on the arc-length Laplacian, dt = min(dt, h_min^2 / 2).
struct SemiImplicit {
  double dt = 1e-4;
};

using TimeStepRule = std::variant<ExplicitCfl, SemiImplicit>;

struct FlowConfig {
  // When positive, every resampling picks the vertex count length / spacing
  // (never below min_vertices); zero keeps the vertex count fixed.
  double target_vertex_spacing = 0.0;
  std::size_t min_vertices = 32;
  TimeStepRule dt_rule = SemiImplicit{};
  bool tangential_redistribution = true;
  // Extinction is declared when the enclosed area drops below
  // extinction_area * (initial area), or the length below
  // extinction_length * (initial length).
  double extinction_area = 1e-4;
  double extinction_length = 20.0 * std::numeric_limits<double>::epsilon();
  std::size_t max_steps = 2'000'000;
  // Embeddedness is re-checked every this many steps.
  std::size_t simplicity_check_interval = 10;

  // Throws PreconditionError when a field is out of range.
  void check() const;
};

struct Extinction {
  Point2 point;  // centroid of the last curve
  double time = 0.0;
};

struct FlowState {
  ClosedCurve curve;
  double time = 0.0;
  std::optional<Extinction> extinction;
  std::size_t step_count = 0;
  double initial_area = 0.0;
  double initial_length = 0.0;

  bool alive() const { return !extinction.has_value(); }

  // Validates the curve and records the reference area and length.
  static FlowState start(ClosedCurve curve);
};

// Time step the rule would take on this curve.
double time_step(const ClosedCurve& curve, const FlowConfig& cfg);

// One step of curvature flow. The step is shortened so that time never
// passes `until`, and lands on it exactly when shortened.
FlowState step(const FlowState& state, const FlowConfig& cfg,
               double until = std::numeric_limits<double>::infinity());

// Continues a state until time t (exactly) or extinction.
FlowState advance(FlowState state, double t, const FlowConfig& cfg);

FlowState evolve(const ClosedCurve& gamma, double t, const FlowConfig& cfg);

// Runs the flow until extinction and returns the extinction time.
double extinction_time(const ClosedCurve& gamma, const FlowConfig& cfg);

// Radius of a circle of initial radius r0 after time t of curvature flow, or
// nullopt once it has shrunk to a point.
std::optional<double> circle_oracle(double r0, double t);

struct AreaSample {
  double time;
  double area;
};

struct AreaSeries {
  std::vector<AreaSample> samples;
  // Set when the curve went extinct before the last requested time.
  std::optional<double> extinction_time;
};

AreaSeries enclosed_area_series(const ClosedCurve& gamma, std::span<const double> t_grid,
                                const FlowConfig& cfg);

// Least-squares slope of area against time.
double area_rate(const AreaSeries& series);

// Reparametrizes to equal arc-length spacing (vertex 0 fixed) using a cubic
// Hermite interpolant through the vertices, so the normal position error is
// third order in the local tangential shift.
ClosedCurve redistribute(const ClosedCurve& curve, std::size_t n);

}  // namespace cflow
