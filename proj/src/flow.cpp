#include "cflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cflow/error.hpp"
#include "detail.hpp"

namespace cflow {

void FlowConfig::check() const {
  if (const auto* e = std::get_if<ExplicitCfl>(&dt_rule)) {
    if (!(e->c > 0.0 && e->c <= 0.5)) {
      throw PreconditionError("FlowConfig: explicit CFL coefficient must lie in (0, 0.5]");
    }
  } else if (const auto* s = std::get_if<SemiImplicit>(&dt_rule)) {
    if (!(s->dt > 0.0)) throw PreconditionError("FlowConfig: semi-implicit dt must be > 0");
  }
  if (!(extinction_area > 0.0) || !(extinction_length > 0.0)) {
    throw PreconditionError("FlowConfig: extinction thresholds must be > 0");
  }
  if (!(target_vertex_spacing >= 0.0)) {
    throw PreconditionError("FlowConfig: target_vertex_spacing must be >= 0");
  }
  if (min_vertices < kMinVertices) {
    throw PreconditionError("FlowConfig: min_vertices must be >= 8");
  }
  if (max_steps == 0 || simplicity_check_interval == 0) {
    throw PreconditionError("FlowConfig: max_steps and simplicity_check_interval must be > 0");
  }
}

FlowState FlowState::start(ClosedCurve curve) {
  require_valid(curve, "flow");
  FlowState s;
  s.initial_area = signed_area(curve);
  s.initial_length = length(curve);
  s.curve = std::move(curve);
  return s;
}

double time_step(const ClosedCurve& curve, const FlowConfig& cfg) {
  const double h = min_edge_length(curve);
  if (const auto* e = std::get_if<ExplicitCfl>(&cfg.dt_rule)) return e->c * h * h;
  return std::min(std::get<SemiImplicit>(cfg.dt_rule).dt, 0.5 * h * h);
}

namespace {

// Solves a cyclic tridiagonal system in place (Sherman-Morrison on the
// Thomas algorithm). Row i reads lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1],
// indices cyclic. The matrix must be diagonally dominant.
class CyclicTridiagonal {
 public:
  CyclicTridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper)
      : lower_(std::move(lower)), diag_(std::move(diag)), upper_(std::move(upper)) {
    const std::size_t n = diag_.size();
    gamma_ = -diag_[0];
    alpha_ = upper_[n - 1];  // row n-1, column 0
    beta_ = lower_[0];       // row 0, column n-1
    bb_ = diag_;
    bb_[0] -= gamma_;
    bb_[n - 1] -= alpha_ * beta_ / gamma_;
    // The correction vector u = (gamma, 0, ..., 0, alpha).
    std::vector<double> u(n, 0.0);
    u[0] = gamma_;
    u[n - 1] = alpha_;
    z_ = thomas(u);
    factor_ = 1.0 + z_[0] + beta_ * z_[n - 1] / gamma_;
  }

  std::vector<double> solve(const std::vector<double>& rhs) const {
    const std::size_t n = diag_.size();
    std::vector<double> x = thomas(rhs);
    const double fact = (x[0] + beta_ * x[n - 1] / gamma_) / factor_;
    for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z_[i];
    return x;
  }

 private:
  std::vector<double> thomas(const std::vector<double>& r) const {
    const std::size_t n = bb_.size();
    std::vector<double> x(n), c(n);
    double denom = bb_[0];
    x[0] = r[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
      c[i] = upper_[i - 1] / denom;
      denom = bb_[i] - lower_[i] * c[i];
      x[i] = (r[i] - lower_[i] * x[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i + 1] * x[i + 1];
    return x;
  }

  std::vector<double> lower_, diag_, upper_, bb_, z_;
  double gamma_ = 0.0, alpha_ = 0.0, beta_ = 0.0, factor_ = 1.0;
};

std::vector<Point2> explicit_positions(const ClosedCurve& c, double dt) {
  std::vector<Point2> out;
  out.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out.push_back(c[i] + curvature_vector(c, i) * dt);
  return out;
}

// (I - dt L) X' = X with L the arc-length Laplacian of the current polygon:
// (L X)_i = 2 / (h_{i-1} + h_i) * ((X_{i+1} - X_i) / h_i - (X_i - X_{i-1}) / h_{i-1}).
std::vector<Point2> semi_implicit_positions(const ClosedCurve& c, double dt) {
  const std::size_t n = c.size();
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = distance(c[i], c[(i + 1) % n]);
  std::vector<double> lower(n), diag(n), upper(n), rx(n), ry(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double hp = h[(i + n - 1) % n];
    const double hn = h[i];
    const double w = 2.0 * dt / (hp + hn);
    lower[i] = -w / hp;
    upper[i] = -w / hn;
    diag[i] = 1.0 + w / hp + w / hn;
    rx[i] = c[i].x;
    ry[i] = c[i].y;
  }
  const CyclicTridiagonal system(std::move(lower), std::move(diag), std::move(upper));
  const std::vector<double> x = system.solve(rx);
  const std::vector<double> y = system.solve(ry);
  std::vector<Point2> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {x[i], y[i]};
  return out;
}

std::size_t target_count(const ClosedCurve& c, const FlowConfig& cfg) {
  if (cfg.target_vertex_spacing <= 0.0) return c.size();
  const auto n = static_cast<std::size_t>(std::llround(length(c) / cfg.target_vertex_spacing));
  return std::max(cfg.min_vertices, n);
}

}  // namespace

ClosedCurve redistribute(const ClosedCurve& curve, std::size_t n) {
  const std::size_t m = curve.size();
  std::vector<double> h(m), s(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    h[i] = distance(curve[i], curve[(i + 1) % m]);
    s[i + 1] = s[i] + h[i];
  }
  const double total = s[m];
  std::vector<Point2> tangent(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t prev = (i + m - 1) % m;
    tangent[i] = (curve[(i + 1) % m] - curve[prev]) / (h[prev] + h[i]);
  }
  std::vector<Point2> out;
  out.reserve(n);
  std::size_t seg = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double u = total * static_cast<double>(j) / static_cast<double>(n);
    while (seg + 1 < m && s[seg + 1] <= u) ++seg;
    const std::size_t next = (seg + 1) % m;
    const double len = h[seg];
    const double t = len > 0.0 ? std::clamp((u - s[seg]) / len, 0.0, 1.0) : 0.0;
    const double t2 = t * t;
    const double t3 = t2 * t;
    out.push_back(curve[seg] * (2 * t3 - 3 * t2 + 1) + tangent[seg] * (len * (t3 - 2 * t2 + t)) +
                  curve[next] * (-2 * t3 + 3 * t2) + tangent[next] * (len * (t3 - t2)));
  }
  return ClosedCurve(std::move(out), curve.orientation());
}

FlowState step(const FlowState& state, const FlowConfig& cfg, double until) {
  if (!state.alive()) throw PreconditionError("step: state is extinct");
  const ClosedCurve& c = state.curve;
  double dt = time_step(c, cfg);
  double new_time = state.time + dt;
  if (new_time >= until) {
    dt = until - state.time;
    new_time = until;
  }
  if (!(dt > 0.0)) throw PreconditionError("step: no time left before `until`");

  std::vector<Point2> moved = std::holds_alternative<ExplicitCfl>(cfg.dt_rule)
                                  ? explicit_positions(c, dt)
                                  : semi_implicit_positions(c, dt);
  ClosedCurve next(std::move(moved), c.orientation());
  const std::size_t count = target_count(next, cfg);
  if (cfg.tangential_redistribution) {
    next = redistribute(next, count);
  } else if (max_edge_length(next) > 2.0 * min_edge_length(next)) {
    next = ClosedCurve(detail::resample_points(next.vertices(), count), next.orientation());
  }

  FlowState out;
  out.curve = std::move(next);
  out.time = new_time;
  out.step_count = state.step_count + 1;
  out.initial_area = state.initial_area;
  out.initial_length = state.initial_length;

  const double relative_area = signed_area(out.curve) / state.initial_area;
  const double relative_length = length(out.curve) / state.initial_length;
  if (relative_area < cfg.extinction_area || relative_length < cfg.extinction_length) {
    out.extinction = Extinction{centroid(out.curve), out.time};
    return out;
  }
  if (out.step_count % cfg.simplicity_check_interval == 0 && !is_simple(out.curve)) {
    throw DiscretizationError("discretization failure: reduce dt (curve self-intersects at t = " +
                              std::to_string(out.time) + ")");
  }
  return out;
}

FlowState advance(FlowState state, double t, const FlowConfig& cfg) {
  cfg.check();
  if (t < state.time) throw PreconditionError("advance: target time precedes state time");
  std::size_t taken = 0;
  while (state.alive() && state.time < t) {
    if (++taken > cfg.max_steps) {
      throw DiscretizationError("max_steps exceeded at t = " + std::to_string(state.time));
    }
    state = step(state, cfg, t);
  }
  return state;
}

FlowState evolve(const ClosedCurve& gamma, double t, const FlowConfig& cfg) {
  if (!(t >= 0.0)) throw PreconditionError("evolve: t must be >= 0");
  return advance(FlowState::start(gamma), t, cfg);
}

double extinction_time(const ClosedCurve& gamma, const FlowConfig& cfg) {
  const FlowState s = advance(FlowState::start(gamma), std::numeric_limits<double>::infinity(), cfg);
  return s.extinction->time;
}

std::optional<double> circle_oracle(double r0, double t) {
  if (!(r0 > 0.0) || !(t >= 0.0)) throw PreconditionError("circle_oracle: need r0 > 0, t >= 0");
  const double r2 = r0 * r0 - 2.0 * t;
  if (r2 <= 0.0) return std::nullopt;
  return std::sqrt(r2);
}

AreaSeries enclosed_area_series(const ClosedCurve& gamma, std::span<const double> t_grid,
                                const FlowConfig& cfg) {
  AreaSeries series;
  if (t_grid.empty()) return series;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw PreconditionError("enclosed_area_series: time grid must be increasing and >= 0");
    }
  }
  FlowState state = FlowState::start(gamma);
  for (double t : t_grid) {
    state = advance(std::move(state), t, cfg);
    if (!state.alive()) {
      series.extinction_time = state.extinction->time;
      break;
    }
    series.samples.push_back({t, std::abs(signed_area(state.curve))});
  }
  return series;
}

double area_rate(const AreaSeries& series) {
  const auto& s = series.samples;
  if (s.size() < 2) throw PreconditionError("area_rate: need at least two samples");
  double mt = 0.0, ma = 0.0;
  for (const AreaSample& x : s) {
    mt += x.time;
    ma += x.area;
  }
  mt /= static_cast<double>(s.size());
  ma /= static_cast<double>(s.size());
  double num = 0.0, den = 0.0;
  for (const AreaSample& x : s) {
    num += (x.time - mt) * (x.area - ma);
    den += (x.time - mt) * (x.time - mt);
  }
  return num / den;
}

}  // namespace cflow
