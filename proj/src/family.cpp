#include "cflow/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "cflow/error.hpp"
#include "cflow/metrics.hpp"
#include "detail.hpp"

namespace cflow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Point2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Angle reduced to [lo, lo + 2 pi).
double wrap_from(double angle, double lo) {
  double a = std::fmod(angle - lo, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return lo + a;
}

// Polar description of a star-shaped polygon about c, counterclockwise.
class RadialFunction {
 public:
  RadialFunction(const ClosedCurve& gamma, Point2 c) : c_(c) {
    if (!is_star_shaped(gamma, c)) {
      throw PreconditionError("homeomorphism construction requires star-shaped curve");
    }
    const ClosedCurve ccw =
        gamma.orientation() == Orientation::counterclockwise ? gamma : reversed(gamma);
    v_.assign(ccw.vertices().begin(), ccw.vertices().end());
    const std::size_t n = v_.size();
    angle_.resize(n + 1);
    angle_[0] = std::atan2(v_[0].y - c.y, v_[0].x - c.x);
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 a = v_[i] - c;
      const Point2 b = v_[(i + 1) % n] - c;
      angle_[i + 1] = angle_[i] + std::atan2(cross(a, b), dot(a, b));
    }
  }

  // Edge of the polygon hit by the ray at this angle.
  std::size_t edge_at(double angle) const {
    const double a = wrap_from(angle, angle_[0]);
    const auto it = std::upper_bound(angle_.begin(), angle_.end(), a);
    const auto k = static_cast<std::size_t>(it - angle_.begin());
    return std::min(k == 0 ? 0 : k - 1, v_.size() - 1);
  }

  Point2 at(double angle) const {
    const std::size_t i = edge_at(angle);
    const Point2 a = v_[i];
    const Point2 b = v_[(i + 1) % v_.size()];
    const Point2 d = unit(angle);
    const Point2 e = b - a;
    const double denom = cross(d, e);
    const double t = cross(a - c_, e) / denom;
    return c_ + d * t;
  }

  double radius(double angle) const { return distance(at(angle), c_); }

  // Polygon vertices whose angle lies strictly inside (from, from + span).
  std::vector<Point2> vertices_between(double from, double span) const {
    std::vector<std::pair<double, Point2>> found;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      const double a = wrap_from(angle_[i], from);
      if (a > from && a < from + span) found.push_back({a, v_[i]});
    }
    std::sort(found.begin(), found.end(),
              [](const auto& p, const auto& q) { return p.first < q.first; });
    std::vector<Point2> out;
    for (const auto& f : found) out.push_back(f.second);
    return out;
  }

  Point2 center() const { return c_; }

 private:
  Point2 c_;
  std::vector<Point2> v_;
  std::vector<double> angle_;  // unwrapped vertex angles, angle_[n] = angle_[0] + 2 pi
};

// Points of [a, b] at spacing about h, excluding a and including b.
void append_segment(std::vector<Point2>& out, Point2 a, Point2 b, double h) {
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(distance(a, b) / h)));
  for (std::size_t i = 1; i <= k; ++i) out.push_back(lerp(a, b, static_cast<double>(i) / static_cast<double>(k)));
}

std::vector<Point2> resample_open(const std::vector<Point2>& pts, std::size_t n) {
  std::vector<double> s(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) s[i] = s[i - 1] + distance(pts[i - 1], pts[i]);
  std::vector<Point2> out;
  out.reserve(n + 1);
  std::size_t seg = 0;
  for (std::size_t j = 0; j <= n; ++j) {
    const double u = s.back() * static_cast<double>(j) / static_cast<double>(n);
    while (seg + 2 < pts.size() && s[seg + 1] <= u) ++seg;
    const double len = s[seg + 1] - s[seg];
    const double t = len > 0.0 ? std::clamp((u - s[seg]) / len, 0.0, 1.0) : 0.0;
    out.push_back(lerp(pts[seg], pts[seg + 1], t));
  }
  out.front() = pts.front();
  out.back() = pts.back();
  return out;
}

int rank(ClassLabel l) { return static_cast<int>(l); }

}  // namespace

std::string_view to_string(ClassLabel label) {
  switch (label) {
    case ClassLabel::C1: return "C1";
    case ClassLabel::C2: return "C2";
    case ClassLabel::C3: return "C3";
  }
  return "?";
}

bool is_star_shaped(const ClosedCurve& curve, Point2 c) {
  const double sign = signed_area(curve) > 0.0 ? 1.0 : -1.0;
  const std::size_t n = curve.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = curve[i] - c;
    const Point2 b = curve[(i + 1) % n] - c;
    if (!(sign * cross(a, b) > 0.0)) return false;
  }
  return true;
}

Point2 radial_point(const ClosedCurve& gamma, Point2 c, double angle) {
  return RadialFunction(gamma, c).at(angle);
}

EtaParams make_eta_params(const ClosedCurve& gamma, Point2 x, double s, double T) {
  if (!(T > 0.0)) throw PreconditionError("make_eta_params: horizon T must be > 0");
  EtaParams p;
  p.x = x;
  p.s = s;
  p.r = 0.5 * diameter(gamma);
  p.D_radius = 2.0 * p.r;
  p.E_radius = 1.1 * (2.0 * std::sqrt(2.0 * T) + 2.0 * p.r);
  p.T = T;
  p.center = centroid(gamma);
  return p;
}

double family_horizon(const ClosedCurve& gamma, const FlowConfig& cfg) {
  return 0.8 * extinction_time(gamma, cfg);
}

EtaCurve build_eta(const ClosedCurve& gamma, const EtaParams& p) {
  require_valid(gamma, "build_eta");
  if (!(p.s >= 0.0 && p.s <= 1.0)) throw PreconditionError("build_eta: s must lie in [0, 1]");
  if (!(p.E_radius > 2.0 * std::sqrt(2.0 * p.T) + 2.0 * p.r)) {
    throw PreconditionError("build_eta: E_radius must exceed 2 sqrt(2T) + 2r");
  }
  const RadialFunction rho(gamma, p.center);
  const Point2 c = p.center;
  const double diam = diameter(gamma);
  for (const Point2& v : gamma.vertices()) {
    if (!(distance(v, c) < p.D_radius)) throw PreconditionError("build_eta: gamma is not inside D");
  }
  if (distance_to_curve(gamma, p.x) > 1e-9 * diam) {
    throw PreconditionError("build_eta: anchor x does not lie on gamma");
  }
  const double h = p.spacing > 0.0 ? p.spacing : mean_edge_length(gamma);

  const double theta = std::atan2(p.x.y - c.y, p.x.x - c.x);
  const Point2 x = rho.at(theta);
  const Point2 antipode = rho.at(theta + kPi);

  EtaCurve out;
  out.params = p;
  out.params.x = x;
  out.antipode = antipode;
  std::vector<Point2> v;

  // eta_1: x to the antipode, inside gamma.
  if (p.s == 0.0 || p.s == 1.0) {
    // The member shares the whole arc with gamma, vertex for vertex.
    v.push_back(x);
    std::vector<Point2> inner = rho.vertices_between(theta, kPi);
    if (p.s == 0.0) {
      inner = rho.vertices_between(theta + kPi, kPi);
      std::reverse(inner.begin(), inner.end());
    }
    for (const Point2& q : inner) {
      if (distance(q, v.back()) > 1e-9 * diam) v.push_back(q);
    }
    if (distance(v.back(), antipode) <= 1e-9 * diam) v.pop_back();
    v.push_back(antipode);
  } else {
    const Point2 e1 = unit(theta);
    const Point2 e2 = perp(e1);
    const std::size_t dense = 4096;
    std::vector<Point2> path;
    path.reserve(dense + 1);
    for (std::size_t k = 0; k <= dense; ++k) {
      const double tau = static_cast<double>(k) / static_cast<double>(dense);
      // s e^{i pi tau} + (1 - s) e^{-i pi tau} in the frame of x.
      const Point2 q = e1 * std::cos(kPi * tau) + e2 * ((2.0 * p.s - 1.0) * std::sin(kPi * tau));
      const double rq = norm(q);
      path.push_back(rq > 0.0 ? c + (rho.at(std::atan2(q.y, q.x)) - c) * rq : c);
    }
    path.front() = x;
    path.back() = antipode;
    double len = 0.0;
    for (std::size_t k = 1; k < path.size(); ++k) len += distance(path[k - 1], path[k]);
    const auto pieces = std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(len / h)));
    v = resample_open(path, pieces);
  }
  out.arcs[0] = {0, v.size()};

  const Point2 v1 = c + unit(theta) * p.D_radius;
  const Point2 v2 = c + unit(theta + kPi) * p.D_radius;
  const Point2 w1 = c + unit(theta) * p.E_radius;
  const Point2 w2 = c + unit(theta + kPi) * p.E_radius;

  // eta_3: antipode out to D; eta_5: on to E.
  std::size_t first = v.size();
  append_segment(v, antipode, v2, h);
  out.arcs[2] = {first, v.size() - first};
  first = v.size();
  append_segment(v, v2, w2, h);
  out.arcs[4] = {first, v.size() - first};

  // eta_6: along E on the side of V, from w2 back round to w1 (stored in the
  // counterclockwise direction of travel; the same arc runs clockwise from w1).
  first = v.size();
  const auto arc_pieces =
      std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(kPi * p.E_radius / h)));
  for (std::size_t k = 1; k <= arc_pieces; ++k) {
    v.push_back(c + unit(theta + kPi + kPi * static_cast<double>(k) / static_cast<double>(arc_pieces)) *
                        p.E_radius);
  }
  v.back() = w1;
  out.arcs[5] = {first, v.size() - first};

  // eta_4: E back to D; eta_2: D back to x (x itself is vertex 0).
  first = v.size();
  append_segment(v, w1, v1, h);
  out.arcs[3] = {first, v.size() - first};
  first = v.size();
  append_segment(v, v1, x, h);
  v.pop_back();
  out.arcs[1] = {first, v.size() - first};

  out.curve = ClosedCurve(std::move(v));
  const ValidationReport report = validate(out.curve);
  if (!report.ok()) {
    std::string arcs;
    for (std::size_t k = 0; k < 6; ++k) {
      arcs += " eta" + std::to_string(k + 1) + "=[" + std::to_string(out.arcs[k].first) + "+" +
              std::to_string(out.arcs[k].count) + "]";
    }
    throw InvalidCurveError("build_eta: assembled curve invalid (" + report.summary() + ");" + arcs);
  }
  return out;
}

FamilyProbe::FamilyProbe(const ClosedCurve& gamma, double t_inf, const FlowConfig& cfg)
    : gamma_(gamma), t_inf_(t_inf), cfg_(cfg) {
  if (!(t_inf > 0.0)) throw PreconditionError("FamilyProbe: t_inf must be > 0");
  FlowState s = evolve(gamma, t_inf, cfg);
  if (!s.alive()) throw PreconditionError("FamilyProbe: gamma goes extinct before t_inf");
  evolved_ = std::move(s.curve);
}

ClosedCurve FamilyProbe::evolve_member(const ClosedCurve& eta) const {
  FlowState s = evolve(eta, t_inf_, cfg_);
  if (!s.alive()) throw Error("family member goes extinct before t_inf");
  return std::move(s.curve);
}

ClassLabel FamilyProbe::classify(const ClosedCurve& eta) const {
  const ClosedCurve e = evolve_member(eta);
  const IntersectionRecord r = intersect_curves(evolved_, e);
  if (r.overlap || r.count() > 0) return ClassLabel::C2;
  bool all_in = true, all_out = true;
  for (const Point2& q : evolved_.vertices()) {
    const Side side = classify_point(e, q, 0.0);
    all_in = all_in && side == Side::interior;
    all_out = all_out && side == Side::exterior;
  }
  if (all_out) return ClassLabel::C1;
  if (all_in) return ClassLabel::C3;
  return ClassLabel::C2;
}

ClassLabel classify_eta(const ClosedCurve& gamma, const EtaCurve& eta, double t_inf,
                        const FlowConfig& cfg) {
  return FamilyProbe(gamma, t_inf, cfg).classify(eta.curve);
}

std::vector<LabelledS> scan_family(const FamilyProbe& probe, const EtaParams& p, std::size_t steps) {
  if (steps == 0) throw PreconditionError("scan_family: steps must be > 0");
  std::vector<LabelledS> out;
  for (std::size_t k = 0; k <= steps; ++k) {
    EtaParams q = p;
    q.s = static_cast<double>(k) / static_cast<double>(steps);
    out.push_back({q.s, probe.classify(build_eta(probe.gamma(), q).curve)});
  }
  return out;
}

bool labels_ordered(std::span<const LabelledS> labels) {
  std::vector<LabelledS> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const LabelledS& a, const LabelledS& b) { return a.s < b.s; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (rank(sorted[i].label) < rank(sorted[i - 1].label)) return false;
  }
  return true;
}

NuTriple find_nus(const FamilyProbe& probe, const EtaParams& p, double tol_s,
                  std::span<const LabelledS> known) {
  if (!(tol_s > 0.0)) throw PreconditionError("find_nus: tol_s must be > 0");
  std::map<double, ClassLabel> seen;
  for (const LabelledS& k : known) seen.emplace(k.s, k.label);
  auto label_at = [&](double s) {
    const auto it = seen.find(s);
    if (it != seen.end()) return it->second;
    EtaParams q = p;
    q.s = s;
    const ClassLabel l = probe.classify(build_eta(probe.gamma(), q).curve);
    seen.emplace(s, l);
    return l;
  };
  if (label_at(0.0) != ClassLabel::C1 || label_at(1.0) != ClassLabel::C3) {
    throw PreconditionError("find_nus: need eta(x, 0) in C1 and eta(x, 1) in C3");
  }

  // [lo1, hi1] brackets the C1/C2 boundary and [lo2, hi2] the C2/C3 boundary.
  double lo1 = 0.0, hi1 = 1.0, lo2 = 0.0, hi2 = 1.0;
  auto record = [&](double m, ClassLabel l) {
    if (l == ClassLabel::C1) lo1 = std::max(lo1, m);
    else hi1 = std::min(hi1, m);
    if (l == ClassLabel::C3) hi2 = std::min(hi2, m);
    else lo2 = std::max(lo2, m);
  };
  for (const auto& [s, l] : seen) record(s, l);
  while (hi1 - lo1 > tol_s) {
    const double m = 0.5 * (lo1 + hi1);
    record(m, label_at(m));
  }
  while (hi2 - lo2 > tol_s) {
    const double m = 0.5 * (lo2 + hi2);
    record(m, label_at(m));
  }

  NuTriple out;
  for (const auto& [s, l] : seen) out.probes.push_back({s, l});
  if (!labels_ordered(out.probes)) {
    throw Error("class intervals not monotone; refine discretization");
  }
  // hi1 is the smallest probe known to be past C1 and lo2 the largest known
  // to be short of C3. Without any C2 probe both collapse onto the C1/C3 gap.
  out.nu1 = hi1;
  out.nu2 = lo2;
  if (out.nu1 > out.nu2) out.nu1 = out.nu2 = 0.5 * (lo2 + hi1);
  out.nu0 = 0.5 * (out.nu1 + out.nu2);
  return out;
}

NuTriple find_nus(const ClosedCurve& gamma, Point2 x, double t_inf, const EtaParams& p,
                  const FlowConfig& cfg, double tol_s) {
  EtaParams q = p;
  q.x = x;
  return find_nus(FamilyProbe(gamma, t_inf, cfg), q, tol_s);
}

IntersectionRecord clustered_intersections(const ClosedCurve& a, const ClosedCurve& b) {
  IntersectOptions options;
  options.cluster_radius = 2.0 * std::max(max_edge_length(a), max_edge_length(b));
  return intersect_curves(a, b, options);
}

HitResult hit_target(const ClosedCurve& gamma, Point2 z, double t_inf, const EtaParams& p0,
                     const FlowConfig& cfg, const HitOptions& options) {
  if (options.coarse_anchors < 3) throw PreconditionError("hit_target: need at least 3 coarse anchors");
  const FamilyProbe probe(gamma, t_inf, cfg);
  const ClosedCurve& evolved = probe.evolved_gamma();
  const double on_tol = max_edge_length(evolved);
  if (distance_to_curve(evolved, z) > on_tol) {
    throw PreconditionError("hit_target: z does not lie on the evolved curve");
  }
  const double tol = options.tol > 0.0 ? options.tol : 2.0 * max_edge_length(evolved);
  const Point2 c = p0.center;
  const Point2 ce = centroid(evolved);
  const double target_angle = std::atan2(z.y - ce.y, z.x - ce.x);
  const RadialFunction rho(gamma, c);

  HitResult best;
  best.miss = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;

  // Signed angular offset of the trajectory end from z, about the evolved centroid.
  auto evaluate = [&](double theta) -> std::optional<double> {
    ++evaluations;
    EtaParams p = p0;
    p.x = rho.at(theta);
    try {
      const NuTriple nus = find_nus(probe, p, options.tol_s);
      p.s = nus.nu0;
      EtaCurve eta = build_eta(gamma, p);
      TrackOptions track;
      track.intervals = options.track_intervals;
      Trajectory traj = track_intersection(gamma, eta.curve, eta.params.x, t_inf, cfg, track);
      if (traj.end != TrackEnd::completed) return std::nullopt;
      const Point2 end = traj.samples.back().point;
      const double miss = distance(end, z);
      if (miss < best.miss) {
        best.x = eta.params.x;
        best.eta = std::move(eta);
        best.trajectory = std::move(traj);
        best.miss = miss;
      }
      return wrap_from(std::atan2(end.y - ce.y, end.x - ce.x) - target_angle, -kPi);
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  const std::size_t n = options.coarse_anchors;
  // Scan anchors starting at the angle of z so the bracket is usually the
  // first or last interval.
  std::vector<double> thetas(n + 1);
  std::vector<std::optional<double>> offsets(n + 1);
  const double start = std::atan2(z.y - c.y, z.x - c.x) - kPi / static_cast<double>(n);
  for (std::size_t k = 0; k <= n; ++k) {
    thetas[k] = start + kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    offsets[k] = k == n ? offsets[0] : evaluate(thetas[k]);
    if (best.miss <= tol) {
      best.evaluations = evaluations;
      return best;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!offsets[k] || !offsets[k + 1]) continue;
    const double a = *offsets[k], b = *offsets[k + 1];
    // A sign change with small offsets is a genuine crossing of z; a jump
    // through +-pi is the wrap on the far side.
    if (!(a <= 0.0 && b >= 0.0) || b - a > kPi) continue;
    double lo = thetas[k], hi = thetas[k + 1];
    for (std::size_t it = 0; it < options.max_refinements && best.miss > tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      const std::optional<double> m = evaluate(mid);
      if (!m) break;
      (*m < 0.0 ? lo : hi) = mid;
    }
    if (best.miss <= tol) break;
  }
  best.evaluations = evaluations;
  if (!(best.miss <= tol)) {
    throw Error("hit_target: search failed to reach z (closest distance " + std::to_string(best.miss) +
                ")");
  }
  return best;
}

bool CommonArcReport::disjoint_after_start() const {
  for (const CommonArcSample& s : samples) {
    if (s.time > 0.0 && (s.count != 0 || s.overlap)) return false;
  }
  return true;
}

bool CommonArcReport::nesting_preserved() const {
  if (!nested_at_start) return false;
  return std::all_of(samples.begin(), samples.end(), [](const CommonArcSample& s) { return s.nested; });
}

namespace {

// Length of the longest run of consecutive vertices of a that also appear
// consecutively (in either direction) in b, compared bit for bit.
std::size_t longest_shared_run(const ClosedCurve& a, const ClosedCurve& b,
                               std::vector<bool>& shared_in_a, std::vector<bool>& shared_in_b) {
  std::map<std::pair<double, double>, std::size_t> index;
  for (std::size_t j = 0; j < b.size(); ++j) index.emplace(std::make_pair(b[j].x, b[j].y), j);
  auto find = [&](Point2 p) -> std::optional<std::size_t> {
    const auto it = index.find({p.x, p.y});
    if (it == index.end()) return std::nullopt;
    return it->second;
  };
  shared_in_a.assign(a.size(), false);
  shared_in_b.assign(b.size(), false);
  std::size_t best = 0;
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = find(a[i]);
    if (!j) continue;
    // Mark edges of a whose both ends map to adjacent vertices of b.
    const auto jn = find(a[(i + 1) % n]);
    if (jn && ((*j + 1) % m == *jn || (*jn + 1) % m == *j)) {
      shared_in_a[i] = shared_in_a[(i + 1) % n] = true;
      shared_in_b[*j] = shared_in_b[*jn] = true;
    }
  }
  // Longest cyclic run of marked vertices in a.
  std::size_t run = 0;
  for (std::size_t k = 0; k < 2 * n; ++k) {
    run = shared_in_a[k % n] ? run + 1 : 0;
    best = std::max(best, std::min(run, n));
  }
  return best;
}

bool all_unshared_inside(const ClosedCurve& c, const std::vector<bool>& shared, const ClosedCurve& of) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!shared[i] && classify_point(of, c[i], 0.0) != Side::interior) return false;
  }
  return true;
}

bool all_inside(const ClosedCurve& c, const ClosedCurve& of) {
  for (const Point2& p : c.vertices()) {
    if (classify_point(of, p, 0.0) != Side::interior) return false;
  }
  return true;
}

}  // namespace

CommonArcReport common_arc_experiment(const ClosedCurve& gamma1, const ClosedCurve& gamma2,
                                      std::span<const double> t_grid, const FlowConfig& cfg) {
  require_valid(gamma1, "common_arc_experiment");
  require_valid(gamma2, "common_arc_experiment");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw PreconditionError("common_arc_experiment: time grid must be increasing and >= 0");
    }
  }
  std::vector<bool> s1, s2;
  CommonArcReport report;
  report.shared_vertices = longest_shared_run(gamma1, gamma2, s1, s2);
  if (report.shared_vertices < 2) {
    throw PreconditionError("common_arc_experiment: curves share no vertex-identical arc");
  }
  if (std::all_of(s1.begin(), s1.end(), [](bool b) { return b; }) &&
      std::all_of(s2.begin(), s2.end(), [](bool b) { return b; })) {
    throw PreconditionError("common_arc_experiment: curves are not distinct");
  }
  if (all_unshared_inside(gamma1, s1, gamma2)) {
    report.inner_index = 0;
    report.nested_at_start = true;
  } else if (all_unshared_inside(gamma2, s2, gamma1)) {
    report.inner_index = 1;
    report.nested_at_start = true;
  }

  FlowState a = FlowState::start(gamma1);
  FlowState b = FlowState::start(gamma2);
  for (double t : t_grid) {
    a = advance(std::move(a), t, cfg);
    b = advance(std::move(b), t, cfg);
    if (!a.alive() || !b.alive()) {
      report.extinction_time = std::min(a.alive() ? t : a.extinction->time,
                                        b.alive() ? t : b.extinction->time);
      break;
    }
    const IntersectionRecord r = intersect_curves(a.curve, b.curve);
    const ClosedCurve& inner = report.inner_index == 0 ? a.curve : b.curve;
    const ClosedCurve& outer = report.inner_index == 0 ? b.curve : a.curve;
    const bool nested = t == 0.0 ? report.nested_at_start
                                 : report.nested_at_start && r.count() == 0 && !r.overlap &&
                                       all_inside(inner, outer);
    report.samples.push_back({t, r.count(), r.overlap, nested});
  }
  return report;
}

ClosedCurve normal_perturbation(const ClosedCurve& gamma, double amplitude, std::size_t modes) {
  require_valid(gamma, "normal_perturbation");
  const std::size_t n = gamma.size();
  const double total = length(gamma);
  // Outward normal of edge direction d is (d.y, -d.x) for a counterclockwise curve.
  const double outward = gamma.orientation() == Orientation::counterclockwise ? 1.0 : -1.0;
  std::vector<Point2> out;
  out.reserve(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 prev = gamma.cyclic(static_cast<std::ptrdiff_t>(i) - 1);
    const Point2 next = gamma[(i + 1) % n];
    const Point2 d_in = normalized(gamma[i] - prev);
    const Point2 d_out = normalized(next - gamma[i]);
    const Point2 nrm = normalized(Point2{d_in.y + d_out.y, -(d_in.x + d_out.x)}) * outward;
    const double theta = kTwoPi * s / total;
    out.push_back(gamma[i] + nrm * (amplitude * std::sin(static_cast<double>(modes) * theta)));
    s += distance(gamma[i], next);
  }
  ClosedCurve result(std::move(out));
  require_valid(result, "normal_perturbation");
  return result;
}

ContinuityTable continuity_experiment(const ClosedCurve& gamma_inf, double t_inf,
                                      std::span<const double> amplitudes, std::size_t modes,
                                      const FlowConfig& cfg) {
  if (!(t_inf > 0.0)) throw PreconditionError("continuity_experiment: t_inf must be > 0");
  for (std::size_t k = 0; k < amplitudes.size(); ++k) {
    if (!(amplitudes[k] >= 0.0) || (k > 0 && amplitudes[k] > amplitudes[k - 1])) {
      throw PreconditionError("continuity_experiment: amplitudes must be >= 0 and nonincreasing");
    }
  }
  ContinuityTable table;
  FlowState ref = evolve(gamma_inf, t_inf, cfg);
  if (!ref.alive()) throw PreconditionError("continuity_experiment: gamma_inf does not survive to t_inf");
  table.reference = std::move(ref.curve);

  for (double eps : amplitudes) {
    ContinuityRow row;
    row.amplitude = eps;
    row.time = t_inf * (1.0 + eps);
    try {
      const ClosedCurve gk = normal_perturbation(gamma_inf, eps, modes);
      const FlowState s = evolve(gk, row.time, cfg);
      if (!s.alive()) throw Error("perturbed curve extinct before t_k");
      row.frechet = frechet_closed(s.curve, table.reference).value;
      row.hausdorff = hausdorff(s.curve, table.reference).value;
    } catch (const Error& e) {
      row.error = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace cflow
