#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cflow/flow.hpp"
#include "cflow/geometry.hpp"
#include "cflow/intersect.hpp"

namespace cflow {

// Geometry of one member eta(x, s) of the two-point family around gamma.
// D and E are discs centred at `center`; every member agrees with gamma on
// nothing but x and the antipode (except s = 0 and s = 1, which share a whole
// arc with gamma).
struct EtaParams {
  Point2 x;
  double s = 0.5;
  double r = 0.0;         // half the diameter of gamma
  double D_radius = 0.0;  // 2 r
  double E_radius = 0.0;  // > 2 sqrt(2 T) + 2 r
  double T = 0.0;         // horizon
  Point2 center;
  // Target vertex spacing of the assembled curve; zero means gamma's mean
  // edge length.
  double spacing = 0.0;
};

// Fills r, D_radius, E_radius (10% above the bound) and center (area
// centroid of gamma) for anchor x and horizon T.
EtaParams make_eta_params(const ClosedCurve& gamma, Point2 x, double s, double T);

// Horizon used by the family experiments: 0.8 of gamma's measured extinction time.
double family_horizon(const ClosedCurve& gamma, const FlowConfig& cfg);

// True when every edge of the curve turns strictly the same way about c,
// i.e. every ray from c meets the polygon exactly once.
bool is_star_shaped(const ClosedCurve& curve, Point2 c);

// Point of gamma on the ray from c at the given angle. gamma must be
// star-shaped about c.
Point2 radial_point(const ClosedCurve& gamma, Point2 c, double angle);

struct ArcRange {
  std::size_t first = 0;
  std::size_t count = 0;
};

struct EtaCurve {
  ClosedCurve curve;
  EtaParams params;
  Point2 antipode;
  // Vertex ranges of eta_1 .. eta_6 (index 0 is eta_1).
  std::array<ArcRange, 6> arcs{};
};

// eta_1 runs from x to the antipode inside gamma; it is the blend
// s * U + (1 - s) * V of the two arcs of gamma, taken in the disc coordinates
// of the radial map about the centre (U is the counterclockwise arc from x).
// eta_2 .. eta_5 are the radial spokes through x and the antipode out to the
// circle of radius E_radius, and eta_6 closes the curve along that circle on
// the side of V. The result is counterclockwise with vertex 0 at x.
EtaCurve build_eta(const ClosedCurve& gamma, const EtaParams& p);

enum class ClassLabel { C1, C2, C3 };
std::string_view to_string(ClassLabel label);

// Evolves gamma once to t_inf and classifies family members against it.
class FamilyProbe {
 public:
  FamilyProbe(const ClosedCurve& gamma, double t_inf, const FlowConfig& cfg);

  ClassLabel classify(const ClosedCurve& eta) const;
  // Evolved member at t_inf; throws when it goes extinct first.
  ClosedCurve evolve_member(const ClosedCurve& eta) const;
  const ClosedCurve& gamma() const { return gamma_; }
  const ClosedCurve& evolved_gamma() const { return evolved_; }
  double t_inf() const { return t_inf_; }
  const FlowConfig& config() const { return cfg_; }

 private:
  ClosedCurve gamma_;
  ClosedCurve evolved_;
  double t_inf_;
  FlowConfig cfg_;
};

ClassLabel classify_eta(const ClosedCurve& gamma, const EtaCurve& eta, double t_inf,
                        const FlowConfig& cfg);

struct LabelledS {
  double s;
  ClassLabel label;
};

// Labels at s = 0, 1/steps, ..., 1.
std::vector<LabelledS> scan_family(const FamilyProbe& probe, const EtaParams& p, std::size_t steps);
// True when the labels, sorted by s, never step down (C1 before C2 before C3).
bool labels_ordered(std::span<const LabelledS> labels);

struct NuTriple {
  double nu1 = 0.0;
  double nu2 = 1.0;
  double nu0 = 0.5;
  // Every class evaluation made by the search, sorted by s.
  std::vector<LabelledS> probes;
};

inline constexpr double kDefaultTolS = 1.0 / 64.0;

// `known` labels (for example from scan_family with the same anchor) are
// reused instead of being evaluated again.
NuTriple find_nus(const FamilyProbe& probe, const EtaParams& p, double tol_s = kDefaultTolS,
                  std::span<const LabelledS> known = {});
NuTriple find_nus(const ClosedCurve& gamma, Point2 x, double t_inf, const EtaParams& p,
                  const FlowConfig& cfg, double tol_s = kDefaultTolS);

// Intersections of two curves with contacts closer than twice the larger max
// edge length merged, which is the resolution at which the family
// experiments count points.
IntersectionRecord clustered_intersections(const ClosedCurve& a, const ClosedCurve& b);

struct HitOptions {
  std::size_t coarse_anchors = 8;
  std::size_t max_refinements = 12;
  // Zero means twice the max edge length of the evolved gamma.
  double tol = 0.0;
  double tol_s = kDefaultTolS;
  std::size_t track_intervals = 32;
};

struct HitResult {
  Point2 x;
  EtaCurve eta;
  Trajectory trajectory;
  double miss = 0.0;  // distance from the trajectory endpoint to z
  std::size_t evaluations = 0;
};

// Searches the anchor x on gamma so that the intersection trajectory of
// gamma and eta(x, nu0(x)) starting at x ends at z at time t_inf. Only the
// horizon and spacing of p0 are used.
HitResult hit_target(const ClosedCurve& gamma, Point2 z, double t_inf, const EtaParams& p0,
                     const FlowConfig& cfg, const HitOptions& options = {});

struct CommonArcSample {
  double time;
  std::size_t count;
  bool overlap;
  bool nested;
};

struct CommonArcReport {
  std::size_t shared_vertices = 0;
  std::size_t inner_index = 0;  // 0 when gamma1 is the inner curve
  bool nested_at_start = false;
  std::vector<CommonArcSample> samples;
  std::optional<double> extinction_time;

  // No contact at any sampled time after the first grid point (t > 0).
  bool disjoint_after_start() const;
  bool nesting_preserved() const;
};

CommonArcReport common_arc_experiment(const ClosedCurve& gamma1, const ClosedCurve& gamma2,
                                      std::span<const double> t_grid, const FlowConfig& cfg);

// Displaces every vertex along the outward vertex normal by
// amplitude * sin(modes * theta), theta = 2 pi (arc length from vertex 0) / length.
ClosedCurve normal_perturbation(const ClosedCurve& gamma, double amplitude, std::size_t modes);

struct ContinuityRow {
  double amplitude = 0.0;
  double time = 0.0;
  double frechet = 0.0;
  double hausdorff = 0.0;
  std::string error;  // non-empty when this row could not be computed

  bool ok() const { return error.empty(); }
};

struct ContinuityTable {
  ClosedCurve reference;  // gamma_inf evolved to t_inf
  std::vector<ContinuityRow> rows;
};

// Row k compares gamma_inf perturbed by amplitudes[k] and evolved to
// t_inf * (1 + amplitudes[k]) against gamma_inf evolved to t_inf.
ContinuityTable continuity_experiment(const ClosedCurve& gamma_inf, double t_inf,
                                      std::span<const double> amplitudes, std::size_t modes,
                                      const FlowConfig& cfg);

}  // namespace cflow
