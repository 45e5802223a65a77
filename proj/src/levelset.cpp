#include "cflow/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cflow/error.hpp"
#include "cflow/metrics.hpp"

namespace cflow {

namespace {

// Every vertex of `inside` is interior to `outside`.
bool vertices_inside(const ClosedCurve& inside, const ClosedCurve& outside) {
  for (const Point2& p : inside.vertices()) {
    if (classify_point(outside, p, 0.0) != Side::interior) return false;
  }
  return true;
}

bool vertices_outside(const ClosedCurve& curve, const ClosedCurve& of) {
  for (const Point2& p : curve.vertices()) {
    if (classify_point(of, p, 0.0) != Side::exterior) return false;
  }
  return true;
}

}  // namespace

AnnulusFamily build_annuli(const ClosedCurve& gamma, std::size_t K, double delta0) {
  if (K < 2) throw PreconditionError("build_annuli: K must be at least 2");
  if (!(delta0 > 0.0)) throw PreconditionError("build_annuli: delta0 must be > 0");
  require_valid(gamma, "build_annuli");

  AnnulusFamily family;
  double delta = delta0;
  for (std::size_t k = 1; k <= K; ++k) {
    delta *= 0.5;
    try {
      family.inner.push_back(offset_curve(gamma, delta, OffsetSide::inward));
      family.outer.push_back(offset_curve(gamma, delta, OffsetSide::outward));
    } catch (const Error& e) {
      throw Error("delta0 too large: level " + std::to_string(k) + ": " + e.what());
    }
    family.offsets.push_back(delta);
  }
  const std::vector<std::string> problems = annulus_violations(family, gamma);
  if (!problems.empty()) throw Error("build_annuli: " + problems.front());
  return family;
}

std::vector<std::string> annulus_violations(const AnnulusFamily& family, const ClosedCurve& gamma) {
  std::vector<std::string> out;
  const std::size_t K = family.levels();
  if (family.inner.size() != K || family.outer.size() != K) {
    out.emplace_back("member counts differ from offset count");
    return out;
  }
  for (std::size_t k = 0; k < K; ++k) {
    const std::string level = "level " + std::to_string(k + 1);
    if (!vertices_inside(family.inner[k], gamma)) out.push_back(level + ": inner not interior to gamma");
    if (!vertices_outside(family.outer[k], gamma)) out.push_back(level + ": outer not exterior to gamma");
    if (k + 1 < K) {
      if (!(family.offsets[k + 1] < family.offsets[k])) {
        out.push_back(level + ": offsets not strictly decreasing");
      }
      if (!vertices_inside(family.inner[k], family.inner[k + 1])) {
        out.push_back(level + ": inner not nested in next inner");
      }
      if (!vertices_inside(family.outer[k + 1], family.outer[k])) {
        out.push_back(level + ": next outer not nested in outer");
      }
    }
  }
  return out;
}

ClosedCurve midcurve(const ClosedCurve& a, const ClosedCurve& b, std::size_t n) {
  const ClosedCurve ra = resample(a, n);
  const ClosedCurve rb = resample(b, n);
  const Alignment al = *frechet_closed(ra, rb).alignment;
  std::vector<Point2> mid;
  mid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = al.reversed ? (al.shift + n - i) % n : (al.shift + i) % n;
    mid.push_back(0.5 * (ra[i] + rb[j]));
  }
  return ClosedCurve(std::move(mid));
}

LevelSetResult levelset_evolve(const ClosedCurve& gamma, double t, std::size_t K, double delta0,
                               const FlowConfig& cfg) {
  if (!(t >= 0.0)) throw PreconditionError("levelset_evolve: t must be >= 0");
  const AnnulusFamily family = build_annuli(gamma, K, delta0);

  LevelSetResult result;
  result.evolved.offsets = family.offsets;
  for (std::size_t k = 0; k < K; ++k) {
    for (const bool inner : {true, false}) {
      const ClosedCurve& member = inner ? family.inner[k] : family.outer[k];
      FlowState s = evolve(member, t, cfg);
      if (!s.alive()) {
        throw Error("t exceeds inner lifetime at level " + std::to_string(k + 1) +
                    " (extinct at t = " + std::to_string(s.extinction->time) + ")");
      }
      (inner ? result.evolved.inner : result.evolved.outer).push_back(std::move(s.curve));
    }
    result.per_k_widths.push_back(
        hausdorff(result.evolved.inner[k], result.evolved.outer[k]).value);
  }
  result.width = result.per_k_widths.back();
  const std::size_t n =
      std::max(result.evolved.inner.back().size(), result.evolved.outer.back().size());
  result.representative = midcurve(result.evolved.inner.back(), result.evolved.outer.back(), n);
  return result;
}

}  // namespace cflow
