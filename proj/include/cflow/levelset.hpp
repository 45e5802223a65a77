#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cflow/flow.hpp"
#include "cflow/geometry.hpp"

namespace cflow {

// Inner approximants alpha_k and outer approximants beta_k of a Jordan curve
// at offsets delta_k = delta0 / 2^k, k = 1..K (index 0 holds k = 1).
struct AnnulusFamily {
  std::vector<ClosedCurve> inner;
  std::vector<ClosedCurve> outer;
  std::vector<double> offsets;

  std::size_t levels() const { return offsets.size(); }
};

// Throws PreconditionError for K < 2 or delta0 <= 0, and Error with context
// "delta0 too large" when an inward offset collapses. The nesting invariants
// are verified before returning.
AnnulusFamily build_annuli(const ClosedCurve& gamma, std::size_t K, double delta0);

// Human-readable descriptions of every violated annulus invariant; empty when
// the family is consistent with gamma.
std::vector<std::string> annulus_violations(const AnnulusFamily& family, const ClosedCurve& gamma);

struct LevelSetResult {
  ClosedCurve representative;
  double width = 0.0;
  std::vector<double> per_k_widths;
  // Members evolved to the requested time (same indexing as AnnulusFamily).
  AnnulusFamily evolved;
};

LevelSetResult levelset_evolve(const ClosedCurve& gamma, double t, std::size_t K, double delta0,
                               const FlowConfig& cfg);

// Vertex-wise average of two curves after resampling both to n vertices and
// aligning b to a by the closed discrete Frechet alignment.
ClosedCurve midcurve(const ClosedCurve& a, const ClosedCurve& b, std::size_t n);

}  // namespace cflow
