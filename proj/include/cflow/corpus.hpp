#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cflow/geometry.hpp"

namespace cflow {

struct NamedCurve {
  std::string name;
  ClosedCurve curve;
};

std::vector<std::string_view> corpus_names();

// Deterministic named test sets. The seed only picks the rotation phase of
// the stars; the other sets do not depend on it.
//   circles           radii 0.5, 1, 2 (n = 256)
//   ellipses          semi-axes (1.5, 1), (2, 1), (3, 1)
//   stars             r = 1 + a cos(k theta), k in {3, 4}, a in {0.2, 0.35}
//   stadium_pairs     inner and outer stadium sharing their bottom flat
//   perturbed_family  the 1.5 x 1 ellipse and its perturbations 0.2 / 2^k sin(3 theta)
// Throws PreconditionError listing the valid names for anything else.
std::vector<NamedCurve> generate_corpus(std::string_view name, std::uint64_t seed);

// Regular n-gon with vertex 0 at angle `phase`.
ClosedCurve circle_curve(double radius, std::size_t n, Point2 center = {}, double phase = 0.0);
// The following are sampled uniformly in arc length, counterclockwise.
ClosedCurve ellipse_curve(double a, double b, std::size_t n, Point2 center = {}, double rotation = 0.0);
ClosedCurve star_curve(std::size_t petals, double amplitude, std::size_t n, double phase = 0.0,
                       double radius = 1.0);

// (inner, outer): both have the flat y = 0, -0.5 <= x <= 0.5 as a vertex-identical
// arc; the outer ends are half circles of radius 1, the inner ones of radius 0.5.
std::pair<ClosedCurve, ClosedCurve> stadium_pair(double spacing = 1.0 / 32.0);

// Random polygon that is star-shaped about `center`: n vertices at jittered,
// increasing angles with radii in [radius * (1 - wobble), radius * (1 + wobble)].
ClosedCurve random_star_polygon(std::mt19937_64& rng, std::size_t n, Point2 center = {},
                                double radius = 1.0, double wobble = 0.3);

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_double(std::mt19937_64& rng);

}  // namespace cflow
