#include "cflow/corpus.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "cflow/error.hpp"
#include "cflow/family.hpp"
#include "detail.hpp"

namespace cflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kCorpusVertices = 256;

// Dense parametric sampling followed by arc-length resampling to n points.
ClosedCurve uniform_from(const std::function<Point2(double)>& at, std::size_t n) {
  const std::size_t dense = 64 * n;
  std::vector<Point2> pts;
  pts.reserve(dense);
  for (std::size_t k = 0; k < dense; ++k) pts.push_back(at(kTwoPi * static_cast<double>(k) / static_cast<double>(dense)));
  return ClosedCurve(detail::resample_points(pts, n));
}

}  // namespace

// std::uniform_real_distribution is implementation defined, hence the bit trick.
double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ClosedCurve random_star_polygon(std::mt19937_64& rng, std::size_t n, Point2 center, double radius,
                                double wobble) {
  if (n < kMinVertices) throw PreconditionError("random_star_polygon: too few vertices");
  if (!(wobble >= 0.0 && wobble < 1.0)) throw PreconditionError("random_star_polygon: wobble must be in [0, 1)");
  std::vector<Point2> v;
  v.reserve(n);
  const double slot = kTwoPi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = slot * (static_cast<double>(i) + 0.1 + 0.8 * unit_double(rng));
    const double r = radius * (1.0 + wobble * (2.0 * unit_double(rng) - 1.0));
    v.push_back(center + Point2{std::cos(a), std::sin(a)} * r);
  }
  return ClosedCurve(std::move(v));
}

std::vector<std::string_view> corpus_names() {
  return {"circles", "ellipses", "stars", "stadium_pairs", "perturbed_family"};
}

ClosedCurve circle_curve(double radius, std::size_t n, Point2 center, double phase) {
  std::vector<Point2> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = phase + kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    v.push_back(center + Point2{std::cos(a), std::sin(a)} * radius);
  }
  return ClosedCurve(std::move(v));
}

ClosedCurve ellipse_curve(double a, double b, std::size_t n, Point2 center, double rotation) {
  const double c = std::cos(rotation), s = std::sin(rotation);
  return uniform_from(
      [&](double t) {
        const Point2 p{a * std::cos(t), b * std::sin(t)};
        return center + Point2{c * p.x - s * p.y, s * p.x + c * p.y};
      },
      n);
}

ClosedCurve star_curve(std::size_t petals, double amplitude, std::size_t n, double phase,
                       double radius) {
  return uniform_from(
      [&](double t) {
        const double r = radius * (1.0 + amplitude * std::cos(static_cast<double>(petals) * (t - phase)));
        return Point2{r * std::cos(t), r * std::sin(t)};
      },
      n);
}

std::pair<ClosedCurve, ClosedCurve> stadium_pair(double spacing) {
  const auto flat_pieces = static_cast<std::size_t>(std::llround(1.0 / spacing));
  auto build = [&](double end_radius) {
    std::vector<Point2> v;
    // Shared bottom flat, left to right, computed identically for both curves.
    for (std::size_t k = 0; k < flat_pieces; ++k) {
      v.push_back({-0.5 + static_cast<double>(k) / static_cast<double>(flat_pieces), 0.0});
    }
    const auto arc_pieces = static_cast<std::size_t>(std::ceil(std::numbers::pi * end_radius / spacing));
    auto half_circle = [&](Point2 c, double from) {
      // The first point is the joint with the preceding flat; it is written
      // exactly so that the shared flat ends on identical vertices.
      v.push_back({c.x, from < 0.0 ? c.y - end_radius : c.y + end_radius});
      for (std::size_t k = 1; k < arc_pieces; ++k) {
        const double a = from + std::numbers::pi * static_cast<double>(k) / static_cast<double>(arc_pieces);
        v.push_back(c + Point2{std::cos(a), std::sin(a)} * end_radius);
      }
    };
    half_circle({0.5, end_radius}, -0.5 * std::numbers::pi);
    const double top = 2.0 * end_radius;
    for (std::size_t k = 0; k < flat_pieces; ++k) {
      v.push_back({0.5 - static_cast<double>(k) / static_cast<double>(flat_pieces), top});
    }
    half_circle({-0.5, end_radius}, 0.5 * std::numbers::pi);
    return ClosedCurve(std::move(v));
  };
  return {build(0.5), build(1.0)};
}

std::vector<NamedCurve> generate_corpus(std::string_view name, std::uint64_t seed) {
  std::vector<NamedCurve> out;
  if (name == "circles") {
    for (double r : {0.5, 1.0, 2.0}) {
      out.push_back({"circle_r" + std::to_string(r).substr(0, 3), circle_curve(r, kCorpusVertices)});
    }
  } else if (name == "ellipses") {
    for (double aspect : {1.5, 2.0, 3.0}) {
      out.push_back({"ellipse_" + std::to_string(aspect).substr(0, 3),
                     ellipse_curve(aspect, 1.0, kCorpusVertices)});
    }
  } else if (name == "stars") {
    std::mt19937_64 rng(seed);
    for (std::size_t k : {3u, 4u}) {
      for (double a : {0.2, 0.35}) {
        const double phase = kTwoPi / static_cast<double>(k) * unit_double(rng);
        char name[32];
        std::snprintf(name, sizeof name, "star_k%zu_a%g", k, a);
        out.push_back({name,
                       star_curve(k, a, kCorpusVertices, phase)});
      }
    }
  } else if (name == "stadium_pairs") {
    auto [inner, outer] = stadium_pair();
    out.push_back({"stadium_inner", std::move(inner)});
    out.push_back({"stadium_outer", std::move(outer)});
  } else if (name == "perturbed_family") {
    const ClosedCurve base = ellipse_curve(1.5, 1.0, kCorpusVertices);
    out.push_back({"ellipse_1.5", base});
    double eps = 0.2;
    for (int k = 0; k <= 5; ++k, eps *= 0.5) {
      out.push_back({"perturbed_k" + std::to_string(k), normal_perturbation(base, eps, 3)});
    }
  } else {
    std::string valid;
    for (std::string_view n : corpus_names()) valid += (valid.empty() ? "" : ", ") + std::string(n);
    throw PreconditionError("unknown corpus '" + std::string(name) + "'; valid names: " + valid);
  }
  return out;
}

}  // namespace cflow
