#pragma once

#include <span>
#include <vector>

#include "cflow/geometry.hpp"

namespace cflow::detail {

// Linear arc-length resampling of a closed point sequence without validation.
std::vector<Point2> resample_points(std::span<const Point2> v, std::size_t n);

}  // namespace cflow::detail
