#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace relkmeans {

/// A row of the design matrix: one coordinate per feature, in feature order.
using Point = std::vector<double>;

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) {
    const double diff = a[f] - b[f];
    sum += diff * diff;
  }
  return sum;
}

/// Index of the center closest to `p`; ties go to the lowest index.
std::size_t nearest_center(std::span<const double> p, std::span<const Point> centers);

/// min_c ||p - c||^2 over `centers`.
double min_squared_distance(std::span<const double> p, std::span<const Point> centers);

}  // namespace relkmeans
