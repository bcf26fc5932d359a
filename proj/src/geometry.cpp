#include "relkmeans/geometry.hpp"

#include <algorithm>
#include <limits>

namespace relkmeans {

std::size_t nearest_center(std::span<const double> p, std::span<const Point> centers) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = squared_distance(p, centers[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

double min_squared_distance(std::span<const double> p, std::span<const Point> centers) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : centers) best = std::min(best, squared_distance(p, c));
  return best;
}

}  // namespace relkmeans
