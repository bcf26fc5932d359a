#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "relkmeans/geometry.hpp"
#include "relkmeans/relational.hpp"

namespace relkmeans {

struct WeightConfig {
  double epsilon = 0.1;
  /// Ball-count slack; defaults to epsilon / 2.
  std::optional<double> delta;
  double tau = 30.0;
  /// Number of sampled centers used in the sample-size formula and the
  /// threshold; 0 means the number of centers passed in.
  std::size_t k_prime = 0;
  std::uint64_t seed = 0;
  /// Upper limit on test points per ring; 0 leaves the formula uncapped.
  std::size_t max_test_points = 0;

  double effective_delta() const { return delta.value_or(epsilon / 2.0); }
  void validate() const;
};

/// Statistics of one ring: the donut between balls j-1 and j around center i.
struct DonutStats {
  std::size_t center = 0;  // distinct-site index
  std::size_t ring = 0;
  double squared_radius = 0.0;
  std::size_t draws = 0;
  std::size_t in_donut = 0;  // s
  std::size_t wins = 0;      // t
  double ratio = 0.0;        // f' = t / s
  double mass = 0.0;         // points the ring stands for
  bool counted = false;      // ratio reached the threshold
};

struct WeightedCoreset {
  std::vector<Point> centers;
  std::vector<double> weights;
  /// Input center index -> distinct-site index.
  std::vector<std::size_t> alias;
  std::vector<DonutStats> donuts;
  std::uint64_t join_size = 0;
  std::size_t test_points_per_ring = 0;
};

/// ceil((tau / eps^2) * k'^2 * log2(N)^2), before any cap.
std::size_t test_points_formula(double tau, double epsilon, std::size_t k_prime, std::uint64_t n);

/// Alternative weights for `centers`. Around each distinct center, ring j is
/// the ball holding about 2^j join points (the last ring is the whole space).
/// Near-uniform test points from each ball are kept if they fall in the donut;
/// the fraction f' of those nearest to the center is credited with the ring's
/// mass (1 for ring 0, 2^(j-1) for inner rings, the remainder up to N for the
/// last) whenever f' >= 1 / (2 k'^2 log2 N). Duplicated centers credit the
/// lowest input index and leave the others at zero.
WeightedCoreset compute_weights(const Database& db, const JoinTree& tree, std::span<const Point> centers,
                                const WeightConfig& config);

}  // namespace relkmeans
