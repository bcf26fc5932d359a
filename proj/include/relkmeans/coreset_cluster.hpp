#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "relkmeans/geometry.hpp"
#include "relkmeans/relational.hpp"

namespace relkmeans {

/// Points with positive weights.
struct WeightedPointSet {
  std::vector<Point> points;
  std::vector<double> weights;

  /// Drops entries whose weight is not positive.
  static WeightedPointSet from(std::span<const Point> points, std::span<const double> weights);
  std::size_t size() const noexcept { return points.size(); }
  std::size_t distinct_count() const;
};

double weighted_cost(const WeightedPointSet& ps, std::span<const Point> centers);

/// D^2 seeding where every sampling mass is multiplied by the point's weight.
/// Throws InsufficientDistinctPoints if k exceeds the number of distinct points.
std::vector<Point> weighted_kmeanspp_seed(const WeightedPointSet& ps, std::size_t k, std::uint64_t seed);

struct LloydResult {
  std::vector<Point> centers;
  std::vector<double> cost_history;  // cost before the first and after every iteration
  std::size_t iterations = 0;
};

/// Weighted Lloyd iterations. An empty cluster is moved to the point with the
/// largest weighted cost.
LloydResult weighted_lloyd(const WeightedPointSet& ps, std::vector<Point> centers,
                           std::size_t max_iters = 100, double tol = 1e-6);

struct ClusterResult {
  std::vector<Point> centers;
  double cost = 0.0;
  std::size_t best_restart = 0;
};

/// Seeding plus Lloyd, repeated `restarts` times; the cheapest run wins and
/// ties go to the earliest restart.
ClusterResult solve_weighted_kmeans(const WeightedPointSet& ps, std::size_t k, std::uint64_t seed,
                                    std::size_t restarts = 3, std::size_t max_iters = 100, double tol = 1e-6);

/// Surrogate clustering cost over the join: total assignment cost R(x) of the
/// box forest built on `centers`. Never below the exact cost.
double relational_cost(const Database& db, const JoinTree& tree, std::span<const Point> centers);

}  // namespace relkmeans
