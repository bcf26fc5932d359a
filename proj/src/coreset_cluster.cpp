#include "relkmeans/coreset_cluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "relkmeans/box_builder.hpp"
#include "relkmeans/error.hpp"
#include "relkmeans/kmeanspp.hpp"
#include "relkmeans/rng.hpp"

namespace relkmeans {

WeightedPointSet WeightedPointSet::from(std::span<const Point> points, std::span<const double> weights) {
  WeightedPointSet ps;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weights[i] > 0.0) {
      ps.points.push_back(points[i]);
      ps.weights.push_back(weights[i]);
    }
  }
  return ps;
}

std::size_t WeightedPointSet::distinct_count() const {
  return std::set<Point>(points.begin(), points.end()).size();
}

double weighted_cost(const WeightedPointSet& ps, std::span<const Point> centers) {
  double cost = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) cost += ps.weights[i] * min_squared_distance(ps.points[i], centers);
  return cost;
}

std::vector<Point> weighted_kmeanspp_seed(const WeightedPointSet& ps, std::size_t k, std::uint64_t seed) {
  if (k == 0) return {};
  const auto distinct = ps.distinct_count();
  if (k > distinct) {
    throw InsufficientDistinctPoints("asked for " + std::to_string(k) + " centers but only " +
                                     std::to_string(distinct) + " distinct points carry weight");
  }
  CounterRng rng(seed);
  std::vector<Point> centers;
  centers.push_back(ps.points[sample_weighted(ps.weights, rng)]);

  std::vector<double> nearest(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) nearest[i] = squared_distance(ps.points[i], centers[0]);
  std::vector<double> mass(ps.size());
  while (centers.size() < k) {
    for (std::size_t i = 0; i < ps.size(); ++i) mass[i] = ps.weights[i] * nearest[i];
    const auto pick = sample_weighted(mass, rng);
    centers.push_back(ps.points[pick]);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(ps.points[i], centers.back()));
    }
  }
  return centers;
}

LloydResult weighted_lloyd(const WeightedPointSet& ps, std::vector<Point> centers, std::size_t max_iters,
                           double tol) {
  LloydResult result;
  if (centers.empty()) throw Error("weighted_lloyd needs at least one center");
  const std::size_t k = centers.size();
  const std::size_t d = centers.front().size();
  double cost = weighted_cost(ps, centers);
  result.cost_history.push_back(cost);

  std::vector<std::size_t> assign(ps.size());
  for (std::size_t it = 0; it < max_iters; ++it) {
    std::vector<Point> sums(k, Point(d, 0.0));
    std::vector<double> mass(k, 0.0);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      assign[i] = nearest_center(ps.points[i], centers);
      mass[assign[i]] += ps.weights[i];
      for (std::size_t f = 0; f < d; ++f) sums[assign[i]][f] += ps.weights[i] * ps.points[i][f];
    }
    auto next = centers;
    for (std::size_t c = 0; c < k; ++c) {
      if (mass[c] > 0.0) {
        for (std::size_t f = 0; f < d; ++f) next[c][f] = sums[c][f] / mass[c];
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (mass[c] > 0.0) continue;
      std::size_t worst = 0;
      double worst_cost = -1.0;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const double pc = ps.weights[i] * min_squared_distance(ps.points[i], next);
        if (pc > worst_cost) {
          worst_cost = pc;
          worst = i;
        }
      }
      next[c] = ps.points[worst];
    }

    const double next_cost = weighted_cost(ps, next);
    // Floating-point noise must not let the cost creep upwards.
    if (next_cost > cost) break;
    centers = std::move(next);
    ++result.iterations;
    result.cost_history.push_back(next_cost);
    const double improvement = cost - next_cost;
    cost = next_cost;
    if (improvement <= tol * std::max(cost, std::numeric_limits<double>::min())) break;
  }
  result.centers = std::move(centers);
  return result;
}

ClusterResult solve_weighted_kmeans(const WeightedPointSet& ps, std::size_t k, std::uint64_t seed,
                                    std::size_t restarts, std::size_t max_iters, double tol) {
  ClusterResult best;
  best.cost = std::numeric_limits<double>::infinity();
  const CounterRng master(seed);
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    auto stream = master.fork(r);
    const auto start = weighted_kmeanspp_seed(ps, k, stream());
    auto run = weighted_lloyd(ps, start, max_iters, tol);
    const double cost = run.cost_history.back();
    if (cost < best.cost) {
      best.centers = std::move(run.centers);
      best.cost = cost;
      best.best_restart = r;
    }
  }
  return best;
}

double relational_cost(const Database& db, const JoinTree& tree, std::span<const Point> centers) {
  if (centers.empty()) throw Error("relational_cost needs at least one center");
  const auto forest = build_boxes(centers);
  const auto h = assignment_cost_grouped(db, tree, forest, tree.root);
  return std::accumulate(h.begin(), h.end(), 0.0);
}

}  // namespace relkmeans
