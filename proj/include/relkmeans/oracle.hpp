#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "relkmeans/geometry.hpp"
#include "relkmeans/relational.hpp"

namespace relkmeans {

/// The join written out row by row.
struct MaterializedJoin {
  std::vector<Point> rows;
  std::size_t guard = 0;
};

constexpr std::size_t kDefaultGuard = 100000;

/// All join rows, ordered lexicographically by the row indices chosen in each
/// table (tables in schema order). Throws MaterializationGuard if the join has
/// more than `guard` rows.
MaterializedJoin materialize(const Database& db, const JoinTree& tree, std::size_t guard = kDefaultGuard);

/// P(x) = L(x) / Y for every row; uniform when there are no centers.
std::vector<double> exact_kmeanspp_distribution(const MaterializedJoin& j, std::span<const Point> centers);

/// Number of rows whose nearest center (lowest index on ties) is each center.
std::vector<std::uint64_t> exact_weights(const MaterializedJoin& j, std::span<const Point> centers);

/// Sum over rows of the squared distance to the nearest center.
double exact_cost(const MaterializedJoin& j, std::span<const Point> centers);

/// Path schema T_1 ... T_2h encoding a counting-knapsack instance with
/// positive integer weights, plus two centers splitting the join points by
/// whether their coordinate sum is at most `capacity`. The first center's
/// weight is the number of subsets of `weights` with total at most `capacity`.
struct KnapsackInstance {
  Database db;
  std::vector<Point> centers;
};

KnapsackInstance knapsack_instance(std::span<const std::uint64_t> weights, std::uint64_t capacity);

/// Subsets of `weights` with total at most `capacity`, by enumeration.
std::uint64_t count_knapsack_subsets(std::span<const std::uint64_t> weights, std::uint64_t capacity);

}  // namespace relkmeans
