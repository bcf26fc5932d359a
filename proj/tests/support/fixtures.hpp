#pragma once

#include <cstdint>
#include <vector>

#include "relkmeans/geometry.hpp"
#include "relkmeans/relational.hpp"
#include "relkmeans/rng.hpp"

namespace fixtures {

using relkmeans::Database;
using relkmeans::JoinTree;
using relkmeans::Point;

/// T1(f1,f2) and T2(f2,f3) whose join has the five rows
/// (1,1,1) (1,1,2) (2,1,1) (2,1,2) (3,2,3).
Database two_table_example();

/// Join tree of an acyclic database; aborts the test run if it is cyclic.
JoinTree tree_of(const Database& db);

/// A single table holding one row per point.
Database single_table(const std::vector<Point>& points);

struct RandomSchemaOptions {
  std::size_t max_tables = 5;
  std::size_t max_rows = 8;
  std::size_t max_features = 6;
  int max_value = 2;  // cells drawn from 0..max_value
};

/// Random acyclic database: tables on a random tree, each feature spread over
/// a connected subtree, every table holding at least one feature.
Database random_acyclic(relkmeans::CounterRng& rng, const RandomSchemaOptions& options = {});

/// Join rows by trying every combination of table rows (no join tree involved).
std::vector<Point> nested_loop_join(const Database& db);

/// Path T_1(f1,f2), T_2(f2,f3), ... with `rows` rows per table.
Database path_schema(const std::vector<std::vector<std::vector<double>>>& rows);

/// Star schema: one fact table keyed on every dimension key, dimension tables
/// (key, value) hanging off it.
Database star_schema(const std::vector<std::vector<double>>& fact_rows,
                     const std::vector<std::vector<std::vector<double>>>& dimension_rows);

/// Total-variation distance between an empirical count vector and a distribution.
double total_variation(const std::vector<std::uint64_t>& counts, const std::vector<double>& p);

}  // namespace fixtures
