#include "fixtures.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <variant>

namespace fixtures {

using namespace relkmeans;

Database two_table_example() {
  return make_database({{"T1", {"f1", "f2"}}, {"T2", {"f2", "f3"}}},
                       {{{1, 1}, {2, 1}, {3, 2}, {4, 3}, {5, 4}}, {{1, 1}, {1, 2}, {2, 3}, {5, 4}, {5, 5}}});
}

JoinTree tree_of(const Database& db) {
  auto reduced = gyo_reduce(db.schema());
  if (auto* tree = std::get_if<JoinTree>(&reduced)) return *tree;
  std::cerr << "fixture schema is cyclic\n";
  std::abort();
}

Database single_table(const std::vector<Point>& points) {
  const std::size_t d = points.empty() ? 1 : points.front().size();
  std::vector<std::string> cols;
  for (std::size_t f = 0; f < d; ++f) cols.push_back("x" + std::to_string(f));
  return make_database({{"P", cols}}, {points});
}

Database random_acyclic(CounterRng& rng, const RandomSchemaOptions& options) {
  const std::size_t m = 1 + rng.below(options.max_tables);
  const std::size_t d = std::min<std::size_t>(options.max_features, m + rng.below(options.max_features));
  std::vector<std::vector<std::size_t>> adjacent(m);
  for (std::size_t t = 1; t < m; ++t) {
    const auto p = rng.below(t);
    adjacent[t].push_back(p);
    adjacent[p].push_back(t);
  }

  std::vector<std::vector<bool>> holds(m, std::vector<bool>(d, false));
  for (std::size_t f = 0; f < d; ++f) {
    std::vector<std::size_t> members{static_cast<std::size_t>(rng.below(m))};
    holds[members[0]][f] = true;
    const auto grow = rng.below(m);
    for (std::size_t step = 0; step < grow; ++step) {
      const auto from = members[rng.below(members.size())];
      const auto to = adjacent[from].empty() ? from : adjacent[from][rng.below(adjacent[from].size())];
      if (!holds[to][f]) {
        holds[to][f] = true;
        members.push_back(to);
      }
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t t = 0; t < m; ++t) {
      if (std::find(holds[t].begin(), holds[t].end(), true) != holds[t].end()) continue;
      for (auto nb : adjacent[t]) {
        const auto it = std::find(holds[nb].begin(), holds[nb].end(), true);
        if (it == holds[nb].end()) continue;
        holds[t][static_cast<std::size_t>(it - holds[nb].begin())] = true;
        changed = true;
        break;
      }
    }
  }

  std::vector<std::pair<std::string, std::vector<std::string>>> columns;
  std::vector<std::vector<std::vector<double>>> rows;
  // Name features in order of first use so feature ids follow table order.
  for (std::size_t t = 0; t < m; ++t) {
    std::vector<std::string> cols;
    for (std::size_t f = 0; f < d; ++f) {
      if (holds[t][f]) cols.push_back("f" + std::to_string(f));
    }
    const std::size_t n = 1 + rng.below(options.max_rows);
    std::vector<std::vector<double>> table_rows;
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<double> row;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        row.push_back(static_cast<double>(rng.below(static_cast<std::uint64_t>(options.max_value) + 1)));
      }
      table_rows.push_back(std::move(row));
    }
    columns.push_back({"T" + std::to_string(t), cols});
    rows.push_back(std::move(table_rows));
  }
  return make_database(columns, rows);
}

std::vector<Point> nested_loop_join(const Database& db) {
  std::vector<Point> out;
  const std::size_t m = db.tables.size();
  for (const auto& t : db.tables) {
    if (t.row_count() == 0) return out;
  }
  std::vector<RowId> pick(m, 0);
  while (true) {
    Point p(db.dimension(), 0.0);
    std::vector<bool> set(db.dimension(), false);
    bool ok = true;
    for (std::size_t t = 0; t < m && ok; ++t) {
      const auto& table = db.tables[t];
      const auto row = table.row(pick[t]);
      for (std::size_t c = 0; c < table.arity(); ++c) {
        const auto f = table.features[c];
        if (set[f] && p[f] != row[c]) {
          ok = false;
          break;
        }
        set[f] = true;
        p[f] = row[c];
      }
    }
    if (ok) out.push_back(p);
    std::size_t t = m;
    while (t > 0) {
      --t;
      if (++pick[t] < db.tables[t].row_count()) break;
      pick[t] = 0;
      if (t == 0) return out;
    }
    if (m == 0) return out;
  }
}

Database path_schema(const std::vector<std::vector<std::vector<double>>>& rows) {
  std::vector<std::pair<std::string, std::vector<std::string>>> columns;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    columns.push_back({"T" + std::to_string(t + 1), {"f" + std::to_string(t + 1), "f" + std::to_string(t + 2)}});
  }
  return make_database(columns, rows);
}

Database star_schema(const std::vector<std::vector<double>>& fact_rows,
                     const std::vector<std::vector<std::vector<double>>>& dimension_rows) {
  std::vector<std::pair<std::string, std::vector<std::string>>> columns;
  std::vector<std::string> keys;
  for (std::size_t i = 0; i < dimension_rows.size(); ++i) keys.push_back("k" + std::to_string(i));
  columns.push_back({"F", keys});
  std::vector<std::vector<std::vector<double>>> rows{fact_rows};
  for (std::size_t i = 0; i < dimension_rows.size(); ++i) {
    columns.push_back({"D" + std::to_string(i), {keys[i], "v" + std::to_string(i)}});
    rows.push_back(dimension_rows[i]);
  }
  return make_database(columns, rows);
}

double total_variation(const std::vector<std::uint64_t>& counts, const std::vector<double>& p) {
  const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(static_cast<double>(counts[i]) / n - p[i]);
  return tv / 2.0;
}

}  // namespace fixtures
