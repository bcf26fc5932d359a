#include "relkmeans/oracle.hpp"

#include <limits>

#include "relkmeans/error.hpp"
#include "relkmeans/sumprod.hpp"

namespace relkmeans {

namespace {

void extend(const Database& db, std::size_t table, Point& point, std::vector<bool>& bound,
            std::vector<Point>& out) {
  if (table == db.tables.size()) {
    out.push_back(point);
    return;
  }
  const auto& t = db.tables[table];
  for (RowId r = 0; r < t.row_count(); ++r) {
    const auto row = t.row(r);
    bool consistent = true;
    for (std::size_t c = 0; c < t.arity() && consistent; ++c) {
      const auto f = t.features[c];
      consistent = !bound[f] || point[f] == row[c];
    }
    if (!consistent) continue;
    std::vector<FeatureId> newly;
    for (std::size_t c = 0; c < t.arity(); ++c) {
      const auto f = t.features[c];
      if (!bound[f]) {
        bound[f] = true;
        point[f] = row[c];
        newly.push_back(f);
      }
    }
    extend(db, table + 1, point, bound, out);
    for (auto f : newly) bound[f] = false;
  }
}

}  // namespace

MaterializedJoin materialize(const Database& db, const JoinTree& tree, std::size_t guard) {
  const auto size = join_size(db, tree);
  if (size > guard) {
    throw MaterializationGuard("join has " + std::to_string(size) + " rows, above the guard of " +
                               std::to_string(guard));
  }
  MaterializedJoin j;
  j.guard = guard;
  j.rows.reserve(size);
  Point point(db.dimension(), 0.0);
  std::vector<bool> bound(db.dimension(), false);
  if (!db.tables.empty()) extend(db, 0, point, bound, j.rows);
  return j;
}

std::vector<double> exact_kmeanspp_distribution(const MaterializedJoin& j, std::span<const Point> centers) {
  const std::size_t n = j.rows.size();
  if (n == 0) return {};
  if (centers.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  std::vector<double> p(n);
  double y = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    p[r] = min_squared_distance(j.rows[r], centers);
    y += p[r];
  }
  if (y > 0.0) {
    for (auto& v : p) v /= y;
  }
  return p;
}

std::vector<std::uint64_t> exact_weights(const MaterializedJoin& j, std::span<const Point> centers) {
  std::vector<std::uint64_t> w(centers.size(), 0);
  if (centers.empty()) return w;
  for (const auto& row : j.rows) ++w[nearest_center(row, centers)];
  return w;
}

double exact_cost(const MaterializedJoin& j, std::span<const Point> centers) {
  double cost = 0.0;
  for (const auto& row : j.rows) cost += min_squared_distance(row, centers);
  return cost;
}

KnapsackInstance knapsack_instance(std::span<const std::uint64_t> weights, std::uint64_t capacity) {
  const std::size_t h = weights.size();
  if (h == 0) throw Error("knapsack instance needs at least one weight");
  std::vector<std::pair<std::string, std::vector<std::string>>> columns;
  std::vector<std::vector<std::vector<double>>> rows;
  auto feature = [](std::size_t i) { return "f" + std::to_string(i); };
  for (std::size_t i = 1; i <= h; ++i) {
    const double w = static_cast<double>(weights[i - 1]);
    if (!(w > 0.0)) throw Error("knapsack weights must be positive");
    columns.push_back({"T" + std::to_string(2 * i - 1), {feature(2 * i - 1), feature(2 * i)}});
    rows.push_back({{0.0, 0.0}, {0.0, w}});
    columns.push_back({"T" + std::to_string(2 * i), {feature(2 * i), feature(2 * i + 1)}});
    rows.push_back({{0.0, 0.0}, {w, 0.0}});
  }
  KnapsackInstance inst{make_database(columns, rows), {}};
  const std::size_t d = inst.db.dimension();
  // Points nearer the origin than t*1 are those with coordinate sum below d*t/2 = capacity + 1/2.
  const double t = (2.0 * static_cast<double>(capacity) + 1.0) / static_cast<double>(d);
  inst.centers = {Point(d, 0.0), Point(d, t)};
  return inst;
}

std::uint64_t count_knapsack_subsets(std::span<const std::uint64_t> weights, std::uint64_t capacity) {
  const std::size_t h = weights.size();
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << h); ++mask) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < h; ++i) {
      if (mask & (std::uint64_t{1} << i)) total += weights[i];
    }
    if (total <= capacity) ++count;
  }
  return count;
}

}  // namespace relkmeans
