#include "relkmeans/sumprod.hpp"

#include <algorithm>

namespace relkmeans {

namespace detail {

namespace {

std::vector<FeatureId> shared_features(const Table& a, const Table& b) {
  std::vector<FeatureId> out;
  for (auto f : a.features) {
    if (std::find(b.features.begin(), b.features.end(), f) != b.features.end()) out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> columns_for(const Table& t, const std::vector<FeatureId>& features) {
  std::vector<std::size_t> cols;
  cols.reserve(features.size());
  for (auto f : features) cols.push_back(*t.column_of(f));
  return cols;
}

}  // namespace

RootedTree root_tree(const Database& db, const JoinTree& tree, TableId root,
                     std::span<const TableId> owner) {
  const std::size_t m = tree.size();
  RootedTree rt;
  rt.root = root;
  rt.children.assign(m, {});
  rt.up_columns.assign(m, {});
  rt.child_columns.assign(m, {});
  rt.owned.assign(m, {});

  std::vector<bool> seen(m, false);
  rt.bfs_order.push_back(root);
  seen[root] = true;
  for (std::size_t i = 0; i < rt.bfs_order.size(); ++i) {
    const auto node = rt.bfs_order[i];
    for (auto next : tree.neighbours(node)) {
      if (seen[next]) continue;
      seen[next] = true;
      rt.bfs_order.push_back(next);
      rt.children[node].push_back(next);
      const auto sep = shared_features(db.tables[next], db.tables[node]);
      rt.up_columns[next] = columns_for(db.tables[next], sep);
      rt.child_columns[node].push_back(columns_for(db.tables[node], sep));
    }
  }

  for (FeatureId f = 0; f < owner.size(); ++f) {
    const auto node = owner[f];
    if (node < m) rt.owned[node].emplace_back(*db.tables[node].column_of(f), f);
  }
  return rt;
}

}  // namespace detail

std::uint64_t join_size(const Database& db, const JoinTree& tree) {
  return eval_sumprod(db, tree, CountingSemiring{});
}

std::vector<double> boxed_cost_grouped(const Database& db, const JoinTree& tree, const BoxRect& box,
                                       std::span<const double> y, TableId group) {
  const CostPairSemiring semiring(std::vector<double>(y.begin(), y.end()));
  if (box.is_whole_space()) {
    const auto grouped = eval_sumprod_grouped(db, tree, semiring, group);
    std::vector<double> out;
    out.reserve(grouped.values.size());
    for (const auto& v : grouped.values) out.push_back(v.cost);
    return out;
  }

  // The group table keeps all its rows so results stay aligned with it; rows
  // outside the box are zeroed afterwards.
  auto filtered = filter_by_box(db, box);
  filtered.tables[group] = db.tables[group];
  const auto grouped = eval_sumprod_grouped(filtered, tree, semiring, group);
  const auto& table = db.tables[group];
  std::vector<double> out(table.row_count(), 0.0);
  for (RowId r = 0; r < table.row_count(); ++r) {
    const auto row = table.row(r);
    bool inside = true;
    for (std::size_t c = 0; c < table.arity() && inside; ++c) {
      inside = box.dims[table.features[c]].contains(row[c]);
    }
    if (inside) out[r] = grouped.values[r].cost;
  }
  return out;
}

}  // namespace relkmeans
