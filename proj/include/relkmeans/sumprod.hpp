#pragma once

#include <algorithm>
#include <cstring>
#include <deque>
#include <span>
#include <unordered_map>
#include <vector>

#include "relkmeans/relational.hpp"
#include "relkmeans/semiring.hpp"

namespace relkmeans {

/// Per-row values of a SumProd query grouped by one table, aligned with the
/// table's row order.
template <class V>
struct GroupedResult {
  TableId table = 0;
  std::vector<V> values;
};

namespace detail {

struct SeparatorKeyHash {
  std::size_t operator()(const std::vector<double>& key) const noexcept {
    std::uint64_t h = 0x84222325CBF29CE4ULL;
    for (double v : key) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      h ^= bits + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// The join tree re-rooted at an arbitrary node, with separator column maps.
struct RootedTree {
  TableId root = 0;
  std::vector<TableId> bfs_order;
  std::vector<std::vector<TableId>> children;
  /// Columns (local to the node) holding the separator with its parent, in
  /// increasing feature-id order.
  std::vector<std::vector<std::size_t>> up_columns;
  /// For each child c of a node: columns of the node holding sep(c, node), in
  /// the same feature order as up_columns[c].
  std::vector<std::vector<std::vector<std::size_t>>> child_columns;
  /// (column, feature) pairs whose q_f is applied at this node.
  std::vector<std::vector<std::pair<std::size_t, FeatureId>>> owned;
};

RootedTree root_tree(const Database& db, const JoinTree& tree, TableId root,
                     std::span<const TableId> owner);

/// Upward pass toward `rt.root`; returns the uncompressed value of every row
/// of the root table.
template <Semiring S>
std::vector<typename S::value_type> root_row_values(const Database& db, const RootedTree& rt,
                                                    const S& s) {
  using V = typename S::value_type;
  using Message = std::unordered_map<std::vector<double>, V, SeparatorKeyHash>;
  const std::size_t m = db.tables.size();
  std::vector<Message> messages(m);
  std::vector<double> key;

  auto row_value = [&](TableId node, RowId r, V& out) {
    const auto& table = db.tables[node];
    const auto row = table.row(r);
    V value = s.one();
    for (const auto& [col, f] : rt.owned[node]) value = s.times(value, s.lift(f, row[col]));
    const auto& kids = rt.children[node];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const auto& cols = rt.child_columns[node][i];
      key.resize(cols.size());
      for (std::size_t j = 0; j < cols.size(); ++j) key[j] = row[cols[j]];
      const auto& msg = messages[kids[i]];
      const auto it = msg.find(key);
      if (it == msg.end()) return false;
      value = s.times(value, it->second);
    }
    out = std::move(value);
    return true;
  };

  for (auto it = rt.bfs_order.rbegin(); it != rt.bfs_order.rend(); ++it) {
    const TableId node = *it;
    if (node == rt.root) continue;
    const auto& table = db.tables[node];
    const auto& up = rt.up_columns[node];
    Message msg;
    V value = s.zero();
    std::vector<double> up_key(up.size());
    for (RowId r = 0; r < table.row_count(); ++r) {
      if (!row_value(node, r, value)) continue;
      const auto row = table.row(r);
      for (std::size_t j = 0; j < up.size(); ++j) up_key[j] = row[up[j]];
      auto [slot, inserted] = msg.try_emplace(up_key, value);
      if (!inserted) slot->second = s.plus(slot->second, value);
    }
    if constexpr (CompressingSemiring<S>) {
      for (auto& [k, v] : msg) s.compress(v);
    }
    for (auto child : rt.children[node]) Message().swap(messages[child]);
    messages[node] = std::move(msg);
  }

  const auto& root_table = db.tables[rt.root];
  std::vector<V> out(root_table.row_count(), s.zero());
  for (RowId r = 0; r < root_table.row_count(); ++r) {
    V value = s.zero();
    if (row_value(rt.root, r, value)) out[r] = std::move(value);
  }
  return out;
}

}  // namespace detail

/// Evaluates  (+)_{x in J} (x)_f q_f(x_f)  by message passing over the join
/// tree; q_f is applied at `owner[f]` only. An empty join yields zero.
template <Semiring S>
typename S::value_type eval_sumprod(const Database& db, const JoinTree& tree, const S& s,
                                    std::span<const TableId> owner) {
  const auto rt = detail::root_tree(db, tree, tree.root, owner);
  auto values = detail::root_row_values(db, rt, s);
  auto total = s.zero();
  for (auto& v : values) total = s.plus(total, v);
  if constexpr (CompressingSemiring<S>) s.compress(total);
  return total;
}

template <Semiring S>
typename S::value_type eval_sumprod(const Database& db, const JoinTree& tree, const S& s) {
  return eval_sumprod(db, tree, s, std::span<const TableId>(tree.feature_owner));
}

/// The query grouped by `group`: entry r is the value on the database where
/// the group table is replaced by its row r. One pass rooted at the group table.
template <Semiring S>
GroupedResult<typename S::value_type> eval_sumprod_grouped(const Database& db, const JoinTree& tree,
                                                           const S& s, TableId group,
                                                           std::span<const TableId> owner) {
  const auto rt = detail::root_tree(db, tree, group, owner);
  GroupedResult<typename S::value_type> result{group, detail::root_row_values(db, rt, s)};
  if constexpr (CompressingSemiring<S>) {
    for (auto& v : result.values) s.compress(v);
  }
  return result;
}

template <Semiring S>
GroupedResult<typename S::value_type> eval_sumprod_grouped(const Database& db, const JoinTree& tree,
                                                           const S& s, TableId group) {
  return eval_sumprod_grouped(db, tree, s, group, std::span<const TableId>(tree.feature_owner));
}

/// Number of rows of the join.
std::uint64_t join_size(const Database& db, const JoinTree& tree);

/// For every row r of `group`: sum over join rows p extending r with p in `box`
/// of ||p - y||^2.
std::vector<double> boxed_cost_grouped(const Database& db, const JoinTree& tree, const BoxRect& box,
                                       std::span<const double> y, TableId group);

}  // namespace relkmeans
