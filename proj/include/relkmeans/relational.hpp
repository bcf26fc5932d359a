#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace relkmeans {

using FeatureId = std::size_t;
using TableId = std::size_t;
using RowId = std::size_t;

/// A relation over a subset of the design-matrix features, stored row-major.
struct Table {
  std::string name;
  std::vector<FeatureId> features;  // global feature ids, one per column
  std::vector<double> cells;        // row-major, features.size() values per row

  std::size_t arity() const noexcept { return features.size(); }
  std::size_t row_count() const noexcept { return arity() == 0 ? 0 : cells.size() / arity(); }
  std::span<const double> row(RowId r) const {
    return {cells.data() + r * arity(), arity()};
  }
  /// Local column of `f`, if this table contains it.
  std::optional<std::size_t> column_of(FeatureId f) const;
  void append_row(std::span<const double> values);
};

/// Hypergraph of the join: one vertex per feature, one hyperedge per table.
struct SchemaGraph {
  std::size_t vertex_count = 0;
  std::vector<std::vector<FeatureId>> hyperedges;  // sorted feature ids per table
};

/// The input database. Feature ids index `feature_names`; the design matrix
/// has one column per feature in that order.
struct Database {
  std::vector<std::string> feature_names;
  std::vector<Table> tables;

  std::size_t dimension() const noexcept { return feature_names.size(); }
  std::size_t table_count() const noexcept { return tables.size(); }
  /// Largest table row count (n).
  std::size_t max_rows() const noexcept;
  SchemaGraph schema() const;
};

/// Join tree produced by GYO reduction. Node i is table i.
struct JoinTree {
  TableId root = 0;
  std::vector<std::optional<TableId>> parent;
  /// Features shared with the parent (empty for the root).
  std::vector<std::vector<FeatureId>> separator;
  std::vector<std::vector<TableId>> children;
  /// Node at which each feature's value is folded into SumProd products.
  std::vector<TableId> feature_owner;

  std::size_t size() const noexcept { return parent.size(); }
  /// Tree neighbours of `node` (parent first, then children).
  std::vector<TableId> neighbours(TableId node) const;
};

/// GYO got stuck: the residual hyperedges (after all removals) are reported.
struct CyclicVerdict {
  std::vector<TableId> residual_tables;
  std::vector<std::vector<FeatureId>> residual_edges;

  std::string describe(const Database& db) const;
};

/// Closed-or-half-open interval on one feature. Unbounded ends use infinities.
struct Interval {
  double low = -std::numeric_limits<double>::infinity();
  double high = std::numeric_limits<double>::infinity();
  bool high_open = false;

  bool contains(double v) const noexcept {
    return v >= low && (high_open ? v < high : v <= high);
  }
  bool unbounded() const noexcept {
    return low == -std::numeric_limits<double>::infinity() &&
           high == std::numeric_limits<double>::infinity();
  }
};

/// Axis-parallel hyper-rectangle over all d features.
struct BoxRect {
  std::vector<Interval> dims;

  static BoxRect whole_space(std::size_t d) { return BoxRect{std::vector<Interval>(d)}; }
  bool contains(std::span<const double> p) const;
  bool is_whole_space() const;
};

/// Parses `<name>: <col>,<col>,... @ <csv>` lines; CSV paths are resolved
/// relative to the schema document's directory.
Database load_database(const std::filesystem::path& schema_path);

/// Same as above with the document given as text; `base_dir` resolves CSV paths.
Database load_database_text(const std::string& schema_doc, const std::filesystem::path& base_dir,
                            const std::string& doc_name = "<schema>");

/// Builds a database from in-memory tables given by feature names.
Database make_database(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& table_columns,
    const std::vector<std::vector<std::vector<double>>>& table_rows);

/// GYO reduction. Ties: lowest-indexed removable column first, otherwise the
/// lowest-indexed absorbable table (absorbed by the lowest-indexed container).
std::variant<JoinTree, CyclicVerdict> gyo_reduce(const SchemaGraph& g);

/// True when, for every feature, the nodes containing it form a connected subtree.
bool has_running_intersection(const JoinTree& tree, const SchemaGraph& g);

/// Keeps, in every table, the rows lying inside `box` on each feature the table has.
Database filter_by_box(const Database& db, const BoxRect& box);

/// A table pinned to a single one of its rows.
struct RowPin {
  TableId table;
  RowId row;
};

/// Replaces each pinned table by the singleton table of its pinned row.
Database pin_rows(const Database& db, std::span<const RowPin> pins);

/// Assembles a design-matrix point from one row per table. The rows must agree
/// on shared features.
std::vector<double> assemble_point(const Database& db, std::span<const RowId> rows);

}  // namespace relkmeans
