#include "relkmeans/relational.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "relkmeans/error.hpp"

namespace relkmeans {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void fail(const std::string& where, std::size_t line, const std::string& what) {
  throw ParseError(where + ":" + std::to_string(line) + ": " + what);
}

double parse_cell(const std::string& cell, const std::string& where, std::size_t line) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    fail(where, line, "non-numeric cell '" + cell + "'");
  }
  if (!std::isfinite(v)) fail(where, line, "non-finite cell '" + cell + "'");
  return v == 0.0 ? 0.0 : v;  // fold -0.0 so separator keys compare bit-exactly
}

bool is_subset(const std::vector<FeatureId>& a, const std::vector<FeatureId>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

std::optional<std::size_t> Table::column_of(FeatureId f) const {
  const auto it = std::find(features.begin(), features.end(), f);
  if (it == features.end()) return std::nullopt;
  return static_cast<std::size_t>(it - features.begin());
}

void Table::append_row(std::span<const double> values) {
  if (values.size() != arity()) throw Error("row arity mismatch in table " + name);
  cells.insert(cells.end(), values.begin(), values.end());
}

std::size_t Database::max_rows() const noexcept {
  std::size_t n = 0;
  for (const auto& t : tables) n = std::max(n, t.row_count());
  return n;
}

SchemaGraph Database::schema() const {
  SchemaGraph g;
  g.vertex_count = dimension();
  for (const auto& t : tables) {
    auto edge = t.features;
    std::sort(edge.begin(), edge.end());
    g.hyperedges.push_back(std::move(edge));
  }
  return g;
}

std::vector<TableId> JoinTree::neighbours(TableId node) const {
  std::vector<TableId> out;
  if (parent[node]) out.push_back(*parent[node]);
  out.insert(out.end(), children[node].begin(), children[node].end());
  return out;
}

std::string CyclicVerdict::describe(const Database& db) const {
  std::ostringstream os;
  os << "residual hypergraph {";
  for (std::size_t i = 0; i < residual_tables.size(); ++i) {
    if (i) os << ", ";
    const auto t = residual_tables[i];
    os << (t < db.tables.size() ? db.tables[t].name : "T" + std::to_string(t)) << "(";
    for (std::size_t j = 0; j < residual_edges[i].size(); ++j) {
      if (j) os << ",";
      const auto f = residual_edges[i][j];
      os << (f < db.feature_names.size() ? db.feature_names[f] : "f" + std::to_string(f));
    }
    os << ")";
  }
  os << "}";
  return os.str();
}

bool BoxRect::contains(std::span<const double> p) const {
  for (std::size_t f = 0; f < dims.size(); ++f) {
    if (!dims[f].contains(p[f])) return false;
  }
  return true;
}

bool BoxRect::is_whole_space() const {
  return std::all_of(dims.begin(), dims.end(), [](const Interval& i) { return i.unbounded(); });
}

Database load_database(const std::filesystem::path& schema_path) {
  std::ifstream in(schema_path);
  if (!in) throw ParseError(schema_path.string() + ": cannot open schema document");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_database_text(buf.str(), schema_path.parent_path(), schema_path.string());
}

Database load_database_text(const std::string& schema_doc, const std::filesystem::path& base_dir,
                            const std::string& doc_name) {
  Database db;
  std::map<std::string, FeatureId> feature_ids;
  std::set<std::string> table_names;

  std::istringstream doc(schema_doc);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(doc, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;

    const auto colon = text.find(':');
    const auto at = text.rfind('@');
    if (colon == std::string::npos || at == std::string::npos || at < colon) {
      fail(doc_name, line_no, "expected '<table>: <col>,... @ <csv>'");
    }
    Table table;
    table.name = trim(std::string_view(text).substr(0, colon));
    if (table.name.empty()) fail(doc_name, line_no, "empty table name");
    if (!table_names.insert(table.name).second) {
      fail(doc_name, line_no, "duplicate table name '" + table.name + "'");
    }
    const auto columns = split(std::string_view(text).substr(colon + 1, at - colon - 1), ',');
    std::set<std::string> seen;
    for (const auto& col : columns) {
      if (col.empty()) fail(doc_name, line_no, "empty column name");
      if (!seen.insert(col).second) fail(doc_name, line_no, "duplicate column '" + col + "'");
      auto [it, inserted] = feature_ids.emplace(col, db.feature_names.size());
      if (inserted) db.feature_names.push_back(col);
      table.features.push_back(it->second);
    }

    const std::filesystem::path csv_rel = trim(std::string_view(text).substr(at + 1));
    const auto csv_path = csv_rel.is_absolute() ? csv_rel : base_dir / csv_rel;
    std::ifstream csv(csv_path);
    if (!csv) fail(doc_name, line_no, "cannot open '" + csv_path.string() + "'");

    const std::string where = csv_path.string();
    std::string row_text;
    std::size_t csv_line = 0;
    std::vector<std::size_t> source_col;  // CSV column for each table column
    std::vector<double> values(columns.size());
    bool header_seen = false;
    while (std::getline(csv, row_text)) {
      ++csv_line;
      if (trim(row_text).empty()) continue;
      const auto cells = split(row_text, ',');
      if (!header_seen) {
        header_seen = true;
        for (const auto& col : columns) {
          const auto it = std::find(cells.begin(), cells.end(), col);
          if (it == cells.end()) fail(where, csv_line, "header lacks column '" + col + "'");
          source_col.push_back(static_cast<std::size_t>(it - cells.begin()));
        }
        continue;
      }
      for (std::size_t c = 0; c < columns.size(); ++c) {
        if (source_col[c] >= cells.size()) fail(where, csv_line, "row has too few cells");
        values[c] = parse_cell(cells[source_col[c]], where, csv_line);
      }
      table.append_row(values);
    }
    if (!header_seen) fail(where, 1, "missing header row");
    db.tables.push_back(std::move(table));
  }
  if (db.tables.empty()) throw ParseError(doc_name + ": no tables declared");
  return db;
}

Database make_database(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& table_columns,
    const std::vector<std::vector<std::vector<double>>>& table_rows) {
  Database db;
  std::map<std::string, FeatureId> ids;
  for (std::size_t t = 0; t < table_columns.size(); ++t) {
    Table table;
    table.name = table_columns[t].first;
    for (const auto& col : table_columns[t].second) {
      auto [it, inserted] = ids.emplace(col, db.feature_names.size());
      if (inserted) db.feature_names.push_back(col);
      table.features.push_back(it->second);
    }
    if (t < table_rows.size()) {
      for (const auto& row : table_rows[t]) table.append_row(row);
    }
    db.tables.push_back(std::move(table));
  }
  return db;
}

std::variant<JoinTree, CyclicVerdict> gyo_reduce(const SchemaGraph& g) {
  const std::size_t m = g.hyperedges.size();
  std::vector<std::vector<FeatureId>> edges = g.hyperedges;
  for (auto& e : edges) std::sort(e.begin(), e.end());
  std::vector<bool> alive(m, true);
  std::size_t alive_count = m;

  JoinTree tree;
  tree.parent.assign(m, std::nullopt);

  auto remove_unique_column = [&]() {
    std::vector<std::size_t> occurrences(g.vertex_count, 0);
    for (std::size_t t = 0; t < m; ++t) {
      if (!alive[t]) continue;
      for (auto f : edges[t]) ++occurrences[f];
    }
    for (FeatureId f = 0; f < g.vertex_count; ++f) {
      if (occurrences[f] != 1) continue;
      for (std::size_t t = 0; t < m; ++t) {
        if (!alive[t]) continue;
        auto& e = edges[t];
        const auto it = std::find(e.begin(), e.end(), f);
        if (it != e.end()) {
          e.erase(it);
          return true;
        }
      }
    }
    return false;
  };

  auto absorb_table = [&]() {
    for (std::size_t t = 0; t < m; ++t) {
      if (!alive[t]) continue;
      for (std::size_t u = 0; u < m; ++u) {
        if (u == t || !alive[u]) continue;
        if (is_subset(edges[t], edges[u])) {
          tree.parent[t] = u;
          alive[t] = false;
          --alive_count;
          return true;
        }
      }
    }
    return false;
  };

  while (alive_count > 1) {
    if (remove_unique_column()) continue;
    if (absorb_table()) continue;
    CyclicVerdict verdict;
    for (std::size_t t = 0; t < m; ++t) {
      if (!alive[t]) continue;
      verdict.residual_tables.push_back(t);
      verdict.residual_edges.push_back(edges[t]);
    }
    return verdict;
  }

  if (m == 0) return tree;
  for (std::size_t t = 0; t < m; ++t) {
    if (alive[t]) tree.root = t;
  }

  tree.children.assign(m, {});
  tree.separator.assign(m, {});
  for (std::size_t t = 0; t < m; ++t) {
    if (!tree.parent[t]) continue;
    const auto p = *tree.parent[t];
    tree.children[p].push_back(t);
    const auto& a = g.hyperedges[t];
    const auto& b = g.hyperedges[p];
    std::vector<FeatureId> sa(a), sb(b);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                          std::back_inserter(tree.separator[t]));
  }

  // Owner of a feature: first node containing it in preorder from the root.
  tree.feature_owner.assign(g.vertex_count, m);
  std::vector<TableId> stack{tree.root};
  while (!stack.empty()) {
    const auto node = stack.back();
    stack.pop_back();
    for (auto f : g.hyperedges[node]) {
      if (tree.feature_owner[f] == m) tree.feature_owner[f] = node;
    }
    const auto& kids = tree.children[node];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return tree;
}

bool has_running_intersection(const JoinTree& tree, const SchemaGraph& g) {
  const std::size_t m = tree.size();
  for (FeatureId f = 0; f < g.vertex_count; ++f) {
    std::vector<bool> holds(m, false);
    std::size_t count = 0;
    for (std::size_t t = 0; t < m; ++t) {
      const auto& e = g.hyperedges[t];
      if (std::find(e.begin(), e.end(), f) != e.end()) {
        holds[t] = true;
        ++count;
      }
    }
    if (count == 0) continue;
    // Holders are connected iff exactly one holder has a parent outside the set.
    std::size_t tops = 0;
    for (std::size_t t = 0; t < m; ++t) {
      if (holds[t] && (!tree.parent[t] || !holds[*tree.parent[t]])) ++tops;
    }
    if (tops != 1) return false;
  }
  return true;
}

Database filter_by_box(const Database& db, const BoxRect& box) {
  Database out;
  out.feature_names = db.feature_names;
  out.tables.reserve(db.tables.size());
  for (const auto& t : db.tables) {
    Table kept;
    kept.name = t.name;
    kept.features = t.features;
    std::vector<const Interval*> bounds;
    for (auto f : t.features) bounds.push_back(&box.dims[f]);
    const auto arity = t.arity();
    for (RowId r = 0; r < t.row_count(); ++r) {
      const auto row = t.row(r);
      bool inside = true;
      for (std::size_t c = 0; c < arity && inside; ++c) inside = bounds[c]->contains(row[c]);
      if (inside) kept.cells.insert(kept.cells.end(), row.begin(), row.end());
    }
    out.tables.push_back(std::move(kept));
  }
  return out;
}

Database pin_rows(const Database& db, std::span<const RowPin> pins) {
  Database out = db;
  for (const auto& pin : pins) {
    auto& t = out.tables.at(pin.table);
    const auto src = db.tables[pin.table].row(pin.row);
    t.cells.assign(src.begin(), src.end());
  }
  return out;
}

std::vector<double> assemble_point(const Database& db, std::span<const RowId> rows) {
  std::vector<double> p(db.dimension(), 0.0);
  for (std::size_t t = 0; t < db.tables.size(); ++t) {
    const auto& table = db.tables[t];
    const auto row = table.row(rows[t]);
    for (std::size_t c = 0; c < table.arity(); ++c) p[table.features[c]] = row[c];
  }
  return p;
}

}  // namespace relkmeans
