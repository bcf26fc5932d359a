#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "relkmeans/relational.hpp"
#include "relkmeans/rng.hpp"

namespace relkmeans {

/// Draws one row per table in schema order. The weights of table l are
/// computed for the database conditioned on the rows already drawn from
/// tables 0..l-1, and memoized per prefix.
class SequentialRowSampler {
 public:
  using StageWeights = std::function<std::vector<double>(std::span<const RowPin> prefix, TableId table)>;

  SequentialRowSampler(std::size_t table_count, StageWeights weights)
      : table_count_(table_count), weights_(std::move(weights)) {}

  /// Total mass of the first stage.
  double total_mass();

  /// Row indices, one per table, or nullopt when some stage has no mass.
  std::optional<std::vector<RowId>> draw(CounterRng& rng);

  void clear() { cache_.clear(); }
  std::size_t cached_stages() const noexcept { return cache_.size(); }

 private:
  const std::vector<double>& cumulative(const std::vector<RowId>& prefix);

  std::size_t table_count_;
  StageWeights weights_;
  std::map<std::vector<RowId>, std::vector<double>> cache_;
};

}  // namespace relkmeans
