#include "relkmeans/sequential.hpp"

#include <algorithm>

namespace relkmeans {

const std::vector<double>& SequentialRowSampler::cumulative(const std::vector<RowId>& prefix) {
  auto it = cache_.find(prefix);
  if (it != cache_.end()) return it->second;

  std::vector<RowPin> pins;
  pins.reserve(prefix.size());
  for (TableId t = 0; t < prefix.size(); ++t) pins.push_back({t, prefix[t]});
  auto weights = weights_(pins, prefix.size());
  double running = 0.0;
  for (auto& w : weights) {
    if (w > 0.0) running += w;
    w = running;
  }
  return cache_.emplace(prefix, std::move(weights)).first->second;
}

double SequentialRowSampler::total_mass() {
  const auto& cum = cumulative({});
  return cum.empty() ? 0.0 : cum.back();
}

std::optional<std::vector<RowId>> SequentialRowSampler::draw(CounterRng& rng) {
  std::vector<RowId> prefix;
  prefix.reserve(table_count_);
  while (prefix.size() < table_count_) {
    const auto& cum = cumulative(prefix);
    if (cum.empty() || !(cum.back() > 0.0)) return std::nullopt;
    const double u = rng.uniform() * cum.back();
    auto pos = std::upper_bound(cum.begin(), cum.end(), u);
    if (pos == cum.end()) {
      // u rounded up to the total: take the last row carrying mass.
      pos = std::lower_bound(cum.begin(), cum.end(), cum.back());
    }
    prefix.push_back(static_cast<RowId>(pos - cum.begin()));
  }
  return prefix;
}

}  // namespace relkmeans
