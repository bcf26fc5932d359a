#include "relkmeans/rng.hpp"

namespace relkmeans {

std::size_t sample_weighted(std::span<const double> weights, CounterRng& rng) {
  double total = 0.0;
  for (double w : weights) {
    if (w > 0.0) total += w;
  }
  if (!(total > 0.0)) return weights.size();

  const double target = rng.uniform() * total;
  double running = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) continue;
    running += weights[i];
    last_positive = i;
    if (target < running) return i;
  }
  // Rounding can leave `target` just past the final partial sum.
  return last_positive;
}

}  // namespace relkmeans
