#include "relkmeans/weigher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <spdlog/spdlog.h>

#include "relkmeans/approx_counter.hpp"
#include "relkmeans/error.hpp"
#include "relkmeans/rng.hpp"
#include "relkmeans/sumprod.hpp"

namespace relkmeans {

void WeightConfig::validate() const {
  if (!(epsilon > 0.0) || epsilon > 0.2) throw Error("epsilon must lie in (0, 0.2]");
  const double d = effective_delta();
  if (!(d > 0.0) || d > epsilon / 2.0) throw Error("delta must lie in (0, epsilon/2]");
  if (tau < 30.0) throw Error("tau must be at least 30");
}

std::size_t test_points_formula(double tau, double epsilon, std::size_t k_prime, std::uint64_t n) {
  const double lg = std::max(1.0, std::log2(static_cast<double>(n)));
  const double k = static_cast<double>(k_prime);
  return static_cast<std::size_t>(std::ceil(tau / (epsilon * epsilon) * k * k * lg * lg));
}

WeightedCoreset compute_weights(const Database& db, const JoinTree& tree, std::span<const Point> centers,
                                const WeightConfig& config) {
  config.validate();
  if (centers.empty()) throw Error("compute_weights needs at least one center");

  WeightedCoreset out;
  out.centers.assign(centers.begin(), centers.end());
  out.weights.assign(centers.size(), 0.0);

  std::vector<Point> sites;
  std::vector<std::size_t> first_index;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const auto it = std::find(sites.begin(), sites.end(), centers[c]);
    out.alias.push_back(static_cast<std::size_t>(it - sites.begin()));
    if (it == sites.end()) {
      sites.push_back(centers[c]);
      first_index.push_back(c);
    }
  }

  const std::uint64_t n = join_size(db, tree);
  if (n == 0) throw EmptyJoin();
  out.join_size = n;

  const std::size_t k_prime = config.k_prime == 0 ? centers.size() : config.k_prime;
  const double delta = config.effective_delta();
  const double lg = std::max(1.0, std::log2(static_cast<double>(n)));
  const double threshold = 1.0 / (2.0 * static_cast<double>(k_prime * k_prime) * lg);
  const auto rings = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n))));

  std::size_t draws = test_points_formula(config.tau, config.epsilon, k_prime, n);
  if (config.max_test_points > 0 && draws > config.max_test_points) {
    spdlog::warn("capping test points per ring from {} to {}", draws, config.max_test_points);
    draws = config.max_test_points;
  }
  out.test_points_per_ring = draws;

  const double profile_delta = delta / (3.0 * static_cast<double>(db.table_count() + 1));
  const CounterRng master(config.seed);

  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto profile = distance_profile(db, tree, sites[i], profile_delta);
    double inner = -1.0;
    double weight = 0.0;
    for (std::size_t j = 0; j <= rings; ++j) {
      DonutStats stats;
      stats.center = i;
      stats.ring = j;
      if (j == rings) {
        stats.squared_radius = std::numeric_limits<double>::infinity();
        stats.mass = j == 0 ? static_cast<double>(n) : static_cast<double>(n - (std::uint64_t{1} << (j - 1)));
      } else {
        stats.squared_radius = radius_for_count(profile, std::uint64_t{1} << j);
        stats.mass = j == 0 ? 1.0 : std::ldexp(1.0, static_cast<int>(j) - 1);
      }

      BallSampler ball(db, tree, sites[i], stats.squared_radius, delta);
      auto rng = master.fork(i).fork(j);
      // An empty shell cannot hold test points.
      const std::size_t budget = stats.squared_radius > inner ? draws : 0;
      for (std::size_t s = 0; s < budget; ++s) {
        const auto p = ball.sample(rng);
        ++stats.draws;
        const double dist = squared_distance(p, sites[i]);
        if (!(dist > inner)) continue;
        ++stats.in_donut;
        if (nearest_center(p, sites) == i) ++stats.wins;
      }
      stats.ratio = stats.in_donut == 0 ? 0.0
                                        : static_cast<double>(stats.wins) / static_cast<double>(stats.in_donut);
      stats.counted = stats.ratio >= threshold;
      if (stats.counted) weight += stats.ratio * stats.mass;
      inner = stats.squared_radius;
      out.donuts.push_back(stats);
    }
    out.weights[first_index[i]] = weight;
  }
  return out;
}

}  // namespace relkmeans
