#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "relkmeans/box_builder.hpp"
#include "relkmeans/geometry.hpp"
#include "relkmeans/relational.hpp"
#include "relkmeans/rng.hpp"
#include "relkmeans/sequential.hpp"

namespace relkmeans {

/// A join row together with the table rows it was assembled from.
struct CandidatePoint {
  Point coordinates;
  std::vector<RowId> rows;
};

struct SamplerConfig {
  /// Consecutive rejections tolerated per center; 0 selects 64 * i^2 * d.
  std::size_t max_iterations = 0;
};

struct SamplerTelemetry {
  std::size_t accepted = 0;
  std::size_t proposals = 0;
  /// Proposals spent on each accepted center (first entry: the uniform center).
  std::vector<std::size_t> proposals_per_center;
  /// Largest observed R(x) / (i^2 d L(x)) over proposals with L(x) > 0.
  double max_normalized_ratio = 0.0;

  double mean_rejections() const {
    return accepted == 0 ? 0.0 : static_cast<double>(proposals - accepted) / static_cast<double>(accepted);
  }
};

/// A uniformly random join row. Throws EmptyJoin.
CandidatePoint sample_uniform_row(const Database& db, const JoinTree& tree, CounterRng& rng);

/// Entry r: total assignment cost R(x) over the join rows x that extend the
/// pinned rows and row r of `group`.
std::vector<double> assignment_cost_grouped(const Database& db, const JoinTree& tree,
                                            const LaminarForest& forest, TableId group,
                                            std::span<const RowPin> fixed_rows = {});

/// k-means++ on the join without materializing it: candidates are drawn from
/// the box surrogate Q and accepted with probability L(x)/R(x).
class KMeansPPSampler {
 public:
  KMeansPPSampler(const Database& db, const JoinTree& tree, std::uint64_t seed,
                  SamplerConfig config = {});
  KMeansPPSampler(const KMeansPPSampler&) = delete;
  KMeansPPSampler& operator=(const KMeansPPSampler&) = delete;

  const std::vector<Point>& centers() const noexcept { return centers_; }
  const LaminarForest& forest() const { return *forest_; }
  const SamplerTelemetry& telemetry() const noexcept { return telemetry_; }
  CounterRng& rng() noexcept { return rng_; }

  void add_center(Point center);

  CandidatePoint sample_uniform();
  /// Throws DegenerateDistribution when Z = 0.
  CandidatePoint sample_from_q();
  /// A draw from P(x) = L(x)/Y for the current centers; the centers are unchanged.
  CandidatePoint propose_next_center();
  /// propose_next_center() followed by add_center().
  CandidatePoint sample_next_center();

  /// Z: total surrogate cost over the join.
  double surrogate_total();
  std::size_t rejection_budget() const;

 private:
  const Database& db_;
  const JoinTree& tree_;
  SamplerConfig config_;
  CounterRng rng_;
  std::vector<Point> centers_;
  std::optional<LaminarForest> forest_;
  SequentialRowSampler uniform_;
  SequentialRowSampler surrogate_;
  SamplerTelemetry telemetry_;
};

/// First center uniform, then k_prime - 1 draws from P. Stops early (with a
/// warning) if every join point already coincides with a center.
std::vector<Point> run_kmeanspp(const Database& db, const JoinTree& tree, std::size_t k_prime,
                                std::uint64_t seed, SamplerConfig config = {},
                                SamplerTelemetry* telemetry = nullptr);

}  // namespace relkmeans
