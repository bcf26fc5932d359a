#include "relkmeans/kmeanspp.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "relkmeans/error.hpp"
#include "relkmeans/semiring.hpp"
#include "relkmeans/sumprod.hpp"

namespace relkmeans {

namespace {

std::vector<double> grouped_counts(const Database& db, const JoinTree& tree, TableId group,
                                   std::span<const RowPin> pins) {
  const auto pinned = pin_rows(db, pins);
  const auto grouped = eval_sumprod_grouped(pinned, tree, CountingSemiring{}, group);
  return {grouped.values.begin(), grouped.values.end()};
}

CandidatePoint assemble(const Database& db, std::vector<RowId> rows) {
  CandidatePoint p;
  p.coordinates = assemble_point(db, rows);
  p.rows = std::move(rows);
  return p;
}

// H(b) for every row of the group table, by inclusion-exclusion over the children of b.
std::vector<double> subtree_cost(const Database& db, const JoinTree& tree, const LaminarForest& forest,
                                 std::size_t node, TableId group) {
  const auto& b = forest.nodes()[node];
  const auto& y = forest.representative_point(node);
  auto own = boxed_cost_grouped(db, tree, b.box, y, group);
  std::vector<double> magnitude(own);
  std::vector<double> below(own.size(), 0.0);
  for (auto child : b.children) {
    const auto inner = boxed_cost_grouped(db, tree, forest.nodes()[child].box, y, group);
    const auto nested = subtree_cost(db, tree, forest, child, group);
    for (std::size_t r = 0; r < own.size(); ++r) {
      own[r] -= inner[r];
      magnitude[r] += inner[r];
      below[r] += nested[r];
    }
  }
  for (std::size_t r = 0; r < own.size(); ++r) {
    if (std::abs(own[r]) <= 1e-12 * magnitude[r] || own[r] < 0.0) own[r] = 0.0;
    own[r] += below[r];
  }
  return own;
}

}  // namespace

CandidatePoint sample_uniform_row(const Database& db, const JoinTree& tree, CounterRng& rng) {
  SequentialRowSampler sampler(db.table_count(), [&](std::span<const RowPin> pins, TableId t) {
    return grouped_counts(db, tree, t, pins);
  });
  auto rows = sampler.draw(rng);
  if (!rows) throw EmptyJoin();
  return assemble(db, std::move(*rows));
}

std::vector<double> assignment_cost_grouped(const Database& db, const JoinTree& tree,
                                            const LaminarForest& forest, TableId group,
                                            std::span<const RowPin> fixed_rows) {
  if (fixed_rows.empty()) return subtree_cost(db, tree, forest, LaminarForest::root(), group);
  const auto pinned = pin_rows(db, fixed_rows);
  return subtree_cost(pinned, tree, forest, LaminarForest::root(), group);
}

KMeansPPSampler::KMeansPPSampler(const Database& db, const JoinTree& tree, std::uint64_t seed,
                                 SamplerConfig config)
    : db_(db),
      tree_(tree),
      config_(config),
      rng_(seed),
      uniform_(db.table_count(),
               [this](std::span<const RowPin> pins, TableId t) { return grouped_counts(db_, tree_, t, pins); }),
      surrogate_(db.table_count(), [this](std::span<const RowPin> pins, TableId t) {
        return assignment_cost_grouped(db_, tree_, *forest_, t, pins);
      }) {}

void KMeansPPSampler::add_center(Point center) {
  centers_.push_back(std::move(center));
  forest_ = build_boxes(centers_);
  surrogate_.clear();
}

std::size_t KMeansPPSampler::rejection_budget() const {
  if (config_.max_iterations > 0) return config_.max_iterations;
  const std::size_t i = centers_.size() + 1;
  return 64 * i * i * std::max<std::size_t>(db_.dimension(), 1);
}

CandidatePoint KMeansPPSampler::sample_uniform() {
  auto rows = uniform_.draw(rng_);
  if (!rows) throw EmptyJoin();
  return assemble(db_, std::move(*rows));
}

double KMeansPPSampler::surrogate_total() {
  if (centers_.empty()) throw Error("surrogate distribution needs at least one center");
  return surrogate_.total_mass();
}

CandidatePoint KMeansPPSampler::sample_from_q() {
  if (!(surrogate_total() > 0.0)) throw DegenerateDistribution();
  // A later stage can only lack mass through cancellation noise in H.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    if (auto rows = surrogate_.draw(rng_)) return assemble(db_, std::move(*rows));
  }
  throw DegenerateDistribution();
}

CandidatePoint KMeansPPSampler::propose_next_center() {
  if (centers_.empty()) return sample_uniform();
  const std::size_t budget = rejection_budget();
  const double i = static_cast<double>(centers_.size() + 1);
  const double scale = i * i * static_cast<double>(std::max<std::size_t>(db_.dimension(), 1));
  for (std::size_t attempt = 1; attempt <= budget; ++attempt) {
    auto x = sample_from_q();
    ++telemetry_.proposals;
    const double big_l = min_squared_distance(x.coordinates, centers_);
    const double big_r = forest_->assignment_cost(x.coordinates);
    if (big_l > 0.0) {
      telemetry_.max_normalized_ratio = std::max(telemetry_.max_normalized_ratio, big_r / (scale * big_l));
    }
    if (big_r > 0.0 && rng_.uniform() * big_r < big_l) {
      ++telemetry_.accepted;
      telemetry_.proposals_per_center.push_back(attempt);
      return x;
    }
  }
  throw RejectionBudgetExceeded(budget);
}

CandidatePoint KMeansPPSampler::sample_next_center() {
  auto x = propose_next_center();
  if (centers_.empty()) {
    ++telemetry_.accepted;
    ++telemetry_.proposals;
    telemetry_.proposals_per_center.push_back(1);
  }
  add_center(x.coordinates);
  return x;
}

std::vector<Point> run_kmeanspp(const Database& db, const JoinTree& tree, std::size_t k_prime,
                                std::uint64_t seed, SamplerConfig config, SamplerTelemetry* telemetry) {
  KMeansPPSampler sampler(db, tree, seed, config);
  while (sampler.centers().size() < k_prime) {
    try {
      sampler.sample_next_center();
    } catch (const DegenerateDistribution&) {
      spdlog::warn("every join point coincides with a chosen center; stopping at {} of {} centers",
                   sampler.centers().size(), k_prime);
      break;
    }
  }
  if (telemetry) *telemetry = sampler.telemetry();
  return sampler.centers();
}

}  // namespace relkmeans
