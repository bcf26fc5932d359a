#include "relkmeans/approx_counter.hpp"

#include <algorithm>
#include <cmath>

#include "relkmeans/error.hpp"
#include "relkmeans/sumprod.hpp"

namespace relkmeans {

namespace {

using Entries = std::vector<std::pair<double, std::uint64_t>>;

void coalesce(Entries& e) {
  std::size_t out = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (out > 0 && e[out - 1].first == e[i].first) {
      e[out - 1].second += e[i].second;
    } else {
      e[out++] = e[i];
    }
  }
  e.resize(out);
}

}  // namespace

std::uint64_t DistanceMultiset::total() const noexcept {
  std::uint64_t n = 0;
  for (const auto& [v, c] : entries) n += c;
  return n;
}

std::uint64_t DistanceMultiset::count_at_most(double bound) const noexcept {
  std::uint64_t n = 0;
  for (const auto& [v, c] : entries) {
    if (v > bound) break;
    n += c;
  }
  return n;
}

DistanceMultisetSemiring::DistanceMultisetSemiring(std::vector<double> center, double delta, double ceiling)
    : center_(std::move(center)), delta_(delta), ceiling_(ceiling) {}

DistanceMultiset DistanceMultisetSemiring::plus(const value_type& a, const value_type& b) const {
  DistanceMultiset out;
  out.entries.reserve(a.entries.size() + b.entries.size());
  std::merge(a.entries.begin(), a.entries.end(), b.entries.begin(), b.entries.end(),
             std::back_inserter(out.entries),
             [](const auto& x, const auto& y) { return x.first < y.first; });
  coalesce(out.entries);
  return out;
}

DistanceMultiset DistanceMultisetSemiring::times(const value_type& a, const value_type& b) const {
  DistanceMultiset out;
  if (a.entries.size() == 1 && a.entries[0].first == 0.0) {
    out = b;
    for (auto& e : out.entries) e.second *= a.entries[0].second;
    return out;
  }
  out.entries.reserve(a.entries.size() * b.entries.size());
  for (const auto& [va, ca] : a.entries) {
    for (const auto& [vb, cb] : b.entries) {
      const double v = va + vb;
      if (v > ceiling_) break;
      out.entries.emplace_back(v, ca * cb);
    }
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  coalesce(out.entries);
  return out;
}

DistanceMultiset DistanceMultisetSemiring::lift(FeatureId f, double v) const {
  const double diff = v - center_[f];
  const double sq = diff * diff;
  if (sq > ceiling_) return {};
  return {{{sq, 1}}};
}

void DistanceMultisetSemiring::compress(value_type& a) const {
  if (delta_ <= 0.0 || a.entries.empty()) return;
  const std::uint64_t n = a.total();
  Entries sketch;
  std::uint64_t threshold = 1;
  std::uint64_t previous = 0;
  std::uint64_t seen = 0;
  for (const auto& [v, c] : a.entries) {
    seen += c;
    // Every threshold rank covered by this entry takes its value.
    while (threshold <= seen) {
      sketch.emplace_back(v, threshold - previous);
      previous = threshold;
      if (threshold == n) break;
      const auto grown = static_cast<std::uint64_t>(std::floor((1.0 + delta_) * static_cast<double>(threshold)));
      threshold = std::min(n, std::max(threshold + 1, grown));
    }
  }
  coalesce(sketch);
  a.entries = std::move(sketch);
}

DistanceProfile distance_profile(const Database& db, const JoinTree& tree,
                                 std::span<const double> center, double delta) {
  const DistanceMultisetSemiring semiring({center.begin(), center.end()}, delta);
  const auto multiset = eval_sumprod(db, tree, semiring);
  DistanceProfile profile;
  profile.delta = delta;
  std::uint64_t running = 0;
  for (const auto& [v, c] : multiset.entries) {
    running += c;
    profile.values.push_back(v);
    profile.cumulative.push_back(running);
  }
  return profile;
}

std::uint64_t count_in_ball(const DistanceProfile& profile, double squared_radius) {
  const auto it = std::upper_bound(profile.values.begin(), profile.values.end(), squared_radius);
  if (it == profile.values.begin()) return 0;
  return profile.cumulative[static_cast<std::size_t>(it - profile.values.begin()) - 1];
}

double radius_for_count(const DistanceProfile& profile, std::uint64_t target) {
  if (target > profile.total()) {
    throw TargetExceedsN("target count " + std::to_string(target) + " exceeds the " +
                         std::to_string(profile.total()) + " join points");
  }
  if (target == 0) return 0.0;
  const auto it = std::lower_bound(profile.cumulative.begin(), profile.cumulative.end(), target);
  return profile.values[static_cast<std::size_t>(it - profile.cumulative.begin())];
}

double radius_for_count(const Database& db, const JoinTree& tree, std::span<const double> center,
                        std::uint64_t target, double delta) {
  const double per_table = delta / (3.0 * static_cast<double>(db.table_count() + 1));
  return radius_for_count(distance_profile(db, tree, center, per_table), target);
}

BallSampler::BallSampler(const Database& db, const JoinTree& tree, std::vector<double> center,
                         double squared_radius, double delta_prime)
    : db_(db),
      center_(std::move(center)),
      squared_radius_(squared_radius),
      rows_(db.table_count(),
            [&db, &tree, this, per_table = delta_prime / static_cast<double>(std::max<std::size_t>(db.table_count(), 1))](
                std::span<const RowPin> pins, TableId t) {
              const DistanceMultisetSemiring semiring(center_, per_table, squared_radius_);
              const auto pinned = pin_rows(db, pins);
              const auto grouped = eval_sumprod_grouped(pinned, tree, semiring, t);
              std::vector<double> weights;
              weights.reserve(grouped.values.size());
              for (const auto& ms : grouped.values) {
                weights.push_back(static_cast<double>(ms.count_at_most(squared_radius_)));
              }
              return weights;
            }) {}

double BallSampler::approximate_size() { return rows_.total_mass(); }

Point BallSampler::sample(CounterRng& rng) {
  if (!(rows_.total_mass() > 0.0)) throw EmptyBall();
  while (true) {
    auto rows = rows_.draw(rng);
    if (!rows) {
      ++discarded_;
      continue;
    }
    auto p = assemble_point(db_, *rows);
    if (squared_distance(p, center_) <= squared_radius_) return p;
    ++discarded_;
  }
}

Point sample_in_ball(const Database& db, const JoinTree& tree, std::span<const double> center,
                     double squared_radius, double delta_prime, CounterRng& rng) {
  BallSampler sampler(db, tree, {center.begin(), center.end()}, squared_radius, delta_prime);
  return sampler.sample(rng);
}

}  // namespace relkmeans
