#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "relkmeans/geometry.hpp"
#include "relkmeans/relational.hpp"
#include "relkmeans/rng.hpp"
#include "relkmeans/sequential.hpp"

namespace relkmeans {

/// A multiset of squared distances stored as ascending (value, multiplicity) pairs.
struct DistanceMultiset {
  std::vector<std::pair<double, std::uint64_t>> entries;

  std::uint64_t total() const noexcept;
  /// Multiplicity of values <= bound.
  std::uint64_t count_at_most(double bound) const noexcept;
  friend bool operator==(const DistanceMultiset&, const DistanceMultiset&) = default;
};

/// Semiring of distance multisets: plus is multiset union, times adds values
/// pairwise (a convolution), and q_f(v) = {(v - c_f)^2}. Both operations are
/// exact. `compress` replaces a multiset by a rank sketch: with thresholds
/// t_0 = 1, t_{k+1} = max(t_k + 1, floor((1+delta) t_k)) and finally the total
/// n, each element is rounded up to the value found at the next threshold rank.
/// Totals are preserved and every count-at-most is underestimated by a factor
/// of less than 1+delta. Values above `ceiling` can be discarded, since every
/// lifted value is nonnegative.
class DistanceMultisetSemiring {
 public:
  using value_type = DistanceMultiset;

  DistanceMultisetSemiring(std::vector<double> center, double delta,
                           double ceiling = std::numeric_limits<double>::infinity());

  value_type zero() const { return {}; }
  value_type one() const { return {{{0.0, 1}}}; }
  value_type plus(const value_type& a, const value_type& b) const;
  value_type times(const value_type& a, const value_type& b) const;
  value_type lift(FeatureId f, double v) const;
  void compress(value_type& a) const;

  double delta() const noexcept { return delta_; }

 private:
  std::vector<double> center_;
  double delta_;
  double ceiling_;
};

/// Cumulative count of join points against squared distance from a center.
struct DistanceProfile {
  double delta = 0.0;
  std::vector<double> values;           // ascending squared distances
  std::vector<std::uint64_t> cumulative;  // points with squared distance <= values[j]

  std::uint64_t total() const noexcept { return cumulative.empty() ? 0 : cumulative.back(); }
};

/// Profile of squared distances from `center` over the join. With delta = 0
/// the profile is exact; otherwise the m-1 messages sent up the join tree and
/// the final result are sketched with `delta`, so counts are within (1+delta)^m.
DistanceProfile distance_profile(const Database& db, const JoinTree& tree,
                                 std::span<const double> center, double delta);

/// Approximate number of join points with squared distance <= squared_radius.
std::uint64_t count_in_ball(const DistanceProfile& profile, double squared_radius);

/// Smallest profile squared radius whose approximate count reaches `target`.
/// Throws TargetExceedsN when target exceeds the number of join points.
double radius_for_count(const DistanceProfile& profile, std::uint64_t target);

/// Convenience: builds the profile with per-table slack delta / (3(m+1)) so the
/// reached count is within a factor 1+delta of the exact one.
double radius_for_count(const Database& db, const JoinTree& tree, std::span<const double> center,
                        std::uint64_t target, double delta);

/// Near-uniform sampler of join points inside a closed ball (squared radius).
/// Rows are drawn table by table, weighted by sketched in-ball counts with
/// per-table slack delta_prime / m; draws outside the ball are discarded.
class BallSampler {
 public:
  BallSampler(const Database& db, const JoinTree& tree, std::vector<double> center,
              double squared_radius, double delta_prime);
  BallSampler(const BallSampler&) = delete;
  BallSampler& operator=(const BallSampler&) = delete;

  /// Throws EmptyBall when no join point lies inside.
  Point sample(CounterRng& rng);
  /// Approximate number of points in the ball used as first-stage mass.
  double approximate_size();
  std::size_t discarded() const noexcept { return discarded_; }

 private:
  const Database& db_;
  std::vector<double> center_;
  double squared_radius_;
  SequentialRowSampler rows_;
  std::size_t discarded_ = 0;
};

Point sample_in_ball(const Database& db, const JoinTree& tree, std::span<const double> center,
                     double squared_radius, double delta_prime, CounterRng& rng);

}  // namespace relkmeans
