#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <vector>

#include "relkmeans/relational.hpp"

namespace relkmeans {

/// A commutative semiring together with its per-feature embedding q_f.
/// `lift(f, v)` maps the value v of feature f into the carrier.
template <class S>
concept Semiring = requires(const S& s, const typename S::value_type& a, FeatureId f, double v) {
  typename S::value_type;
  { s.zero() } -> std::convertible_to<typename S::value_type>;
  { s.one() } -> std::convertible_to<typename S::value_type>;
  { s.plus(a, a) } -> std::convertible_to<typename S::value_type>;
  { s.times(a, a) } -> std::convertible_to<typename S::value_type>;
  { s.lift(f, v) } -> std::convertible_to<typename S::value_type>;
};

/// Semirings whose carrier values are summarized after every message; the
/// engine calls `compress` on each outgoing message entry and on results.
template <class S>
concept CompressingSemiring = Semiring<S> && requires(const S& s, typename S::value_type& a) {
  s.compress(a);
};

/// (N, +, x) with q_f = 1: counts join rows.
struct CountingSemiring {
  using value_type = std::uint64_t;
  value_type zero() const noexcept { return 0; }
  value_type one() const noexcept { return 1; }
  value_type plus(value_type a, value_type b) const noexcept { return a + b; }
  value_type times(value_type a, value_type b) const noexcept { return a * b; }
  value_type lift(FeatureId, double) const noexcept { return 1; }
};

/// (aggregate cost, count). Products add costs weighted by the other side's count.
struct CostPair {
  double cost = 0.0;
  double count = 0.0;
  friend bool operator==(const CostPair&, const CostPair&) = default;
};

/// Pair semiring with (a,b)+(c,d) = (a+c, b+d) and (a,b)x(c,d) = (ad+cb, bd).
/// With q_f(v) = ((v - y_f)^2, 1) the cost component of a SumProd query is the
/// total squared distance of the join rows to the target point y.
class CostPairSemiring {
 public:
  using value_type = CostPair;

  explicit CostPairSemiring(std::vector<double> target) : target_(std::move(target)) {}

  value_type zero() const noexcept { return {0.0, 0.0}; }
  value_type one() const noexcept { return {0.0, 1.0}; }
  value_type plus(const value_type& x, const value_type& y) const noexcept {
    return {x.cost + y.cost, x.count + y.count};
  }
  value_type times(const value_type& x, const value_type& y) const noexcept {
    return {x.cost * y.count + y.cost * x.count, x.count * y.count};
  }
  value_type lift(FeatureId f, double v) const noexcept {
    const double diff = v - target_[f];
    return {diff * diff, 1.0};
  }

  const std::vector<double>& target() const noexcept { return target_; }

 private:
  std::vector<double> target_;
};

}  // namespace relkmeans
