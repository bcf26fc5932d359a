#pragma once

#include <stdexcept>
#include <string>

namespace relkmeans {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed schema document or CSV file. The message carries file and line.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The join of the input tables has no rows.
class EmptyJoin : public Error {
 public:
  EmptyJoin() : Error("join is empty") {}
};

/// Every join point coincides with the representative it is assigned to, so the
/// surrogate distribution has total mass zero.
class DegenerateDistribution : public Error {
 public:
  DegenerateDistribution() : Error("total assignment cost is zero") {}
};

class RejectionBudgetExceeded : public Error {
 public:
  explicit RejectionBudgetExceeded(std::size_t budget)
      : Error("rejection budget of " + std::to_string(budget) + " proposals exceeded"),
        budget_(budget) {}
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t budget_;
};

class TargetExceedsN : public Error {
 public:
  using Error::Error;
};

class EmptyBall : public Error {
 public:
  EmptyBall() : Error("ball contains no join point") {}
};

class InsufficientDistinctPoints : public Error {
 public:
  using Error::Error;
};

class MaterializationGuard : public Error {
 public:
  using Error::Error;
};

/// Raised by the pipeline when the schema hypergraph is not acyclic.
class CyclicSchema : public Error {
 public:
  using Error::Error;
};

}  // namespace relkmeans
