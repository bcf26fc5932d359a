#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

namespace relkmeans {

enum class RunMode { coreset, cluster, baseline, verify };

RunMode parse_mode(const std::string& name);
std::string to_string(RunMode mode);

struct RunConfig {
  std::filesystem::path schema;
  std::size_t k = 1;
  double epsilon = 0.1;
  std::optional<double> delta;
  double tau = 30.0;
  double coreset_factor = 3.0;
  std::uint64_t seed = 0;
  RunMode mode = RunMode::cluster;
  std::size_t guard = 100000;
  /// Cap on test points per ring in the weighting stage; 0 means uncapped.
  std::size_t max_test_points = 0;
  /// Adds per-stage wall-clock times to the document (which then varies run to run).
  bool include_timings = false;

  void validate() const;
};

/// k' = min(c * k * ceil(lg N), N), at least 1.
std::size_t coreset_size(double factor, std::size_t k, std::uint64_t n);

/// Runs the requested stages and returns the result document. Throws
/// CyclicSchema for cyclic schemas and other relkmeans errors as they arise.
nlohmann::ordered_json run(const RunConfig& config);

}  // namespace relkmeans
