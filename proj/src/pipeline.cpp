#include "relkmeans/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include <spdlog/spdlog.h>

#include "relkmeans/coreset_cluster.hpp"
#include "relkmeans/error.hpp"
#include "relkmeans/kmeanspp.hpp"
#include "relkmeans/oracle.hpp"
#include "relkmeans/relational.hpp"
#include "relkmeans/rng.hpp"
#include "relkmeans/sumprod.hpp"
#include "relkmeans/weigher.hpp"

namespace relkmeans {

namespace {

using Clock = std::chrono::steady_clock;

class StageTimer {
 public:
  explicit StageTimer(nlohmann::ordered_json& sink) : sink_(sink) {}
  void mark(const char* stage) {
    const auto now = Clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
    spdlog::info("stage {} took {:.1f} ms", stage, ms);
    sink_[stage] = ms;
    start_ = now;
  }

 private:
  nlohmann::ordered_json& sink_;
  Clock::time_point start_ = Clock::now();
};

nlohmann::ordered_json points_json(const std::vector<Point>& points) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& p : points) out.push_back(p);
  return out;
}

WeightedPointSet coreset_points(const WeightedCoreset& coreset, std::size_t k) {
  auto ps = WeightedPointSet::from(coreset.centers, coreset.weights);
  if (ps.distinct_count() >= k) return ps;
  spdlog::warn("only {} coreset points carry weight for k = {}; giving zero-weight centers unit weight",
               ps.distinct_count(), k);
  std::vector<double> weights = coreset.weights;
  std::set<std::size_t> seen_sites;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const bool first_of_site = seen_sites.insert(coreset.alias[i]).second;
    if (first_of_site && weights[i] <= 0.0) weights[i] = 1.0;
  }
  return WeightedPointSet::from(coreset.centers, weights);
}

}  // namespace

RunMode parse_mode(const std::string& name) {
  if (name == "coreset") return RunMode::coreset;
  if (name == "cluster") return RunMode::cluster;
  if (name == "baseline") return RunMode::baseline;
  if (name == "verify") return RunMode::verify;
  throw Error("unknown mode '" + name + "'");
}

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::coreset: return "coreset";
    case RunMode::cluster: return "cluster";
    case RunMode::baseline: return "baseline";
    case RunMode::verify: return "verify";
  }
  return "unknown";
}

void RunConfig::validate() const {
  if (k < 1) throw Error("k must be at least 1");
  if (!(coreset_factor > 0.0)) throw Error("coreset factor must be positive");
  WeightConfig w;
  w.epsilon = epsilon;
  w.delta = delta;
  w.tau = tau;
  w.validate();
}

std::size_t coreset_size(double factor, std::size_t k, std::uint64_t n) {
  const double lg = std::ceil(std::log2(static_cast<double>(std::max<std::uint64_t>(n, 1))));
  const double wanted = std::ceil(factor * static_cast<double>(k) * lg);
  const auto size = static_cast<std::uint64_t>(std::min(wanted, static_cast<double>(n)));
  return static_cast<std::size_t>(std::max<std::uint64_t>(size, 1));
}

nlohmann::ordered_json run(const RunConfig& config) {
  config.validate();
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();
  StageTimer timer(timings);

  const auto db = load_database(config.schema);
  const auto reduced = gyo_reduce(db.schema());
  if (const auto* verdict = std::get_if<CyclicVerdict>(&reduced)) {
    throw CyclicSchema("cyclic schema: " + verdict->describe(db));
  }
  const auto& tree = std::get<JoinTree>(reduced);
  const auto n = join_size(db, tree);
  if (n == 0) throw EmptyJoin();
  timer.mark("load");

  const CounterRng master(config.seed);
  nlohmann::ordered_json doc;
  doc["mode"] = to_string(config.mode);
  doc["seed"] = config.seed;
  doc["k"] = config.k;
  doc["dimension"] = db.dimension();
  doc["tables"] = db.table_count();
  doc["join_size"] = n;

  std::vector<Point> final_centers;
  if (config.mode != RunMode::baseline) {
    const auto k_prime = coreset_size(config.coreset_factor, config.k, n);
    doc["k_prime"] = k_prime;

    SamplerTelemetry telemetry;
    const auto sampled = run_kmeanspp(db, tree, k_prime, master.fork(1)(), {}, &telemetry);
    timer.mark("sample");

    WeightConfig wc;
    wc.epsilon = config.epsilon;
    wc.delta = config.delta;
    wc.tau = config.tau;
    wc.k_prime = sampled.size();
    wc.seed = master.fork(2)();
    wc.max_test_points = config.max_test_points;
    const auto coreset = compute_weights(db, tree, sampled, wc);
    timer.mark("weigh");

    doc["sampled_centers"] = points_json(sampled);
    doc["weights"] = coreset.weights;
    std::size_t counted = 0;
    for (const auto& d : coreset.donuts) counted += d.counted ? 1 : 0;
    doc["telemetry"] = {
        {"proposals", telemetry.proposals},
        {"accepted", telemetry.accepted},
        {"mean_rejections", telemetry.mean_rejections()},
        {"max_normalized_ratio", telemetry.max_normalized_ratio},
        {"test_points_per_ring", coreset.test_points_per_ring},
        {"rings", coreset.donuts.size()},
        {"rings_counted", counted},
    };

    if (config.mode != RunMode::coreset) {
      const auto ps = coreset_points(coreset, config.k);
      const auto solved = solve_weighted_kmeans(ps, config.k, master.fork(3)());
      final_centers = solved.centers;
      doc["centers"] = points_json(final_centers);
      doc["coreset_cost"] = solved.cost;
      doc["surrogate_cost"] = relational_cost(db, tree, final_centers);
      timer.mark("cluster");
    }
  }

  if (config.mode == RunMode::baseline || config.mode == RunMode::verify) {
    const auto joined = materialize(db, tree, config.guard);
    const std::vector<double> unit(joined.rows.size(), 1.0);
    const auto ps = WeightedPointSet::from(joined.rows, unit);
    const auto best = solve_weighted_kmeans(ps, config.k, master.fork(4)(), 20);
    doc["baseline_centers"] = points_json(best.centers);
    doc["baseline_cost"] = best.cost;
    if (config.mode == RunMode::verify) {
      const double exact = exact_cost(joined, final_centers);
      doc["exact_cost"] = exact;
      if (best.cost > 0.0) {
        doc["cost_ratio"] = exact / best.cost;
      } else {
        doc["cost_ratio"] = exact > 0.0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(1.0);
      }
    }
    timer.mark("baseline");
  }

  if (config.include_timings) doc["timings_ms"] = timings;
  return doc;
}

}  // namespace relkmeans
