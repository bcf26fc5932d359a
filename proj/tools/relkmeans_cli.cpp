#include <fstream>
#include <iostream>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "relkmeans/error.hpp"
#include "relkmeans/pipeline.hpp"

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_st("relkmeans"));
  spdlog::set_level(spdlog::level::warn);

  CLI::App app{"k-means over a join of relational tables without materializing it"};
  relkmeans::RunConfig cfg;
  std::string schema;
  std::string mode = "cluster";
  std::string out;
  double delta = 0.0;
  bool verbose = false;

  app.add_option("--schema", schema, "Schema document listing tables and CSV files")->required();
  app.add_option("--k", cfg.k, "Number of final centers")->required()->check(CLI::PositiveNumber);
  app.add_option("--epsilon", cfg.epsilon, "Weighting accuracy, in (0, 0.2]")->capture_default_str();
  auto* delta_opt = app.add_option("--delta", delta, "Ball-count slack (default epsilon/2)");
  app.add_option("--tau", cfg.tau, "Test-point constant, at least 30")->capture_default_str();
  app.add_option("--coreset-factor", cfg.coreset_factor, "c in k' = min(c k ceil(lg N), N)")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--mode", mode, "coreset | cluster | baseline | verify")
      ->check(CLI::IsMember({"coreset", "cluster", "baseline", "verify"}))
      ->capture_default_str();
  app.add_option("--out", out, "Write the JSON document here instead of stdout");
  app.add_option("--guard", cfg.guard, "Largest join materialized in baseline/verify modes")
      ->capture_default_str();
  app.add_option("--max-test-points", cfg.max_test_points, "Cap on test points per ring (0: none)")
      ->capture_default_str();
  app.add_flag("--timings", cfg.include_timings, "Include per-stage wall-clock times in the output");
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  CLI11_PARSE(app, argc, argv);
  if (verbose) spdlog::set_level(spdlog::level::info);
  cfg.schema = schema;
  if (*delta_opt) cfg.delta = delta;

  try {
    cfg.mode = relkmeans::parse_mode(mode);
    const auto text = relkmeans::run(cfg).dump(2) + "\n";
    if (out.empty()) {
      std::cout << text;
    } else {
      std::ofstream file(out, std::ios::binary);
      if (!file) {
        std::cerr << "error: cannot write " << out << "\n";
        return 1;
      }
      file << text;
    }
  } catch (const relkmeans::CyclicSchema& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
