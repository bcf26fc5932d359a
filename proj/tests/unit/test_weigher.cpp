#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "relkmeans/error.hpp"
#include "relkmeans/oracle.hpp"
#include "relkmeans/weigher.hpp"

using namespace relkmeans;

TEST_CASE("nearest center breaks ties toward the lower index") {
  const std::vector<Point> centers{{0, 0}, {2, 0}, {1, 5}};
  CHECK(nearest_center(std::vector<double>{2, 0}, centers) == 1);
  CHECK(nearest_center(std::vector<double>{1, 0}, centers) == 0);
  CHECK(min_squared_distance(std::vector<double>{1, 0}, centers) == 1.0);

  CounterRng rng(4);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> p{static_cast<double>(rng.below(10)), static_cast<double>(rng.below(10))};
    std::size_t best = 0;
    for (std::size_t c = 1; c < centers.size(); ++c) {
      if (squared_distance(p, centers[c]) < squared_distance(p, centers[best])) best = c;
    }
    CHECK(nearest_center(p, centers) == best);
  }
}

TEST_CASE("test point formula") {
  CHECK(test_points_formula(30, 0.1, 2, 16) == 192000);
  CHECK(test_points_formula(30, 0.2, 1, 2) == 750);
}

TEST_CASE("configuration limits") {
  WeightConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tau = 10;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.delta = 0.08;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.epsilon = 0.3;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("a single center collects every point") {
  std::vector<Point> pts;
  for (int i = 0; i < 20; ++i) pts.push_back({static_cast<double>(i * i), static_cast<double>(3 * i)});
  const auto db = fixtures::single_table(pts);
  const auto tree = fixtures::tree_of(db);
  WeightConfig cfg;
  cfg.epsilon = 0.2;
  cfg.max_test_points = 500;
  const auto coreset = compute_weights(db, tree, std::vector<Point>{pts[7]}, cfg);
  CHECK(coreset.join_size == 20);
  CHECK(coreset.donuts.size() == 6);
  CHECK(coreset.test_points_per_ring == 500);
  CHECK(coreset.weights[0] == doctest::Approx(20.0));
  for (const auto& d : coreset.donuts) {
    CHECK(d.wins == d.in_donut);
    CHECK(d.in_donut <= d.draws);
  }
}

TEST_CASE("duplicated centers credit the first copy") {
  std::vector<Point> pts;
  for (int i = 0; i < 8; ++i) pts.push_back({static_cast<double>(i * 3 + (i % 2))});
  const auto db = fixtures::single_table(pts);
  const auto tree = fixtures::tree_of(db);
  WeightConfig cfg;
  cfg.max_test_points = 300;
  const std::vector<Point> centers{pts[2], pts[2], pts[5]};
  const auto coreset = compute_weights(db, tree, centers, cfg);
  CHECK(coreset.alias == std::vector<std::size_t>{0, 0, 1});
  CHECK(coreset.weights[1] == 0.0);
  CHECK(coreset.weights[0] > 0.0);
  CHECK(coreset.weights[2] > 0.0);
}

TEST_CASE("weights are reproducible for a seed") {
  std::vector<Point> pts;
  for (int i = 0; i < 30; ++i) pts.push_back({static_cast<double>((i * 37) % 101), static_cast<double>(i)});
  const auto db = fixtures::single_table(pts);
  const auto tree = fixtures::tree_of(db);
  WeightConfig cfg;
  cfg.seed = 99;
  cfg.max_test_points = 400;
  const std::vector<Point> centers{pts[0], pts[10], pts[20]};
  const auto a = compute_weights(db, tree, centers, cfg);
  const auto b = compute_weights(db, tree, centers, cfg);
  CHECK(a.weights == b.weights);
  for (double w : a.weights) CHECK(w >= 0.0);
  CHECK(std::accumulate(a.weights.begin(), a.weights.end(), 0.0) <= 30.0 * 1.05 * 1.1);
}
