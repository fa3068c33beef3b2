#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ptodist/tasks.hpp"

using namespace ptodist;

namespace {

Vector one_hot(std::size_t n, std::size_t i) {
  Vector z(n, 0.0);
  z[i] = 1.0;
  return z;
}

TaskDefinition grid_task(std::size_t side, Neighborhood nb = Neighborhood::eight) {
  GridParams p;
  p.side = side;
  p.neighborhood = nb;
  return TaskDefinition::shortest_path(p);
}

TaskDefinition default_inventory(Vector demands = {1, 2, 3, 4, 5}) {
  return TaskDefinition::inventory(InventoryParams{}, std::move(demands));
}

Vector random_probs(std::size_t k, std::mt19937_64& rng, double floor = 0.0) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  Vector p(k);
  double s = 0.0;
  for (double& v : p) s += (v = u(rng));
  for (double& v : p) v /= s;
  return p;
}

}  // namespace

TEST_CASE("task definitions validate their parameters") {
  CHECK_THROWS_AS(TaskDefinition::topk(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(TaskDefinition::topk(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(grid_task(1), std::invalid_argument);
  CHECK_THROWS_AS(default_inventory({2, 1}), std::invalid_argument);
  InventoryParams flat{};
  flat.q0 = 0.0;
  flat.qb = 0.0;
  CHECK_THROWS_AS(flat.validate(), std::invalid_argument);
  CHECK(parse_task_kind(to_string(TaskKind::shortest_path)) == TaskKind::shortest_path);
  CHECK_THROWS_AS(parse_task_kind("knapsack"), std::invalid_argument);
}

TEST_CASE("objective worked examples") {
  const auto topk = TaskDefinition::topk(3, 1);
  CHECK(tasks::objective(topk, one_hot(3, 2), Vector{3, 1, 2}) == 2.0);

  // both 3-cell monotone paths on a 2x2 grid cost 3
  const auto grid = grid_task(2);
  CHECK(tasks::objective(grid, Vector{1, 1, 0, 1}, Vector{1, 1, 1, 1}) == -3.0);
  CHECK(tasks::objective(grid, Vector{1, 0, 1, 1}, Vector{1, 1, 1, 1}) == -3.0);

  // linear order cost only, demand certain at d = z
  InventoryParams linear{};
  linear.c0 = 1.0;
  linear.q0 = linear.cb = linear.qb = linear.ch = linear.qh = 0.0;
  CHECK(-tasks::expected_stock_cost(InventoryTask{linear, {2.0}}, Vector{1.0}, 2.0) == -2.0);

  CHECK_THROWS_AS(tasks::objective(topk, Vector{1, 1, 0}, Vector{3, 1, 2}), std::invalid_argument);
}

TEST_CASE("oracle worked examples") {
  CHECK(tasks::oracle(TaskDefinition::topk(3, 1), Vector{3, 1, 2}) == one_hot(3, 0));

  SUBCASE("3x3 grid avoids an expensive center") {
    const auto task = grid_task(3);
    Vector y(9, 1.0);
    y[4] = 100.0;
    const Vector z = tasks::oracle(task, y);
    CHECK(z[4] == 0.0);
    CHECK(tasks::path_cost(task.grid_params(), z, y) == oracle::enumerate_paths(3, true, y));
  }

  SUBCASE("inventory matches a fine grid search") {
    const auto task = default_inventory({1, 3});
    const Vector probs{0.5, 0.5};
    const double z = tasks::oracle(task, probs)[0];
    const double ref = oracle::grid_search_order(InventoryParams{}, Vector{1, 3}, probs, 3.0, 1e-4);
    CHECK(std::abs(z - ref) <= 1e-3);
  }
}

TEST_CASE("decision quality and regret worked examples") {
  const auto topk = TaskDefinition::topk(3, 1);
  const Vector y{3, 1, 2}, y_hat{0, 5, 0};
  CHECK(tasks::decision_quality(topk, y, y) == 3.0);
  CHECK(tasks::decision_quality(topk, y_hat, y) == 1.0);
  CHECK(tasks::decision_regret(topk, y_hat, y) == 2.0);
  CHECK(tasks::decision_regret(topk, y, y) == 0.0);
  CHECK(tasks::decision_regret(topk, Vector{9, 0, 1}, y) == 0.0);

  const auto grid = grid_task(3);
  Vector costs(9, 2.0);
  costs[4] = 1.0;
  CHECK(tasks::decision_quality(grid, costs, costs) == -oracle::enumerate_paths(3, true, costs));
}

TEST_CASE("validate_decision") {
  const auto topk = TaskDefinition::topk(3, 1);
  CHECK(tasks::validate_decision(topk, Vector{0, 1, 0}));
  CHECK_FALSE(tasks::validate_decision(topk, Vector{1, 1, 0}));
  CHECK_FALSE(tasks::validate_decision(topk, Vector{0.5, 0.5, 0}));
  CHECK_FALSE(tasks::validate_decision(topk, Vector{0, 1}));

  const auto grid = grid_task(2);
  CHECK(tasks::validate_decision(grid, Vector{1, 1, 0, 1}));
  CHECK(tasks::validate_decision(grid, Vector{1, 0, 0, 1}));  // diagonal move
  CHECK_FALSE(tasks::validate_decision(grid_task(2, Neighborhood::four), Vector{1, 0, 0, 1}));
  CHECK_FALSE(tasks::validate_decision(grid, Vector{0, 1, 1, 1}));  // misses the start
  CHECK_FALSE(tasks::validate_decision(grid_task(3), Vector{1, 0, 0, 0, 0, 0, 0, 0, 1}));

  const auto inv = default_inventory();
  CHECK(tasks::validate_decision(inv, Vector{0.0}));
  CHECK(tasks::validate_decision(inv, Vector{2.5}));
  CHECK_FALSE(tasks::validate_decision(inv, Vector{-0.1}));
  CHECK_FALSE(tasks::validate_decision(inv, Vector{1, 2}));
}

TEST_CASE("validate_labels") {
  CHECK_THROWS_AS(tasks::validate_labels(TaskDefinition::topk(3, 1), Vector{1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(tasks::validate_labels(grid_task(2), Vector{1, -1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(tasks::validate_labels(default_inventory({1, 2}), Vector{0.5, 0.6}),
                  std::invalid_argument);
  CHECK_NOTHROW(tasks::validate_labels(default_inventory({1, 2}), Vector{0.25, 0.75}));
}

TEST_CASE("fstock worked examples") {
  const InventoryParams p{};
  for (double d : {0.0, 1.0, 2.5}) CHECK(tasks::fstock(p, d, d) == doctest::Approx(30 * d + 5 * d * d));
  CHECK(tasks::fstock(p, 2.0, 0.0) == doctest::Approx(24.0));
  const InventoryParams zero{0, 0, 0, 0, 0, 0};
  CHECK(tasks::fstock(zero, 3.0, 1.0) == 0.0);
}

TEST_CASE("top-k oracle is optimal over every feasible selection") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::size_t k = 1; k <= std::min<std::size_t>(3, n); ++k) {
      const auto task = TaskDefinition::topk(n, k);
      for (int trial = 0; trial < 10; ++trial) {
        Vector y(n);
        for (double& v : y) v = g(rng);
        const double best = tasks::objective(task, tasks::oracle(task, y), y);
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
          Vector z(n);
          for (std::size_t i = 0; i < n; ++i) z[i] = (mask >> i) & 1u;
          CHECK(best >= tasks::objective(task, z, y) - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("top-k ties go to the lowest index") {
  CHECK(tasks::topk_indices(Vector{1, 2, 2, 2}, 2) == std::vector<std::size_t>{1, 2});
  CHECK(tasks::oracle(TaskDefinition::topk(3, 1), Vector{0, 0, 0}) == one_hot(3, 0));
}

TEST_CASE("shortest-path oracle matches exhaustive enumeration") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.8, 9.2);
  for (std::size_t side = 2; side <= 4; ++side) {
    for (Neighborhood nb : {Neighborhood::eight, Neighborhood::four}) {
      const auto task = grid_task(side, nb);
      for (int trial = 0; trial < 100; ++trial) {
        Vector y(side * side);
        for (double& v : y) v = u(rng);
        const Vector z = tasks::oracle(task, y);
        REQUIRE(tasks::validate_decision(task, z));
        CHECK(tasks::path_cost(task.grid_params(), z, y) ==
              doctest::Approx(oracle::enumerate_paths(side, nb == Neighborhood::eight, y)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("shortest path options") {
  SUBCASE("uniform field gives a deterministic diagonal path") {
    const auto task = grid_task(4);
    const Vector y(16, 1.0);
    const Vector z = tasks::oracle(task, y);
    CHECK(z == tasks::oracle(task, y));
    CHECK(tasks::path_cost(task.grid_params(), z, y) == 4.0);
  }
  SUBCASE("start cell can be excluded") {
    GridParams p;
    p.side = 3;
    p.count_start = false;
    const Vector y{5, 1, 1, 1, 1, 1, 1, 1, 1};
    const auto task = TaskDefinition::shortest_path(p);
    CHECK(tasks::path_cost(p, tasks::oracle(task, y), y) == 2.0);
  }
  SUBCASE("length penalty prefers fewer cells") {
    GridParams p;
    p.side = 3;
    p.neighborhood = Neighborhood::four;
    p.length_penalty = 10.0;
    const auto task = TaskDefinition::shortest_path(p);
    Vector y(9, 1.0);
    const Vector z = tasks::oracle(task, y);
    double cells = 0.0;
    for (double v : z) cells += v;
    CHECK(cells == 5.0);
    CHECK(tasks::path_cost(p, z, y) == 5.0 + 50.0);
  }
  SUBCASE("neighbors") {
    CHECK(tasks::grid_neighbors(3, Neighborhood::four, 4).size() == 4);
    CHECK(tasks::grid_neighbors(3, Neighborhood::eight, 4).size() == 8);
    CHECK(tasks::grid_neighbors(3, Neighborhood::eight, 0).size() == 3);
  }
}

TEST_CASE("inventory oracle matches a 1e-4 grid search") {
  std::mt19937_64 rng(3);
  const Vector demands{1, 2, 3, 4, 5};
  const auto task = default_inventory(demands);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector probs = random_probs(5, rng);
    const double z = tasks::optimal_order(task.inventory_params(), probs);
    const double ref = oracle::grid_search_order(InventoryParams{}, demands, probs, 5.0, 1e-4);
    CHECK(std::abs(z - ref) <= 1e-3);
    const double at = oracle::expected_fstock(InventoryParams{}, demands, probs, z);
    CHECK(at <= oracle::expected_fstock(InventoryParams{}, demands, probs, z + 1e-3));
    CHECK(at <= oracle::expected_fstock(InventoryParams{}, demands, probs, std::max(0.0, z - 1e-3)));
  }
}

TEST_CASE("inventory oracle with other cost structures") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> coef(0.0, 40.0);
  for (int trial = 0; trial < 30; ++trial) {
    InventoryParams p{coef(rng), coef(rng) + 0.5, coef(rng), coef(rng), coef(rng), coef(rng)};
    const Vector demands{0.5, 1.5, 4.0};
    const InventoryTask task{p, demands};
    const Vector probs = random_probs(3, rng);
    const double z = tasks::optimal_order(task, probs);
    const double ref = oracle::grid_search_order(p, demands, probs, 4.0, 1e-4);
    CHECK(std::abs(z - ref) <= 1e-3);
  }
}

TEST_CASE("inventory reduction equals the joint QP optimum") {
  std::mt19937_64 rng(5);
  const Vector demands{1, 2, 3, 4, 5};
  for (int trial = 0; trial < 20; ++trial) {
    const Vector probs = random_probs(5, rng, 0.1);
    const InventoryTask task{InventoryParams{}, demands};
    const double z = tasks::optimal_order(task, probs);
    const double reduced = tasks::expected_stock_cost(task, probs, z);
    CHECK(std::abs(reduced - oracle::joint_qp_value(InventoryParams{}, demands, probs)) <= 1e-3);
  }
}

TEST_CASE("regret is nonnegative and zero at the truth") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.8, 9.2);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto topk = TaskDefinition::topk(6, 2);
  const auto grid = grid_task(4);
  const auto inv = default_inventory();
  for (int trial = 0; trial < 200; ++trial) {
    Vector a(6), b(6), ga(16), gb(16);
    for (double& v : a) v = g(rng);
    for (double& v : b) v = g(rng);
    for (double& v : ga) v = u(rng);
    for (double& v : gb) v = u(rng);
    const Vector pa = random_probs(5, rng), pb = random_probs(5, rng);
    CHECK(tasks::decision_regret(topk, a, b) >= 0.0);
    CHECK(tasks::decision_regret(topk, b, b) == 0.0);
    CHECK(tasks::decision_regret(grid, ga, gb) >= 0.0);
    CHECK(tasks::decision_regret(grid, gb, gb) == 0.0);
    CHECK(tasks::decision_regret(inv, pa, pb) >= 0.0);
    CHECK(tasks::decision_regret(inv, pb, pb) == 0.0);
  }
}

TEST_CASE("lipschitz probe reports finite bounded ratios") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto task = TaskDefinition::topk(5, 1);
  std::vector<Vector> pool(40, Vector(5));
  for (auto& v : pool)
    for (double& e : v) e = g(rng);
  const auto e = tasks::lipschitz_probe(task, pool, 2000, 1);
  CHECK(std::isfinite(e.k1));
  CHECK(std::isfinite(e.k2));
  CHECK(e.combined > 0.0);
  CHECK(e.combined <= std::max(e.k1, e.k2) + 1e-12);
  const auto again = tasks::lipschitz_probe(task, pool, 2000, 1);
  CHECK(again.k1 == e.k1);
}
