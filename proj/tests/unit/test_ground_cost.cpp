#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "ptodist/datagen.hpp"
#include "ptodist/ground_cost.hpp"

using namespace ptodist;

namespace {

const GroundCostWeights kFeatureOnly{1.0, 0.0, 0.0};
const GroundCostWeights kDecisionOnly{0.0, 0.0, 1.0};

Sample topk_sample(Vector x, Vector y, std::size_t pick) {
  Vector z(y.size(), 0.0);
  z[pick] = 1.0;
  return Sample{std::move(x), std::move(y), std::move(z)};
}

PtODataset singleton(const TaskDefinition& task, Sample s) {
  PtODataset d;
  d.task = task;
  d.samples.push_back(std::move(s));
  d.provenance.generator = "test";
  return d;
}

datagen::GridGenOptions small_grid(std::uint64_t cost_seed, std::uint64_t map_seed, std::size_t n) {
  datagen::GridGenOptions o;
  o.class_cost_seed = cost_seed;
  o.map_seed = map_seed;
  o.side = 5;
  o.n_instances = n;
  return o;
}

PtODataset small_inventory(std::uint64_t mean_seed, std::size_t n) {
  datagen::InventoryGenOptions o;
  o.mean_shift_seed = mean_seed;
  o.theta_seed = 4;
  o.n_instances = n;
  return datagen::gen_inventory(o);
}

std::vector<PtODataset> family_pools() {
  return {datagen::gen_topk(0.4, 6, 30, 2, 1), datagen::gen_grid(small_grid(1, 2, 30)),
          small_inventory(3, 30)};
}

}  // namespace

TEST_CASE("decision quality disparity worked examples") {
  const auto task = TaskDefinition::topk(3, 1);
  const Vector y{3, 1, 2}, z0{1, 0, 0}, z1{0, 1, 0};
  CHECK(decision_quality_disparity(task, z0, z0, y, y) == 0.0);
  CHECK(decision_quality_disparity(task, z0, z1, y, y) == 2.0);
  try {
    decision_quality_disparity(task, z0, Vector{1, 1, 0}, y, y);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("z_prime") != std::string::npos);
  }
  try {
    decision_quality_disparity(task, Vector{0, 0, 0}, z0, y, y);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("z is infeasible") != std::string::npos);
  }
}

TEST_CASE("disparity at the oracle decisions recovers regret") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto task = TaskDefinition::topk(6, 2);
  for (int trial = 0; trial < 200; ++trial) {
    Vector y(6), y_hat(6);
    for (double& v : y) v = g(rng);
    for (double& v : y_hat) v = g(rng);
    CHECK(decision_quality_disparity(task, tasks::oracle(task, y_hat), tasks::oracle(task, y), y, y) ==
          doctest::Approx(tasks::decision_regret(task, y_hat, y)).epsilon(1e-15));
  }
}

TEST_CASE("ground cost worked examples") {
  const auto task = TaskDefinition::topk(3, 1);
  const Sample s = topk_sample({-1, 0, 1}, {3, 1, 2}, 0);
  for (CostMode mode : {CostMode::as_written, CostMode::symmetrized}) {
    CHECK(pto_ground_cost(s, s, GroundCostWeights{}, task, mode).total == 0.0);
  }

  const auto one = TaskDefinition::topk(1, 1);
  const Sample a{{0.0}, {5.0}, {1.0}}, b{{3.0}, {-2.0}, {1.0}};
  CHECK(pto_ground_cost(a, b, kFeatureOnly, one, CostMode::as_written).total == 3.0);

  const Sample t = topk_sample({-1, 0, 1}, {3, 1, 2}, 1);
  for (CostMode mode : {CostMode::as_written, CostMode::symmetrized}) {
    const auto bd = pto_ground_cost(s, t, kDecisionOnly, task, mode);
    CHECK(bd.total == 2.0);
    CHECK(bd.decision_term == 2.0);
  }
}

TEST_CASE("as-written and symmetrized decision terms") {
  const auto task = TaskDefinition::topk(2, 1);
  const Sample s{{0, 1}, {1, 0}, {1, 0}};
  const Sample t{{0, 1}, {0, 4}, {0, 1}};
  // under t's labels: |0 - 4| = 4; under s's labels: |1 - 0| = 1
  CHECK(pto_ground_cost(s, t, kDecisionOnly, task, CostMode::as_written).total == 4.0);
  CHECK(pto_ground_cost(t, s, kDecisionOnly, task, CostMode::as_written).total == 1.0);
  CHECK(pto_ground_cost(s, t, kDecisionOnly, task, CostMode::symmetrized).total == 2.5);
  CHECK(pto_ground_cost(t, s, kDecisionOnly, task, CostMode::symmetrized).total == 2.5);
  CHECK(parse_cost_mode(to_string(CostMode::as_written)) == CostMode::as_written);
  CHECK(parse_cost_mode("symmetrized") == CostMode::symmetrized);
  CHECK_THROWS_AS(parse_cost_mode("both"), std::invalid_argument);
}

TEST_CASE("ground cost errors and weights") {
  const auto task = TaskDefinition::topk(3, 1);
  const Sample s = topk_sample({0, 0, 0}, {1, 2, 3}, 0);
  const Sample short_x{{0, 0}, {1, 2, 3}, {1, 0, 0}};
  CHECK_THROWS_AS(pto_ground_cost(s, short_x, GroundCostWeights{}, task, CostMode::as_written),
                  std::invalid_argument);
  CHECK_THROWS_AS(GroundCostWeights::make(0.5, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(GroundCostWeights::make(-0.1, 0.6, 0.5), std::invalid_argument);
  CHECK_NOTHROW(GroundCostWeights::make(0.2, 0.3, 0.5));
}

TEST_CASE("breakdown total and weight linearity") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const PtODataset& d : family_pools()) {
    for (int trial = 0; trial < 50; ++trial) {
      const Sample& s = d.samples[rng() % d.size()];
      const Sample& t = d.samples[rng() % d.size()];
      const double a = u(rng), b = u(rng) * (1.0 - a);
      const GroundCostWeights w{a, b, 1.0 - a - b};
      const auto bd = pto_ground_cost(s, t, w, d.task, CostMode::as_written);
      CHECK(bd.total == doctest::Approx(w.alpha_x * bd.feature_term + w.alpha_y * bd.label_term +
                                        w.alpha_w * bd.decision_term).epsilon(1e-12));
      const double fx = pto_ground_cost(s, t, kFeatureOnly, d.task, CostMode::as_written).total;
      const double fy = pto_ground_cost(s, t, GroundCostWeights{0, 1, 0}, d.task, CostMode::as_written).total;
      const double fw = pto_ground_cost(s, t, kDecisionOnly, d.task, CostMode::as_written).total;
      CHECK(bd.total == doctest::Approx(a * fx + b * fy + (1.0 - a - b) * fw).epsilon(1e-12));
    }
  }
}

TEST_CASE("doubling the decision gap doubles the decision term") {
  const auto task = TaskDefinition::topk(3, 1);
  const Sample s = topk_sample({0, 0, 0}, {3, 1, 2}, 0);
  const Sample t = topk_sample({0, 0, 0}, {3, 1, 2}, 1);
  const Sample s2 = topk_sample({0, 0, 0}, {5, 1, 2}, 0);
  const Sample t2 = topk_sample({0, 0, 0}, {5, 1, 2}, 1);
  const double base = pto_ground_cost(s, t, kDecisionOnly, task, CostMode::symmetrized).decision_term;
  const double doubled = pto_ground_cost(s2, t2, kDecisionOnly, task, CostMode::symmetrized).decision_term;
  CHECK(doubled == 2.0 * base);
}

TEST_CASE("symmetrized ground cost metric properties") {
  std::mt19937_64 rng(3);
  const GroundCostWeights w{0.3, 0.3, 0.4};
  for (const PtODataset& d : family_pools()) {
    for (int trial = 0; trial < 2000; ++trial) {
      const Sample& a = d.samples[rng() % d.size()];
      const Sample& b = d.samples[rng() % d.size()];
      const double ab = pto_ground_cost(a, b, w, d.task, CostMode::symmetrized).total;
      const double ba = pto_ground_cost(b, a, w, d.task, CostMode::symmetrized).total;
      CHECK(ab >= 0.0);
      CHECK(ab == ba);
      if (ab == 0.0) {
        CHECK(a.x == b.x);
        CHECK(a.y == b.y);
        CHECK(a.z == b.z);
      }
    }
  }
}

TEST_CASE("fixed-label disparity satisfies the triangle inequality") {
  std::mt19937_64 rng(4);
  for (const PtODataset& d : family_pools()) {
    for (int trial = 0; trial < 2000; ++trial) {
      const Vector& y = d.samples[rng() % d.size()].y;
      const Vector& z1 = d.samples[rng() % d.size()].z;
      const Vector& z2 = d.samples[rng() % d.size()].z;
      const Vector& z3 = d.samples[rng() % d.size()].z;
      CHECK(decision_quality_disparity(d.task, z1, z3, y, y) <=
            decision_quality_disparity(d.task, z1, z2, y, y) +
                decision_quality_disparity(d.task, z2, z3, y, y) + 1e-9);
    }
  }
}

TEST_CASE("pairwise cost matrix") {
  const auto d = datagen::gen_topk(0.2, 5, 2, 1, 1);
  for (CostMode mode : {CostMode::as_written, CostMode::symmetrized}) {
    const auto c = pairwise_cost_matrix(d, d, GroundCostWeights{}, mode);
    CHECK(c(0, 0) == 0.0);
    CHECK(c(1, 1) == 0.0);
  }

  const auto a = datagen::gen_topk(0.0, 5, 3, 1, 2);
  const auto b = datagen::gen_topk(1.0, 5, 4, 1, 3);
  const GroundCostWeights w{0.2, 0.5, 0.3};
  const auto c = pairwise_cost_matrix(a, b, w, CostMode::as_written);
  REQUIRE(c.rows() == 3);
  REQUIRE(c.cols() == 4);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const Sample& s = a.samples[i];
      const Sample& t = b.samples[j];
      const double expect = w.alpha_x * euclidean(s.x, t.x) + w.alpha_y * euclidean(s.y, t.y) +
                            w.alpha_w * std::abs(tasks::objective(a.task, s.z, t.y) -
                                                 tasks::objective(a.task, t.z, t.y));
      CHECK(c(i, j) == doctest::Approx(expect).epsilon(1e-14));
    }
  }

  const auto one_a = datagen::gen_topk(0.0, 5, 1, 1, 4);
  const auto one_b = datagen::gen_topk(0.5, 5, 1, 1, 5);
  CHECK(pairwise_cost_matrix(one_a, one_b, w, CostMode::as_written)(0, 0) ==
        pto_ground_cost(one_a.samples[0], one_b.samples[0], w, one_a.task, CostMode::as_written).total);
  CHECK_THROWS(pairwise_cost_matrix(a, datagen::gen_topk(0.0, 6, 3, 1, 2), w, CostMode::as_written));
}

TEST_CASE("parallel cost matrices equal the serial reference bitwise") {
  for (const PtODataset& d : family_pools()) {
    const PtODataset& other = d;
    for (CostMode mode : {CostMode::as_written, CostMode::symmetrized}) {
      const auto p = component_matrices(d, other, mode);
      const auto s = component_matrices_serial(d, other, mode);
      CHECK(std::equal(p.feature.data().begin(), p.feature.data().end(), s.feature.data().begin()));
      CHECK(std::equal(p.label.data().begin(), p.label.data().end(), s.label.data().begin()));
      CHECK(std::equal(p.decision.data().begin(), p.decision.data().end(), s.decision.data().begin()));
    }
  }
}

TEST_CASE("decision-aware distance") {
  const auto a = datagen::gen_topk(0.0, 5, 4, 1, 1);
  const auto b = datagen::gen_topk(0.9, 5, 4, 1, 2);
  const GroundCostWeights w{0.25, 0.25, 0.5};

  CHECK(decision_aware_distance(a, a, w, SolverSpec::exact(), CostMode::as_written).distance == 0.0);

  const auto one_a = datagen::gen_topk(0.0, 5, 1, 1, 4);
  const auto one_b = datagen::gen_topk(0.5, 5, 1, 1, 5);
  CHECK(decision_aware_distance(one_a, one_b, w, SolverSpec::exact(), CostMode::as_written).distance ==
        pto_ground_cost(one_a.samples[0], one_b.samples[0], w, one_a.task, CostMode::as_written).total);

  for (CostMode mode : {CostMode::as_written, CostMode::symmetrized}) {
    const auto c = pairwise_cost_matrix(a, b, w, mode);
    CHECK(decision_aware_distance(a, b, w, SolverSpec::exact(), mode).distance ==
          doctest::Approx(oracle::brute_force_assignment(c)).epsilon(1e-12));
  }

  const double ab = decision_aware_distance(a, b, w, SolverSpec::exact(), CostMode::symmetrized).distance;
  const double ba = decision_aware_distance(b, a, w, SolverSpec::exact(), CostMode::symmetrized).distance;
  CHECK(ab == doctest::Approx(ba).epsilon(1e-9));

  const auto sk = decision_aware_distance(a, b, w, SolverSpec::sinkhorn(0.05), CostMode::as_written);
  CHECK(sk.distance >= decision_aware_distance(a, b, w, SolverSpec::exact(), CostMode::as_written).distance - 1e-9);
}

TEST_CASE("distance is nonnegative across random dataset pairs") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto pools = family_pools();
  for (int trial = 0; trial < 300; ++trial) {
    const PtODataset& pool = pools[static_cast<std::size_t>(trial) % pools.size()];
    PtODataset a, b;
    a.task = b.task = pool.task;
    a.provenance.generator = b.provenance.generator = "subset";
    for (int k = 0; k < 3; ++k) a.samples.push_back(pool.samples[rng() % pool.size()]);
    for (int k = 0; k < 4; ++k) b.samples.push_back(pool.samples[rng() % pool.size()]);
    const double x = u(rng), y = u(rng) * (1.0 - x);
    const GroundCostWeights w{x, y, 1.0 - x - y};
    CHECK(decision_aware_distance(a, b, w, SolverSpec::exact(), CostMode::as_written).distance >= 0.0);
  }
}
