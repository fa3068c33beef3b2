#include "ptodist/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ptodist {

std::string to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::topk: return "topk";
    case TaskKind::shortest_path: return "shortest_path";
    case TaskKind::inventory: return "inventory";
  }
  return "unknown";
}

TaskKind parse_task_kind(const std::string& name) {
  if (name == "topk") return TaskKind::topk;
  if (name == "shortest_path") return TaskKind::shortest_path;
  if (name == "inventory") return TaskKind::inventory;
  throw std::invalid_argument("unknown task kind '" + name + "'");
}

void InventoryParams::validate() const {
  for (double c : {c0, q0, cb, qb, ch, qh}) {
    if (!std::isfinite(c) || c < 0.0) {
      throw std::invalid_argument("inventory: cost coefficients must be finite and >= 0");
    }
  }
  if (!(q0 > 0.0 || (qb > 0.0 && qh > 0.0))) {
    throw std::invalid_argument("inventory: need q0 > 0 or both qb, qh > 0 for a unique order");
  }
}

TaskDefinition TaskDefinition::topk(std::size_t n_resources, std::size_t k) {
  if (k < 1 || k > n_resources) {
    throw std::invalid_argument("topk: need 1 <= K <= N, got K=" + std::to_string(k) +
                                " N=" + std::to_string(n_resources));
  }
  TaskDefinition t;
  t.params_ = TopKParams{n_resources, k};
  return t;
}

TaskDefinition TaskDefinition::shortest_path(const GridParams& params) {
  if (params.side < 2) throw std::invalid_argument("shortest_path: grid side must be >= 2");
  if (params.n_classes < 1) throw std::invalid_argument("shortest_path: need >= 1 class");
  if (!std::isfinite(params.length_penalty) || params.length_penalty < 0.0) {
    throw std::invalid_argument("shortest_path: length penalty must be >= 0");
  }
  TaskDefinition t;
  t.params_ = params;
  return t;
}

TaskDefinition TaskDefinition::inventory(const InventoryParams& costs, Vector demands) {
  costs.validate();
  if (demands.empty()) throw std::invalid_argument("inventory: demand grid is empty");
  for (std::size_t i = 0; i < demands.size(); ++i) {
    if (!std::isfinite(demands[i]) || demands[i] < 0.0) {
      throw std::invalid_argument("inventory: demand values must be finite and >= 0");
    }
    if (i > 0 && !(demands[i] > demands[i - 1])) {
      throw std::invalid_argument("inventory: demand values must be strictly increasing");
    }
  }
  TaskDefinition t;
  t.params_ = InventoryTask{costs, std::move(demands)};
  return t;
}

TaskKind TaskDefinition::kind() const {
  return static_cast<TaskKind>(params_.index());
}

std::size_t TaskDefinition::label_dim() const {
  switch (kind()) {
    case TaskKind::topk: return topk_params().n_resources;
    case TaskKind::shortest_path: return grid_params().side * grid_params().side;
    case TaskKind::inventory: return inventory_params().demands.size();
  }
  return 0;
}

std::size_t TaskDefinition::decision_dim() const {
  return kind() == TaskKind::inventory ? 1 : label_dim();
}

bool TaskDefinition::operator==(const TaskDefinition& other) const {
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case TaskKind::topk: {
      const auto &a = topk_params(), &b = other.topk_params();
      return a.n_resources == b.n_resources && a.k == b.k;
    }
    case TaskKind::shortest_path: {
      const auto &a = grid_params(), &b = other.grid_params();
      return a.side == b.side && a.neighborhood == b.neighborhood &&
             a.count_start == b.count_start && a.length_penalty == b.length_penalty &&
             a.n_classes == b.n_classes;
    }
    case TaskKind::inventory: {
      const auto &a = inventory_params(), &b = other.inventory_params();
      const auto &p = a.costs, &q = b.costs;
      return a.demands == b.demands && p.c0 == q.c0 && p.q0 == q.q0 && p.cb == q.cb &&
             p.qb == q.qb && p.ch == q.ch && p.qh == q.qh;
    }
  }
  return false;
}

namespace tasks {

namespace {

bool is_binary(std::span<const double> z) {
  return std::all_of(z.begin(), z.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

bool grid_mask_connected(const GridParams& params, std::span<const double> z) {
  const std::size_t cells = params.side * params.side;
  if (z[0] != 1.0 || z[cells - 1] != 1.0) return false;
  std::vector<char> seen(cells, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    for (std::size_t nb : grid_neighbors(params.side, params.neighborhood, c)) {
      if (z[nb] == 1.0 && !seen[nb]) {
        seen[nb] = 1;
        stack.push_back(nb);
      }
    }
  }
  return seen[cells - 1] != 0;
}

}  // namespace

bool validate_decision(const TaskDefinition& task, std::span<const double> z) {
  if (z.size() != task.decision_dim()) return false;
  switch (task.kind()) {
    case TaskKind::topk: {
      if (!is_binary(z)) return false;
      const double ones = std::accumulate(z.begin(), z.end(), 0.0);
      return ones == static_cast<double>(task.topk_params().k);
    }
    case TaskKind::shortest_path:
      return is_binary(z) && grid_mask_connected(task.grid_params(), z);
    case TaskKind::inventory:
      return std::isfinite(z[0]) && z[0] >= 0.0;
  }
  return false;
}

void validate_labels(const TaskDefinition& task, std::span<const double> y) {
  if (y.size() != task.label_dim()) {
    throw std::invalid_argument("labels have length " + std::to_string(y.size()) + ", task " +
                                to_string(task.kind()) + " expects " +
                                std::to_string(task.label_dim()));
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument("labels must be finite");
  }
  if (task.kind() == TaskKind::shortest_path) {
    for (double v : y) {
      if (v < 0.0) throw std::invalid_argument("shortest_path: cell costs must be >= 0");
    }
  } else if (task.kind() == TaskKind::inventory) {
    double sum = 0.0;
    for (double v : y) {
      if (v < 0.0) throw std::invalid_argument("inventory: demand probabilities must be >= 0");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw std::invalid_argument("inventory: demand probabilities must sum to 1");
    }
  }
}

double objective_unchecked(const TaskDefinition& task, std::span<const double> z,
                           std::span<const double> y) {
  switch (task.kind()) {
    case TaskKind::topk: {
      double s = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) s += z[i] * y[i];
      return s;
    }
    case TaskKind::shortest_path:
      return -path_cost(task.grid_params(), z, y);
    case TaskKind::inventory:
      return -expected_stock_cost(task.inventory_params(), y, z[0]);
  }
  return 0.0;
}

double objective(const TaskDefinition& task, std::span<const double> z,
                 std::span<const double> y) {
  if (!validate_decision(task, z)) {
    throw std::invalid_argument("objective: decision is infeasible for task " +
                                to_string(task.kind()));
  }
  validate_labels(task, y);
  return objective_unchecked(task, z, y);
}

std::vector<std::size_t> topk_indices(std::span<const double> y, std::size_t k) {
  std::vector<std::size_t> idx(y.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      return y[a] > y[b] || (y[a] == y[b] && a < b);
                    });
  idx.resize(k);
  return idx;
}

Vector oracle(const TaskDefinition& task, std::span<const double> y) {
  validate_labels(task, y);
  switch (task.kind()) {
    case TaskKind::topk: {
      Vector z(y.size(), 0.0);
      for (std::size_t i : topk_indices(y, task.topk_params().k)) z[i] = 1.0;
      return z;
    }
    case TaskKind::shortest_path: {
      Vector z(y.size(), 0.0);
      for (std::size_t c : shortest_path_cells(task.grid_params(), y)) z[c] = 1.0;
      return z;
    }
    case TaskKind::inventory:
      return {optimal_order(task.inventory_params(), y)};
  }
  return {};
}

double decision_quality(const TaskDefinition& task, std::span<const double> y_hat,
                        std::span<const double> y) {
  validate_labels(task, y);
  const Vector z = oracle(task, y_hat);
  return objective_unchecked(task, z, y);
}

double decision_regret(const TaskDefinition& task, std::span<const double> y_hat,
                       std::span<const double> y) {
  return std::abs(decision_quality(task, y, y) - decision_quality(task, y_hat, y));
}

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

LipschitzEstimate lipschitz_probe(const TaskDefinition& task, std::span<const Vector> pool,
                                  std::size_t trials, std::uint64_t seed) {
  if (pool.size() < 2) throw std::invalid_argument("lipschitz probe: pool needs >= 2 vectors");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  // Oracle decisions are reused; every pool vector is solved once.
  std::vector<Vector> decisions;
  decisions.reserve(pool.size());
  for (const auto& v : pool) decisions.push_back(oracle(task, v));
  auto q = [&](std::size_t pred, std::size_t truth) {
    return objective_unchecked(task, decisions[pred], pool[truth]);
  };

  LipschitzEstimate est;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t y = pick(rng), ys = pick(rng), z = pick(rng), zs = pick(rng);
    const double dy = distance(pool[y], pool[z]);
    const double ds = distance(pool[ys], pool[zs]);
    if (dy > 0.0) est.k1 = std::max(est.k1, std::abs(q(y, ys) - q(z, ys)) / dy);
    if (ds > 0.0) est.k2 = std::max(est.k2, std::abs(q(y, ys) - q(y, zs)) / ds);
    if (dy + ds > 0.0) {
      est.combined = std::max(est.combined, std::abs(q(y, ys) - q(z, zs)) / (dy + ds));
    }
  }
  return est;
}

}  // namespace tasks
}  // namespace ptodist
