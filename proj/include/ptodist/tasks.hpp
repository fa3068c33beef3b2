#pragma once

// The three downstream optimization problems: Top-K selection, grid shortest
// path and single-product inventory ordering. Every problem is phrased as a
// maximization of g(z; y) over feasible decisions z.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ptodist {

using Vector = std::vector<double>;

enum class TaskKind { topk, shortest_path, inventory };

std::string to_string(TaskKind kind);
TaskKind parse_task_kind(const std::string& name);

struct TopKParams {
  std::size_t n_resources = 25;
  std::size_t k = 1;
};

enum class Neighborhood { four = 4, eight = 8 };

struct GridParams {
  std::size_t side = 12;
  Neighborhood neighborhood = Neighborhood::eight;
  bool count_start = true;      // start cell's cost is part of the path cost
  double length_penalty = 0.0;  // added to every visited cell
  std::size_t n_classes = 5;    // used to decode class maps from features
};

/// Coefficients of the ordering / backorder / holding cost.
struct InventoryParams {
  double c0 = 30.0, q0 = 10.0;
  double cb = 10.0, qb = 2.0;
  double ch = 30.0, qh = 25.0;

  /// Requires nonnegative coefficients and q0 > 0 or (qb > 0 and qh > 0).
  void validate() const;
};

struct InventoryTask {
  InventoryParams costs;
  Vector demands;  // strictly increasing, nonnegative
};

class TaskDefinition {
 public:
  static TaskDefinition topk(std::size_t n_resources, std::size_t k);
  static TaskDefinition shortest_path(const GridParams& params);
  static TaskDefinition inventory(const InventoryParams& costs, Vector demands);

  TaskKind kind() const;
  const TopKParams& topk_params() const { return std::get<TopKParams>(params_); }
  const GridParams& grid_params() const { return std::get<GridParams>(params_); }
  const InventoryTask& inventory_params() const { return std::get<InventoryTask>(params_); }

  std::size_t label_dim() const;
  std::size_t decision_dim() const;

  bool operator==(const TaskDefinition& other) const;

 private:
  std::variant<TopKParams, GridParams, InventoryTask> params_;
};

namespace tasks {

/// True when z is a feasible decision: K-hot mask, connected source-sink cell
/// mask, or a nonnegative scalar order.
bool validate_decision(const TaskDefinition& task, std::span<const double> z);

/// Throws std::invalid_argument if y has the wrong length or values outside
/// the task's label domain.
void validate_labels(const TaskDefinition& task, std::span<const double> y);

/// g(z; y). Throws std::invalid_argument for infeasible z.
double objective(const TaskDefinition& task, std::span<const double> z,
                 std::span<const double> y);
/// g(z; y) without feasibility checks; for hot loops over pre-validated data.
double objective_unchecked(const TaskDefinition& task, std::span<const double> z,
                           std::span<const double> y);

/// argmax_z g(z; y).
Vector oracle(const TaskDefinition& task, std::span<const double> y);

/// q(y_hat, y) = g(w*(y_hat); y).
double decision_quality(const TaskDefinition& task, std::span<const double> y_hat,
                        std::span<const double> y);

/// |q(y, y) - q(y_hat, y)|.
double decision_regret(const TaskDefinition& task, std::span<const double> y_hat,
                       std::span<const double> y);

// Top-K ---------------------------------------------------------------------

/// Indices of the K largest entries, ties resolved by lowest index.
std::vector<std::size_t> topk_indices(std::span<const double> y, std::size_t k);

// Shortest path -------------------------------------------------------------

/// Cell indices (row-major) adjacent to `cell` under the neighborhood.
std::vector<std::size_t> grid_neighbors(std::size_t side, Neighborhood nb, std::size_t cell);

/// Minimum-cost source-to-sink cell sequence; Dijkstra over cell weights.
std::vector<std::size_t> shortest_path_cells(const GridParams& params,
                                             std::span<const double> costs);

/// Path cost of a cell mask (a positive number; g is its negation).
double path_cost(const GridParams& params, std::span<const double> mask,
                 std::span<const double> costs);

// Inventory -----------------------------------------------------------------

/// Per-demand cost of ordering z units when demand turns out to be d.
double fstock(const InventoryParams& p, double d, double z);

/// Sum_i probs_i * fstock(demands_i, z).
double expected_stock_cost(const InventoryTask& task, std::span<const double> probs, double z);

/// Unique minimizer over z >= 0 of the expected stock cost. The expected cost
/// is convex piecewise quadratic with knots at the demand values, so the
/// minimum is at a knot, at 0, or at a clamped stationary point of one piece.
double optimal_order(const InventoryTask& task, std::span<const double> probs);

// Lipschitz probe -----------------------------------------------------------

struct LipschitzEstimate {
  double k1 = 0.0;        // max |q(y,y*) - q(z,y*)| / |y - z|
  double k2 = 0.0;        // max |q(y,y*) - q(y,z*)| / |y* - z*|
  double combined = 0.0;  // max |q(y,y*) - q(z,z*)| / (|y - z| + |y* - z*|)
};

/// Empirical Lipschitz constants of the decision quality over random
/// quadruples drawn from `pool`. A measurement, not a certificate.
LipschitzEstimate lipschitz_probe(const TaskDefinition& task, std::span<const Vector> pool,
                                  std::size_t trials, std::uint64_t seed);

}  // namespace tasks
}  // namespace ptodist
