#pragma once

// Regret-minimizing linear predictors, regret transferability between
// datasets, distance-vs-transferability regressions over ground-cost weights,
// and an empirical check of the target-regret adaptation bound.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptodist/ground_cost.hpp"

namespace ptodist {

/// Linear scorer shared across the elements of an instance (resources, grid
/// cells, demand levels). theta = weights followed by a bias.
///
/// Per-element features and the link from scores to labels depend on the
/// task:
///  - topk:          feature x_n, identity link
///  - shortest_path: one-hot of the cell class decoded from x, link max(s, 0)
///  - inventory:     x placed in the block of demand level i, softmax link
struct PredictiveModel {
  Vector theta;
};

std::size_t model_dim(const TaskDefinition& task, std::size_t x_dim);

/// f(x): predicted label vector.
Vector predict(const TaskDefinition& task, const PredictiveModel& model, std::span<const double> x);

/// Mean over samples of decision_regret(f(x), y).
double mean_regret(const TaskDefinition& task, const PredictiveModel& model, const PtODataset& d);

struct TrainingOptions {
  std::size_t budget = 5000;  // objective evaluations across all restarts
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
  double initial_step = 1.0;
  double min_step = 1e-6;
};

/// Least-squares fit of the pre-link scores to the labels (log-probabilities
/// for inventory). Used as the first starting point of training.
PredictiveModel least_squares_fit(const TaskDefinition& task, const PtODataset& d);

/// Coordinate pattern search on the empirical mean regret. The first restart
/// starts from the least-squares fit, the others from Gaussian perturbations
/// of it. Deterministic given the seed.
PredictiveModel train_regret_min(const TaskDefinition& task, const PtODataset& d,
                                 const TrainingOptions& options);

struct TransferRecord {
  std::string source_id;
  std::string target_id;
  double distance = 0.0;
  GroundCostWeights distance_weights;
  /// Absent when the target-trained model already has (near) zero regret.
  std::optional<double> transferability;
  double regret_source_on_target = 0.0;
  double regret_target_on_target = 0.0;
  double excess_regret = 0.0;  // regret_source_on_target - regret_target_on_target
};

/// Per-source response for distance regressions: the transferabilities when
/// every record has one, otherwise the negated excess regrets (higher is
/// better in both cases). The flag tells which was used.
std::pair<std::vector<double>, bool> transfer_responses(std::span<const TransferRecord> records);

struct TransferOptions {
  TrainingOptions training;
  GroundCostWeights weights;
  SolverSpec solver;
  CostMode mode = CostMode::as_written;
};

/// (regret(theta_T, D_T) - regret(theta_S, D_T)) / regret(theta_T, D_T).
std::optional<double> transferability(double regret_source_on_target,
                                      double regret_target_on_target);

TransferRecord regret_transferability(const PtODataset& source, const PtODataset& target,
                                      const TransferOptions& options,
                                      const std::string& source_id = "source",
                                      const std::string& target_id = "target");

/// As above with a pre-trained target model (shared across many sources).
TransferRecord regret_transferability(const PtODataset& source, const PtODataset& target,
                                      const PredictiveModel& target_model,
                                      const TransferOptions& options,
                                      const std::string& source_id,
                                      const std::string& target_id);

/// Ordinary least squares R^2 of y on x. Needs >= 3 points and nonzero
/// variance in x; constant y gives 0.
double rsquared(std::span<const std::pair<double, double>> points);

/// Pearson correlation of the two coordinates. Needs >= 2 points and nonzero
/// variance in both.
double pearson(std::span<const std::pair<double, double>> points);

/// (d_Y(y, y'), |g(z; y) - g(z'; y')|) for random sample pairs drawn across
/// the pooled datasets, each sample scored under its own label.
std::vector<std::pair<double, double>> label_decision_pairs(std::span<const PtODataset> pool,
                                                            std::size_t pairs, std::uint64_t seed);

/// Barycentric grid on the 2-simplex: (r + 1)(r + 2) / 2 weights, ordered by
/// alpha_x, then alpha_y.
std::vector<GroundCostWeights> simplex_grid(std::size_t resolution);

struct SweepRow {
  GroundCostWeights weights;
  std::optional<double> r2;        // absent when every source is at the same distance
  std::vector<double> distances;  // one per source
};

/// For every grid weight, distances from each source to the target and the R^2
/// of transferability on distance. OpenMP-parallel over grid points.
std::vector<SweepRow> weight_sweep(std::span<const PtODataset> sources, const PtODataset& target,
                                   std::span<const double> transferabilities,
                                   std::size_t resolution, const SolverSpec& solver,
                                   CostMode mode);
std::vector<SweepRow> weight_sweep_serial(std::span<const PtODataset> sources,
                                          const PtODataset& target,
                                          std::span<const double> transferabilities,
                                          std::size_t resolution, const SolverSpec& solver,
                                          CostMode mode);

/// Plan mass on pairs with |f~(x1) - f~(x2)| > lambda * d_X(x1, x2).
double estimate_phi(const TaskDefinition& task, const PredictiveModel& f_tilde,
                    const ot::TransportPlan& plan, const PtODataset& d_a, const PtODataset& d_b,
                    double lambda);

struct BoundReport {
  double lambda = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  GroundCostWeights weights;
  double lhs = 0.0;                 // target regret of f
  double joint_regret_source = 0.0; // regret of f~ on the source
  double joint_regret_target = 0.0; // regret of f~ on the target
  double lipschitz_term = 0.0;      // k1 * L * phi(lambda)
  double ot_term = 0.0;             // d_OT / alpha_w
  double phi = 0.0;
  double lipschitz_range = 0.0;     // L, max |f~(x1) - f~(x2)| over coupled pairs
  double distance = 0.0;            // d_OT(P_T^f, P_S^*)
  bool holds = false;

  // Variant with L = 2 l K from a user-supplied Lipschitz constant l of f~
  // and feature radius K.
  std::optional<double> strict_lipschitz_term;
  std::optional<bool> holds_strict;

  double rhs() const { return joint_regret_source + joint_regret_target + lipschitz_term + ot_term; }
};

struct StrictLipschitz {
  double lipschitz = 0.0;  // l
  double radius = 0.0;     // K
};

/// Lifts the target to (x, y, w*(f(x))) and the source to (x, y, w*(y)),
/// weights the ground cost with alpha_w = 1 / (lambda k1 + k2 + 1),
/// alpha_x = lambda k1 alpha_w, alpha_y = k2 alpha_w, and assembles the bound
/// terms from the optimal coupling.
BoundReport evaluate_bound(const TaskDefinition& task, const PredictiveModel& f,
                           const PredictiveModel& f_tilde, const PtODataset& source,
                           const PtODataset& target, double lambda, double k1, double k2,
                           std::optional<StrictLipschitz> strict = std::nullopt);

/// k1, k2 from the Lipschitz probe over the labels of both datasets and the
/// predictions of the given models, times the safety factor. Each constant is
/// at least the combined ratio so the assumption holds on every probed pair.
std::pair<double, double> empirical_lipschitz(const TaskDefinition& task,
                                              std::span<const PredictiveModel> models,
                                              const PtODataset& source, const PtODataset& target,
                                              std::size_t trials, std::uint64_t seed,
                                              double safety = 1.5);

}  // namespace ptodist
