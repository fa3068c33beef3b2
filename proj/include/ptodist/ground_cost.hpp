#pragma once

// Decision-aware ground cost between feature-label-decision samples and the
// optimal-transport distance between datasets built on it.

#include <span>

#include "ptodist/dataset.hpp"
#include "ptodist/ot.hpp"

namespace ptodist {

/// Convex-combination weights of the feature, label and decision terms.
struct GroundCostWeights {
  double alpha_x = 1.0 / 3.0;
  double alpha_y = 1.0 / 3.0;
  double alpha_w = 1.0 / 3.0;

  /// Throws std::invalid_argument unless all weights are >= 0 and sum to 1
  /// within 1e-12.
  static GroundCostWeights make(double alpha_x, double alpha_y, double alpha_w);
  void validate() const;
};

/// How the decision term evaluates objective values.
///  - as_written:  l_g(z, z'; y', y')  (second sample's label on both sides)
///  - symmetrized: (l_g(z, z'; y, y) + l_g(z, z'; y', y')) / 2
enum class CostMode { as_written, symmetrized };

std::string to_string(CostMode mode);
CostMode parse_cost_mode(const std::string& name);

struct CostBreakdown {
  double feature_term = 0.0;
  double label_term = 0.0;
  double decision_term = 0.0;
  double total = 0.0;
};

double euclidean(std::span<const double> a, std::span<const double> b);

/// |g(z; y) - g(z'; y')|. Throws std::invalid_argument naming the infeasible
/// argument ("z" or "z_prime").
double decision_quality_disparity(const TaskDefinition& task, std::span<const double> z,
                                  std::span<const double> z_prime, std::span<const double> y,
                                  std::span<const double> y_prime);

CostBreakdown pto_ground_cost(const Sample& s, const Sample& s_prime, const GroundCostWeights& w,
                              const TaskDefinition& task, CostMode mode);

/// Unweighted feature, label and decision cost matrices between two datasets.
/// Any weighting is a linear combination of the three.
struct ComponentMatrices {
  ot::CostMatrix feature;
  ot::CostMatrix label;
  ot::CostMatrix decision;

  ot::CostMatrix combine(const GroundCostWeights& w) const;
};

/// OpenMP-parallel over rows. Entries are bitwise identical to the serial
/// reference below.
ComponentMatrices component_matrices(const PtODataset& d, const PtODataset& d_prime,
                                     CostMode mode);
ComponentMatrices component_matrices_serial(const PtODataset& d, const PtODataset& d_prime,
                                            CostMode mode);

/// Entry (i, j) = pto_ground_cost(d[i], d_prime[j]).total.
ot::CostMatrix pairwise_cost_matrix(const PtODataset& d, const PtODataset& d_prime,
                                    const GroundCostWeights& w, CostMode mode);
ot::CostMatrix pairwise_cost_matrix_serial(const PtODataset& d, const PtODataset& d_prime,
                                           const GroundCostWeights& w, CostMode mode);

struct SolverSpec {
  enum class Kind { exact, sinkhorn } kind = Kind::exact;
  double epsilon = 0.01;
  std::size_t max_iter = 100000;
  double tol = 1e-9;

  static SolverSpec exact() { return {}; }
  static SolverSpec sinkhorn(double epsilon) {
    SolverSpec s;
    s.kind = Kind::sinkhorn;
    s.epsilon = epsilon;
    return s;
  }
};

struct DistanceResult {
  double distance = 0.0;
  ot::TransportPlan plan;
  bool converged = true;
};

/// Transport cost between the uniform empirical measures of the datasets.
DistanceResult solve_distance(const ot::CostMatrix& cost, const SolverSpec& solver);

/// OT distance with the decision-aware ground cost.
DistanceResult decision_aware_distance(const PtODataset& d, const PtODataset& d_prime,
                                       const GroundCostWeights& w, const SolverSpec& solver,
                                       CostMode mode);

}  // namespace ptodist
