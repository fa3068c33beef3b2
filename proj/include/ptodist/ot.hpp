#pragma once

// Discrete optimal transport between two finite weighted point sets whose
// pairwise ground costs are given as a dense matrix.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ptodist::ot {

/// Dense row-major matrix of nonnegative, finite transport costs.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double max_entry() const;
  CostMatrix transposed() const;
  std::string shape() const;

  /// Throws std::invalid_argument if any entry is negative or not finite.
  void validate() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Probability weights over the points of one side of a transport problem.
class Marginal {
 public:
  static constexpr double kSumTolerance = 1e-9;

  /// Validates length >= 1, nonnegative weights, |sum - 1| <= 1e-9.
  explicit Marginal(std::vector<double> weights);
  static Marginal uniform(std::size_t n);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }
  bool is_uniform() const;

 private:
  std::vector<double> weights_;
};

/// Coupling between a row and a column marginal.
struct TransportPlan {
  static constexpr double kMarginalTolerance = 1e-6;

  CostMatrix matrix;  // mass, reusing the dense layout
  std::vector<double> row_marginal;
  std::vector<double> col_marginal;

  double max_marginal_violation() const;
  /// Throws std::invalid_argument if a marginal is off by more than 1e-6 or
  /// an entry is negative.
  void validate() const;
};

/// Sum over cells of plan mass times cost.
double transport_cost(const TransportPlan& plan, const CostMatrix& cost);

struct ExactResult {
  TransportPlan plan;
  double cost = 0.0;
  std::size_t pivots = 0;
};

enum class ExactMethod {
  automatic,       // assignment for uniform equal-size marginals, else simplex
  network_simplex,
  assignment,
};

/// Minimum-cost coupling. Deterministic; optimal up to 1e-9.
ExactResult solve_exact(const CostMatrix& cost, const Marginal& a, const Marginal& b,
                        ExactMethod method = ExactMethod::automatic);

/// Transportation simplex on the bipartite graph (spanning-tree bases,
/// MODI potentials, Dantzig pricing with a Bland fallback against cycling).
ExactResult solve_network_simplex(const CostMatrix& cost, const Marginal& a,
                                  const Marginal& b);

/// Hungarian algorithm with potentials. Requires a square cost matrix; the
/// returned plan puts mass 1/n on each assigned cell.
ExactResult solve_assignment(const CostMatrix& cost);

/// Minimum-cost perfect matching, returned as row -> column.
std::vector<std::size_t> min_cost_assignment(const CostMatrix& cost);

enum class SinkhornDomain { automatic, standard, log };

struct SinkhornOptions {
  double epsilon = 0.01;
  std::size_t max_iter = 100000;
  double tol = 1e-9;
  SinkhornDomain domain = SinkhornDomain::automatic;
};

struct SinkhornResult {
  TransportPlan plan;
  double cost = 0.0;  // <plan, cost>, without the entropy term
  bool converged = false;
  double marginal_violation = 0.0;  // L1 row-sum violation at exit
  std::size_t iterations = 0;
  bool used_log_domain = false;
};

/// Entropically regularized transport by alternating marginal scaling.
/// The automatic domain switches to log-sum-exp updates when epsilon is below
/// 1% of the largest cost or any kernel entry exp(-c/epsilon) underflows.
/// Forcing the standard domain on an underflowing kernel throws
/// NumericalError.
SinkhornResult solve_sinkhorn(const CostMatrix& cost, const Marginal& a, const Marginal& b,
                              const SinkhornOptions& options);

}  // namespace ptodist::ot
