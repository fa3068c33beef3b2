#include "ptodist/ot.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ptodist/error.hpp"

namespace ptodist::ot {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("cost matrix: dimensions must be >= 1");
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("cost matrix: dimensions must be >= 1");
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("cost matrix: " + std::to_string(data_.size()) +
                                " entries do not fill shape " + shape());
  }
}

double CostMatrix::max_entry() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, v);
  return m;
}

CostMatrix CostMatrix::transposed() const {
  CostMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::string CostMatrix::shape() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

void CostMatrix::validate() const {
  if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("cost matrix: empty shape " + shape());
  for (std::size_t k = 0; k < data_.size(); ++k) {
    if (!std::isfinite(data_[k]) || data_[k] < 0.0) {
      throw std::invalid_argument("cost matrix: entry (" + std::to_string(k / cols_) + "," +
                                  std::to_string(k % cols_) + ") = " +
                                  std::to_string(data_[k]) + " is not a finite nonnegative cost");
    }
  }
}

Marginal::Marginal(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("marginal: needs at least one weight");
  double sum = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("marginal: negative or non-finite weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument("marginal: weights sum to " + std::to_string(sum) + ", not 1");
  }
}

Marginal Marginal::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("marginal: needs at least one weight");
  return Marginal(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

bool Marginal::is_uniform() const {
  return std::all_of(weights_.begin(), weights_.end(),
                     [&](double w) { return w == weights_.front(); });
}

double TransportPlan::max_marginal_violation() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < matrix.cols(); ++j) s += matrix(i, j);
    worst = std::max(worst, std::abs(s - row_marginal[i]));
  }
  for (std::size_t j = 0; j < matrix.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < matrix.rows(); ++i) s += matrix(i, j);
    worst = std::max(worst, std::abs(s - col_marginal[j]));
  }
  return worst;
}

void TransportPlan::validate() const {
  if (row_marginal.size() != matrix.rows() || col_marginal.size() != matrix.cols()) {
    throw std::invalid_argument("transport plan: marginal lengths do not match " + matrix.shape());
  }
  for (double v : matrix.data()) {
    if (!(v >= 0.0)) throw std::invalid_argument("transport plan: negative mass");
  }
  if (max_marginal_violation() > kMarginalTolerance) {
    throw std::invalid_argument("transport plan: marginal violation " +
                                std::to_string(max_marginal_violation()));
  }
}

double transport_cost(const TransportPlan& plan, const CostMatrix& cost) {
  if (plan.matrix.rows() != cost.rows() || plan.matrix.cols() != cost.cols()) {
    throw std::invalid_argument("transport_cost: plan shape " + plan.matrix.shape() +
                                " does not match cost shape " + cost.shape());
  }
  const auto p = plan.matrix.data();
  const auto c = cost.data();
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) total += p[k] * c[k];
  return total;
}

namespace {

void check_problem(const CostMatrix& cost, const Marginal& a, const Marginal& b) {
  cost.validate();
  if (a.size() != cost.rows() || b.size() != cost.cols()) {
    throw std::invalid_argument("marginal lengths " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()) + " do not match cost shape " +
                                cost.shape());
  }
  const double sa = std::accumulate(a.weights().begin(), a.weights().end(), 0.0);
  const double sb = std::accumulate(b.weights().begin(), b.weights().end(), 0.0);
  if (std::abs(sa - sb) > Marginal::kSumTolerance) {
    throw std::invalid_argument("infeasible marginals: total masses differ by " +
                                std::to_string(std::abs(sa - sb)));
  }
}

}  // namespace

ExactResult solve_exact(const CostMatrix& cost, const Marginal& a, const Marginal& b,
                        ExactMethod method) {
  check_problem(cost, a, b);
  if (cost.rows() == 1 && cost.cols() == 1) {
    ExactResult r;
    r.plan.matrix = CostMatrix(1, 1, 1.0);
    r.plan.row_marginal = {1.0};
    r.plan.col_marginal = {1.0};
    r.cost = cost(0, 0);
    return r;
  }
  const bool square_uniform =
      cost.rows() == cost.cols() && a.is_uniform() && b.is_uniform();
  switch (method) {
    case ExactMethod::assignment:
      if (!square_uniform) {
        throw std::invalid_argument("assignment solver needs uniform marginals of equal size");
      }
      return solve_assignment(cost);
    case ExactMethod::network_simplex:
      return solve_network_simplex(cost, a, b);
    case ExactMethod::automatic:
      break;
  }
  return square_uniform ? solve_assignment(cost) : solve_network_simplex(cost, a, b);
}

}  // namespace ptodist::ot
