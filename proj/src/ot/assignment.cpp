#include <limits>
#include <stdexcept>

#include "ptodist/ot.hpp"

namespace ptodist::ot {

// Shortest augmenting path Hungarian method, O(n^3). Row potentials u, column
// potentials v; column 0 is a sentinel.
std::vector<std::size_t> min_cost_assignment(const CostMatrix& cost) {
  if (cost.rows() != cost.cols() || cost.rows() == 0) {
    throw std::invalid_argument("assignment needs a nonempty square cost, got " + cost.shape());
  }
  const std::size_t n = cost.rows();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);

  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::vector<double> min_slack(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col0] = 1;
      const std::size_t i0 = match[col0];
      double delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double slack = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = col0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          col1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

ExactResult solve_assignment(const CostMatrix& cost) {
  const auto row_to_col = min_cost_assignment(cost);
  const std::size_t n = cost.rows();
  const double mass = 1.0 / static_cast<double>(n);
  ExactResult r;
  r.plan.matrix = CostMatrix(n, n, 0.0);
  r.plan.row_marginal.assign(n, mass);
  r.plan.col_marginal.assign(n, mass);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r.plan.matrix(i, row_to_col[i]) = mass;
    total += cost(i, row_to_col[i]);
  }
  r.cost = total / static_cast<double>(n);
  return r;
}

}  // namespace ptodist::ot
