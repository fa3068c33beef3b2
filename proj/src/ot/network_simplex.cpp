#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ptodist/error.hpp"
#include "ptodist/ot.hpp"

namespace ptodist::ot {

namespace {

struct BasicCell {
  std::size_t row;
  std::size_t col;
  double flow;
};

// Basis of the transportation problem: n + m - 1 cells forming a spanning tree
// over the n row nodes and m column nodes (column node id = n + col).
class TransportBasis {
 public:
  TransportBasis(const CostMatrix& cost, std::span<const double> supply,
                 std::span<const double> demand)
      : cost_(cost), n_(cost.rows()), m_(cost.cols()), basic_(n_ * m_, 0) {
    northwest_corner(supply, demand);
  }

  std::size_t run() {
    const double scale = std::max(1.0, cost_.max_entry());
    const double rc_tol = 1e-12 * scale;
    const std::size_t bland_after = 50 * (n_ + m_);
    const std::size_t pivot_cap = 100 * n_ * m_ * (n_ + m_) + 1000;
    std::size_t degenerate_run = 0;
    std::size_t pivots = 0;
    for (;;) {
      build_adjacency();
      compute_potentials();
      const bool bland = degenerate_run > bland_after;
      std::size_t enter = kNone;
      double best = -rc_tol;
      for (std::size_t i = 0; i < n_ && !(bland && enter != kNone); ++i) {
        for (std::size_t j = 0; j < m_; ++j) {
          if (basic_[i * m_ + j]) continue;
          const double rc = cost_(i, j) - u_[i] - v_[j];
          if (rc < best) {
            best = rc;
            enter = i * m_ + j;
            if (bland) break;
          }
        }
      }
      if (enter == kNone) return pivots;
      if (++pivots > pivot_cap) throw NumericalError("network simplex: pivot limit exceeded");
      const double step = pivot(enter / m_, enter % m_);
      degenerate_run = step > 0.0 ? 0 : degenerate_run + 1;
    }
  }

  TransportPlan plan(std::span<const double> a, std::span<const double> b) const {
    TransportPlan p;
    p.matrix = CostMatrix(n_, m_, 0.0);
    for (const auto& c : cells_) p.matrix(c.row, c.col) = std::max(0.0, c.flow);
    p.row_marginal.assign(a.begin(), a.end());
    p.col_marginal.assign(b.begin(), b.end());
    return p;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  void northwest_corner(std::span<const double> supply, std::span<const double> demand) {
    std::vector<double> s(supply.begin(), supply.end());
    std::vector<double> d(demand.begin(), demand.end());
    std::size_t i = 0, j = 0;
    const std::size_t count = n_ + m_ - 1;
    for (std::size_t k = 0; k < count; ++k) {
      const double x = std::min(s[i], d[j]);
      s[i] -= x;
      d[j] -= x;
      add_cell(i, j, x);
      if (k + 1 == count) break;
      const bool row_done = s[i] <= d[j];
      if (row_done && i + 1 < n_) {
        ++i;
      } else if (j + 1 < m_) {
        ++j;
      } else {
        ++i;
      }
    }
  }

  void add_cell(std::size_t i, std::size_t j, double flow) {
    cells_.push_back({i, j, flow});
    basic_[i * m_ + j] = 1;
  }

  void build_adjacency() {
    adjacency_.assign(n_ + m_, {});
    for (std::size_t e = 0; e < cells_.size(); ++e) {
      adjacency_[cells_[e].row].push_back(e);
      adjacency_[n_ + cells_[e].col].push_back(e);
    }
  }

  std::size_t other_end(std::size_t edge, std::size_t node) const {
    const auto& c = cells_[edge];
    return node < n_ ? n_ + c.col : c.row;
  }

  void compute_potentials() {
    u_.assign(n_, 0.0);
    v_.assign(m_, 0.0);
    std::vector<char> seen(n_ + m_, 0);
    std::vector<std::size_t> queue{0};
    seen[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t node = queue[head];
      for (std::size_t e : adjacency_[node]) {
        const std::size_t next = other_end(e, node);
        if (seen[next]) continue;
        seen[next] = 1;
        const auto& c = cells_[e];
        if (node < n_) {
          v_[c.col] = cost_(c.row, c.col) - u_[c.row];
        } else {
          u_[c.row] = cost_(c.row, c.col) - v_[c.col];
        }
        queue.push_back(next);
      }
    }
  }

  // Adds cell (i, j) to the basis, pushes flow around the cycle it closes and
  // drops the blocking cell. Returns the amount of flow moved.
  double pivot(std::size_t i, std::size_t j) {
    // Tree path from column node j to row node i.
    std::vector<std::size_t> parent_edge(n_ + m_, kNone);
    std::vector<char> seen(n_ + m_, 0);
    std::vector<std::size_t> queue{n_ + j};
    seen[n_ + j] = 1;
    for (std::size_t head = 0; head < queue.size() && !seen[i]; ++head) {
      const std::size_t node = queue[head];
      for (std::size_t e : adjacency_[node]) {
        const std::size_t next = other_end(e, node);
        if (seen[next]) continue;
        seen[next] = 1;
        parent_edge[next] = e;
        queue.push_back(next);
      }
    }
    // Edges ordered from row i back to column j; odd positions lose flow.
    std::vector<std::size_t> path;
    for (std::size_t node = i; node != n_ + j;) {
      const std::size_t e = parent_edge[node];
      path.push_back(e);
      node = other_end(e, node);
    }
    std::size_t leaving = kNone;
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const auto& c = cells_[path[k]];
      const std::size_t id = c.row * m_ + c.col;
      if (c.flow < theta ||
          (c.flow == theta && id < cells_[leaving].row * m_ + cells_[leaving].col)) {
        theta = c.flow;
        leaving = path[k];
      }
    }
    theta = std::max(theta, 0.0);
    for (std::size_t k = 0; k < path.size(); ++k) {
      cells_[path[k]].flow += (k % 2 == 0) ? -theta : theta;
    }
    const auto& out = cells_[leaving];
    basic_[out.row * m_ + out.col] = 0;
    cells_[leaving] = {i, j, theta};
    basic_[i * m_ + j] = 1;
    return theta;
  }

  const CostMatrix& cost_;
  std::size_t n_;
  std::size_t m_;
  std::vector<BasicCell> cells_;
  std::vector<char> basic_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<double> u_;
  std::vector<double> v_;
};

}  // namespace

ExactResult solve_network_simplex(const CostMatrix& cost, const Marginal& a,
                                  const Marginal& b) {
  cost.validate();
  if (a.size() != cost.rows() || b.size() != cost.cols()) {
    throw std::invalid_argument("network simplex: marginals do not match cost shape " +
                                cost.shape());
  }
  TransportBasis basis(cost, a.weights(), b.weights());
  ExactResult r;
  r.pivots = basis.run();
  r.plan = basis.plan(a.weights(), b.weights());
  r.cost = transport_cost(r.plan, cost);
  return r;
}

}  // namespace ptodist::ot
