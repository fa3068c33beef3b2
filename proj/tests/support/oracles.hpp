#pragma once

// Independent reference solutions used only by the tests. None of these call
// into the library's solvers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "ptodist/ot.hpp"
#include "ptodist/tasks.hpp"

namespace oracle {

using ptodist::Vector;

/// Minimum over all permutations of the mean matched cost.
inline double brute_force_assignment(const ptodist::ot::CostMatrix& c) {
  const std::size_t n = c.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += c(i, perm[i]);
    best = std::min(best, s / static_cast<double>(n));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// A random coupling of a and b: random cell order, greedy fill.
inline ptodist::ot::TransportPlan random_coupling(std::span<const double> a, std::span<const double> b,
                                                  std::mt19937_64& rng) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::size_t> cells(n * m);
  std::iota(cells.begin(), cells.end(), 0);
  std::shuffle(cells.begin(), cells.end(), rng);
  Vector ra(a.begin(), a.end()), rb(b.begin(), b.end());
  ptodist::ot::TransportPlan p;
  p.matrix = ptodist::ot::CostMatrix(n, m);
  for (std::size_t c : cells) {
    const std::size_t i = c / m, j = c % m;
    const double t = std::min(ra[i], rb[j]);
    p.matrix(i, j) += t;
    ra[i] -= t;
    rb[j] -= t;
  }
  p.row_marginal.assign(a.begin(), a.end());
  p.col_marginal.assign(b.begin(), b.end());
  return p;
}

/// Cheapest simple source-to-sink path by depth-first enumeration of every
/// simple path (branch and bound on the running cost). Cost counts every
/// visited cell.
inline double enumerate_paths(std::size_t side, bool eight, std::span<const double> cost) {
  const std::size_t cells = side * side;
  std::vector<char> seen(cells, 0);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, double)> dfs = [&](std::size_t c, double acc) {
    if (acc >= best) return;
    if (c == cells - 1) {
      best = acc;
      return;
    }
    const long r = static_cast<long>(c / side), q = static_cast<long>(c % side);
    for (long dr = -1; dr <= 1; ++dr) {
      for (long dq = -1; dq <= 1; ++dq) {
        if (dr == 0 && dq == 0) continue;
        if (!eight && dr != 0 && dq != 0) continue;
        const long nr = r + dr, nq = q + dq;
        if (nr < 0 || nq < 0 || nr >= static_cast<long>(side) || nq >= static_cast<long>(side)) continue;
        const std::size_t n = static_cast<std::size_t>(nr) * side + static_cast<std::size_t>(nq);
        if (seen[n]) continue;
        seen[n] = 1;
        dfs(n, acc + cost[n]);
        seen[n] = 0;
      }
    }
  };
  seen[0] = 1;
  dfs(0, cost[0]);
  return best;
}

inline double expected_fstock(const ptodist::InventoryParams& p, std::span<const double> demands,
                              std::span<const double> probs, double z) {
  double s = 0.0;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const double d = demands[i];
    const double under = std::max(d - z, 0.0), over = std::max(z - d, 0.0);
    s += probs[i] * (p.c0 * z + 0.5 * p.q0 * z * z + p.cb * under + 0.5 * p.qb * under * under +
                     p.ch * over + 0.5 * p.qh * over * over);
  }
  return s;
}

/// Grid search over [0, hi] at the given resolution.
inline double grid_search_order(const ptodist::InventoryParams& p, std::span<const double> demands,
                                std::span<const double> probs, double hi, double step) {
  double best_z = 0.0, best = std::numeric_limits<double>::infinity();
  const auto n = static_cast<std::size_t>(std::llround(hi / step));
  for (std::size_t i = 0; i <= n; ++i) {
    const double z = static_cast<double>(i) * step;
    const double v = expected_fstock(p, demands, probs, z);
    if (v < best) {
      best = v;
      best_z = z;
    }
  }
  return best_z;
}

/// The joint problem over (z, zb_1..zb_k, zh_1..zh_k):
///   min c0 z + q0/2 z^2 + sum_i p_i (cb zb_i + qb/2 zb_i^2 + ch zh_i + qh/2 zh_i^2)
///   s.t. zb_i >= d_i - z, zh_i >= z - d_i, all variables >= 0.
/// Solved by projected gradient ascent on the Lagrangian dual with the
/// primal recovered in closed form per multiplier; returns the optimal value.
inline double joint_qp_value(const ptodist::InventoryParams& p, std::span<const double> demands,
                             std::span<const double> probs, std::size_t iterations = 200000) {
  const std::size_t k = demands.size();
  Vector mu_b(k, 0.0), mu_h(k, 0.0);  // multipliers of the two coupling constraints
  auto primal = [&](Vector& zb, Vector& zh) {
    // z minimizes c0 z + q0/2 z^2 - sum mu_b z + sum mu_h z over z >= 0
    double lin = p.c0;
    for (std::size_t i = 0; i < k; ++i) lin += -mu_b[i] + mu_h[i];
    const double z = std::max(0.0, -lin / p.q0);
    for (std::size_t i = 0; i < k; ++i) {
      const double wb = probs[i] * p.qb, wh = probs[i] * p.qh;
      zb[i] = wb > 0 ? std::max(0.0, (mu_b[i] - probs[i] * p.cb) / wb) : 0.0;
      zh[i] = wh > 0 ? std::max(0.0, (mu_h[i] - probs[i] * p.ch) / wh) : 0.0;
    }
    return z;
  };
  Vector zb(k), zh(k);
  double step = 0.5 / (p.q0 > 0 ? 1.0 / p.q0 : 1.0);
  step = std::min(step, 0.05);
  for (std::size_t it = 0; it < iterations; ++it) {
    const double z = primal(zb, zh);
    for (std::size_t i = 0; i < k; ++i) {
      mu_b[i] = std::max(0.0, mu_b[i] + step * (demands[i] - z - zb[i]));
      mu_h[i] = std::max(0.0, mu_h[i] + step * (z - demands[i] - zh[i]));
    }
  }
  const double z = primal(zb, zh);
  // Evaluate the primal objective at a feasible point: repair the slack
  // variables to the hinge values the constraints require.
  double v = p.c0 * z + 0.5 * p.q0 * z * z;
  for (std::size_t i = 0; i < k; ++i) {
    const double b = std::max({zb[i], demands[i] - z, 0.0});
    const double h = std::max({zh[i], z - demands[i], 0.0});
    v += probs[i] * (p.cb * b + 0.5 * p.qb * b * b + p.ch * h + 0.5 * p.qh * h * h);
  }
  return v;
}

}  // namespace oracle
