#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ptodist/tasks.hpp"

namespace ptodist::tasks {

double fstock(const InventoryParams& p, double d, double z) {
  const double under = std::max(d - z, 0.0);
  const double over = std::max(z - d, 0.0);
  return p.c0 * z + 0.5 * p.q0 * z * z + p.cb * under + 0.5 * p.qb * under * under +
         p.ch * over + 0.5 * p.qh * over * over;
}

double expected_stock_cost(const InventoryTask& task, std::span<const double> probs, double z) {
  if (probs.size() != task.demands.size()) {
    throw std::invalid_argument("inventory: probability vector does not match demand grid");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    total += probs[i] * fstock(task.costs, task.demands[i], z);
  }
  return total;
}

double optimal_order(const InventoryTask& task, std::span<const double> probs) {
  const auto& p = task.costs;
  const auto& d = task.demands;
  const std::size_t k = d.size();
  if (probs.size() != k) {
    throw std::invalid_argument("inventory: probability vector does not match demand grid");
  }

  std::vector<double> candidates{0.0};
  for (double knot : d) candidates.push_back(knot);

  // Piece `piece` spans (d[piece-1], d[piece]) with d[-1] = -inf, d[k] = +inf;
  // demands below the piece are over-ordered, the rest under-ordered.
  for (std::size_t piece = 0; piece <= k; ++piece) {
    double constant = p.c0, slope = p.q0;
    for (std::size_t i = 0; i < k; ++i) {
      if (i < piece) {
        constant += probs[i] * (p.ch - p.qh * d[i]);
        slope += probs[i] * p.qh;
      } else {
        constant += probs[i] * (-p.cb - p.qb * d[i]);
        slope += probs[i] * p.qb;
      }
    }
    if (slope <= 0.0) continue;
    const double lo = piece == 0 ? 0.0 : std::max(0.0, d[piece - 1]);
    const double hi = piece == k ? std::numeric_limits<double>::infinity() : d[piece];
    if (hi < lo) continue;
    candidates.push_back(std::clamp(-constant / slope, lo, hi));
  }

  double best_z = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (double z : candidates) {
    if (z < 0.0 || !std::isfinite(z)) continue;
    const double v = expected_stock_cost(task, probs, z);
    if (v < best || (v == best && z < best_z)) {
      best = v;
      best_z = z;
    }
  }
  return best_z;
}

}  // namespace ptodist::tasks
