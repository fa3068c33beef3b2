#pragma once

// Synthetic dataset generators for the three task families. Each family has
// a shift knob: the cubic labeling parameter gamma for Top-K, the per-class
// cost table for the grid, and the feature mean / score matrix for inventory.

#include <cstdint>
#include <vector>

#include "ptodist/dataset.hpp"

namespace ptodist::datagen {

/// 10 (x^3 - gamma x).
double cubic_label(double gamma, double x);

/// Instances of N resources with x ~ U[-1, 1] sorted ascending and
/// y = cubic_label(gamma, x); z is the oracle decision.
PtODataset gen_topk(double gamma, std::size_t n_resources, std::size_t n_instances,
                    std::size_t k, std::uint64_t seed);

struct GridGenOptions {
  std::uint64_t class_cost_seed = 0;
  std::uint64_t map_seed = 0;
  std::size_t side = 12;
  std::size_t n_classes = 5;
  std::size_t n_instances = 50;
  double cost_lo = 0.8;
  double cost_hi = 9.2;
  Neighborhood neighborhood = Neighborhood::eight;
  bool count_start = true;
  double length_penalty = 0.0;
};

/// Per-class traversal costs ~ U[cost_lo, cost_hi].
Vector grid_class_costs(std::size_t n_classes, double lo, double hi, std::uint64_t seed);

/// A side x side map of class ids in [0, n_classes): multi-octave value noise
/// normalized to [0, 1] and cut into n_classes equal-width bands.
std::vector<std::size_t> grid_class_map(std::size_t side, std::size_t n_classes,
                                        std::uint64_t seed);

/// Builds one grid sample: x = class / (n_classes - 1), y = class cost,
/// z = oracle path mask.
Sample make_grid_sample(const TaskDefinition& task, const std::vector<std::size_t>& class_map,
                        const Vector& class_costs);

/// Maps come from map_seed, the class cost table from class_cost_seed; two
/// datasets sharing map_seed have identical features.
PtODataset gen_grid(const GridGenOptions& options);

struct InventoryGenOptions {
  std::uint64_t mean_shift_seed = 0;
  std::uint64_t theta_seed = 0;
  std::size_t n_features = 4;
  std::size_t n_instances = 50;
  Vector demand_values{1.0, 2.0, 3.0, 4.0, 5.0};
  InventoryParams costs{};
};

/// normalize(exp(s_i^2)) computed stably.
Vector squared_softmax(const Vector& scores);

/// mu ~ U[-0.5, 0.5]^n (mean_shift_seed), Theta (n x k) standard normal
/// (theta_seed), x ~ N(mu, I) from the mean_shift_seed stream,
/// y = squared_softmax(Theta^T x), z = optimal order.
PtODataset gen_inventory(const InventoryGenOptions& options);

}  // namespace ptodist::datagen
