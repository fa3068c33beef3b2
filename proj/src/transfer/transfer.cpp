#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ptodist/parallel.hpp"
#include "ptodist/transfer.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ptodist {

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::optional<double> transferability(double regret_source_on_target,
                                      double regret_target_on_target) {
  if (regret_target_on_target < 1e-9) return std::nullopt;
  return (regret_target_on_target - regret_source_on_target) / regret_target_on_target;
}

TransferRecord regret_transferability(const PtODataset& source, const PtODataset& target,
                                      const PredictiveModel& target_model,
                                      const TransferOptions& options,
                                      const std::string& source_id,
                                      const std::string& target_id) {
  require_same_task(source, target);
  options.weights.validate();
  const PredictiveModel source_model = train_regret_min(source.task, source, options.training);

  TransferRecord r;
  r.source_id = source_id;
  r.target_id = target_id;
  r.distance_weights = options.weights;
  r.distance = decision_aware_distance(source, target, options.weights, options.solver, options.mode)
                   .distance;
  r.regret_source_on_target = mean_regret(target.task, source_model, target);
  r.regret_target_on_target = mean_regret(target.task, target_model, target);
  r.transferability = transferability(r.regret_source_on_target, r.regret_target_on_target);
  r.excess_regret = r.regret_source_on_target - r.regret_target_on_target;
  return r;
}

std::pair<std::vector<double>, bool> transfer_responses(std::span<const TransferRecord> records) {
  const bool defined = std::all_of(records.begin(), records.end(),
                                   [](const TransferRecord& r) { return r.transferability.has_value(); });
  std::vector<double> out;
  out.reserve(records.size());
  for (const TransferRecord& r : records) out.push_back(defined ? *r.transferability : -r.excess_regret);
  return {std::move(out), defined};
}

TransferRecord regret_transferability(const PtODataset& source, const PtODataset& target,
                                      const TransferOptions& options,
                                      const std::string& source_id,
                                      const std::string& target_id) {
  require_same_task(source, target);
  const PredictiveModel target_model = train_regret_min(target.task, target, options.training);
  return regret_transferability(source, target, target_model, options, source_id, target_id);
}

double rsquared(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("R^2 needs at least 3 points");
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) throw std::invalid_argument("R^2: non-finite point");
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("R^2: x has zero variance");
  if (syy <= 0.0) return 0.0;
  const double r2 = (sxy * sxy) / (sxx * syy);
  return std::clamp(r2, 0.0, 1.0);
}

double pearson(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw std::invalid_argument("correlation needs at least 2 points");
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) throw std::invalid_argument("correlation: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

std::vector<std::pair<double, double>> label_decision_pairs(std::span<const PtODataset> pool,
                                                            std::size_t pairs, std::uint64_t seed) {
  std::vector<std::pair<const PtODataset*, std::size_t>> index;
  for (const PtODataset& d : pool) {
    if (!pool.empty()) require_same_task(pool.front(), d);
    for (std::size_t i = 0; i < d.size(); ++i) index.emplace_back(&d, i);
  }
  if (index.size() < 2) throw std::invalid_argument("need at least 2 pooled samples");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, index.size() - 1);
  std::vector<std::pair<double, double>> out;
  out.reserve(pairs);
  while (out.size() < pairs) {
    const auto [da, ia] = index[pick(rng)];
    const auto [db, ib] = index[pick(rng)];
    const Sample& a = da->samples[ia];
    const Sample& b = db->samples[ib];
    out.emplace_back(euclidean(a.y, b.y), decision_quality_disparity(da->task, a.z, b.z, a.y, b.y));
  }
  return out;
}

std::vector<GroundCostWeights> simplex_grid(std::size_t resolution) {
  if (resolution < 1) throw std::invalid_argument("simplex grid resolution must be >= 1");
  std::vector<GroundCostWeights> out;
  out.reserve((resolution + 1) * (resolution + 2) / 2);
  const double r = static_cast<double>(resolution);
  for (std::size_t i = 0; i <= resolution; ++i) {
    for (std::size_t j = 0; i + j <= resolution; ++j) {
      GroundCostWeights w;
      w.alpha_x = static_cast<double>(i) / r;
      w.alpha_y = static_cast<double>(j) / r;
      w.alpha_w = static_cast<double>(resolution - i - j) / r;
      out.push_back(w);
    }
  }
  return out;
}

namespace {

struct SweepInputs {
  std::vector<ComponentMatrices> components;
  std::vector<GroundCostWeights> grid;
};

SweepInputs prepare_sweep(std::span<const PtODataset> sources, const PtODataset& target,
                          std::span<const double> transferabilities, std::size_t resolution,
                          CostMode mode, bool parallel) {
  if (sources.size() != transferabilities.size()) {
    throw std::invalid_argument("sweep: " + std::to_string(sources.size()) + " sources but " +
                                std::to_string(transferabilities.size()) + " transferabilities");
  }
  if (sources.size() < 3) throw std::invalid_argument("sweep needs at least 3 sources");
  SweepInputs in;
  in.grid = simplex_grid(resolution);
  in.components.reserve(sources.size());
  for (const PtODataset& s : sources) {
    in.components.push_back(parallel ? component_matrices(s, target, mode)
                                     : component_matrices_serial(s, target, mode));
  }
  return in;
}

SweepRow sweep_point(const SweepInputs& in, std::size_t g, std::span<const double> transferabilities,
                     const SolverSpec& solver) {
  SweepRow row;
  row.weights = in.grid[g];
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < in.components.size(); ++i) {
    const double d = solve_distance(in.components[i].combine(row.weights), solver).distance;
    row.distances.push_back(d);
    points.emplace_back(d, transferabilities[i]);
  }
  const bool constant = std::all_of(row.distances.begin(), row.distances.end(),
                                    [&](double d) { return d == row.distances.front(); });
  if (!constant) row.r2 = rsquared(points);
  return row;
}

}  // namespace

std::vector<SweepRow> weight_sweep(std::span<const PtODataset> sources, const PtODataset& target,
                                   std::span<const double> transferabilities,
                                   std::size_t resolution, const SolverSpec& solver,
                                   CostMode mode) {
  const SweepInputs in = prepare_sweep(sources, target, transferabilities, resolution, mode, true);
  std::vector<SweepRow> rows(in.grid.size());
  ExceptionCollector errors;
  const long n = static_cast<long>(in.grid.size());
#pragma omp parallel for schedule(dynamic)
  for (long g = 0; g < n; ++g) {
    errors.run([&] {
      rows[static_cast<std::size_t>(g)] =
          sweep_point(in, static_cast<std::size_t>(g), transferabilities, solver);
    });
  }
  errors.rethrow();
  return rows;
}

std::vector<SweepRow> weight_sweep_serial(std::span<const PtODataset> sources,
                                          const PtODataset& target,
                                          std::span<const double> transferabilities,
                                          std::size_t resolution, const SolverSpec& solver,
                                          CostMode mode) {
  const SweepInputs in = prepare_sweep(sources, target, transferabilities, resolution, mode, false);
  std::vector<SweepRow> rows;
  rows.reserve(in.grid.size());
  for (std::size_t g = 0; g < in.grid.size(); ++g) {
    rows.push_back(sweep_point(in, g, transferabilities, solver));
  }
  return rows;
}

}  // namespace ptodist
