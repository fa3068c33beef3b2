#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ptodist/transfer.hpp"

namespace ptodist {

namespace {

std::vector<Vector> predictions(const TaskDefinition& task, const PredictiveModel& m,
                                const PtODataset& d) {
  std::vector<Vector> out;
  out.reserve(d.size());
  for (const Sample& s : d.samples) out.push_back(predict(task, m, s.x));
  return out;
}

void check_plan(const ot::TransportPlan& plan, const PtODataset& d_a, const PtODataset& d_b) {
  if (plan.matrix.rows() != d_a.size() || plan.matrix.cols() != d_b.size()) {
    throw std::invalid_argument("plan shape does not match the datasets");
  }
}

}  // namespace

double estimate_phi(const TaskDefinition& task, const PredictiveModel& f_tilde,
                    const ot::TransportPlan& plan, const PtODataset& d_a, const PtODataset& d_b,
                    double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  check_plan(plan, d_a, d_b);
  const auto pa = predictions(task, f_tilde, d_a);
  const auto pb = predictions(task, f_tilde, d_b);
  double mass = 0.0;
  for (std::size_t i = 0; i < d_a.size(); ++i) {
    for (std::size_t j = 0; j < d_b.size(); ++j) {
      const double p = plan.matrix(i, j);
      if (p <= 0.0) continue;
      if (euclidean(pa[i], pb[j]) > lambda * euclidean(d_a.samples[i].x, d_b.samples[j].x)) {
        mass += p;
      }
    }
  }
  return std::min(mass, 1.0);
}

BoundReport evaluate_bound(const TaskDefinition& task, const PredictiveModel& f,
                           const PredictiveModel& f_tilde, const PtODataset& source,
                           const PtODataset& target, double lambda, double k1, double k2,
                           std::optional<StrictLipschitz> strict) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (!(k1 > 0.0) || !(k2 > 0.0)) throw std::invalid_argument("k1 and k2 must be > 0");
  require_same_task(source, target);

  PtODataset lifted_target = target;
  for (Sample& s : lifted_target.samples) s.z = tasks::oracle(task, predict(task, f, s.x));
  PtODataset lifted_source = source;
  for (Sample& s : lifted_source.samples) s.z = tasks::oracle(task, s.y);

  BoundReport r;
  r.lambda = lambda;
  r.k1 = k1;
  r.k2 = k2;
  r.weights.alpha_w = 1.0 / (lambda * k1 + k2 + 1.0);
  r.weights.alpha_x = lambda * k1 * r.weights.alpha_w;
  r.weights.alpha_y = k2 * r.weights.alpha_w;

  const ot::CostMatrix cost =
      component_matrices(lifted_target, lifted_source, CostMode::as_written).combine(r.weights);
  const DistanceResult ot = solve_distance(cost, SolverSpec::exact());
  r.distance = ot.distance;
  r.ot_term = ot.distance / r.weights.alpha_w;

  const auto pt = predictions(task, f_tilde, lifted_target);
  const auto ps = predictions(task, f_tilde, lifted_source);
  for (std::size_t i = 0; i < pt.size(); ++i) {
    for (std::size_t j = 0; j < ps.size(); ++j) {
      if (ot.plan.matrix(i, j) > 0.0) r.lipschitz_range = std::max(r.lipschitz_range, euclidean(pt[i], ps[j]));
    }
  }
  r.phi = estimate_phi(task, f_tilde, ot.plan, lifted_target, lifted_source, lambda);
  r.lipschitz_term = k1 * r.lipschitz_range * r.phi;

  r.lhs = mean_regret(task, f, target);
  r.joint_regret_source = mean_regret(task, f_tilde, source);
  r.joint_regret_target = mean_regret(task, f_tilde, target);
  r.holds = r.lhs <= r.rhs() + 1e-9;

  if (strict) {
    if (strict->lipschitz < 0.0 || strict->radius < 0.0) {
      throw std::invalid_argument("Lipschitz constant and radius must be >= 0");
    }
    r.strict_lipschitz_term = k1 * 2.0 * strict->lipschitz * strict->radius * r.phi;
    r.holds_strict = r.lhs <= r.joint_regret_source + r.joint_regret_target +
                                  *r.strict_lipschitz_term + r.ot_term + 1e-9;
  }
  return r;
}

std::pair<double, double> empirical_lipschitz(const TaskDefinition& task,
                                              std::span<const PredictiveModel> models,
                                              const PtODataset& source, const PtODataset& target,
                                              std::size_t trials, std::uint64_t seed,
                                              double safety) {
  if (!(safety > 0.0)) throw std::invalid_argument("safety factor must be > 0");
  std::vector<Vector> pool;
  for (const PtODataset* d : {&source, &target}) {
    for (const Sample& s : d->samples) {
      pool.push_back(s.y);
      for (const PredictiveModel& m : models) pool.push_back(predict(task, m, s.x));
    }
  }
  const tasks::LipschitzEstimate e = tasks::lipschitz_probe(task, pool, trials, seed);
  const double floor = 1e-9;
  return {std::max(floor, safety * std::max(e.k1, e.combined)),
          std::max(floor, safety * std::max(e.k2, e.combined))};
}

}  // namespace ptodist
