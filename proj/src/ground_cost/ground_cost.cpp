#include "ptodist/ground_cost.hpp"

#include <cmath>
#include <stdexcept>

#include "ptodist/error.hpp"

namespace ptodist {

GroundCostWeights GroundCostWeights::make(double alpha_x, double alpha_y, double alpha_w) {
  GroundCostWeights w{alpha_x, alpha_y, alpha_w};
  w.validate();
  return w;
}

void GroundCostWeights::validate() const {
  for (double a : {alpha_x, alpha_y, alpha_w}) {
    if (!std::isfinite(a) || a < 0.0) throw std::invalid_argument("ground cost weights must be >= 0");
  }
  if (std::abs(alpha_x + alpha_y + alpha_w - 1.0) > 1e-12) {
    throw std::invalid_argument("ground cost weights must sum to 1");
  }
}

std::string to_string(CostMode mode) {
  return mode == CostMode::as_written ? "as-written" : "symmetrized";
}

CostMode parse_cost_mode(const std::string& name) {
  if (name == "as-written" || name == "as_written") return CostMode::as_written;
  if (name == "symmetrized") return CostMode::symmetrized;
  throw std::invalid_argument("unknown cost mode '" + name + "'");
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("euclidean: length " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double decision_quality_disparity(const TaskDefinition& task, std::span<const double> z,
                                  std::span<const double> z_prime, std::span<const double> y,
                                  std::span<const double> y_prime) {
  if (!tasks::validate_decision(task, z)) throw std::invalid_argument("disparity: z is infeasible");
  if (!tasks::validate_decision(task, z_prime)) {
    throw std::invalid_argument("disparity: z_prime is infeasible");
  }
  tasks::validate_labels(task, y);
  tasks::validate_labels(task, y_prime);
  return std::abs(tasks::objective_unchecked(task, z, y) -
                  tasks::objective_unchecked(task, z_prime, y_prime));
}

namespace {

double decision_term(const TaskDefinition& task, const Sample& s, const Sample& t, CostMode mode) {
  const double under_t =
      std::abs(tasks::objective_unchecked(task, s.z, t.y) - tasks::objective_unchecked(task, t.z, t.y));
  if (mode == CostMode::as_written) return under_t;
  const double under_s =
      std::abs(tasks::objective_unchecked(task, s.z, s.y) - tasks::objective_unchecked(task, t.z, s.y));
  return 0.5 * (under_s + under_t);
}

void check_sample(const TaskDefinition& task, const Sample& s, const char* name) {
  if (!tasks::validate_decision(task, s.z)) {
    throw std::invalid_argument(std::string("ground cost: decision of ") + name + " is infeasible");
  }
  tasks::validate_labels(task, s.y);
}

}  // namespace

CostBreakdown pto_ground_cost(const Sample& s, const Sample& s_prime, const GroundCostWeights& w,
                              const TaskDefinition& task, CostMode mode) {
  w.validate();
  if (s.x.size() != s_prime.x.size() || s.y.size() != s_prime.y.size() ||
      s.z.size() != s_prime.z.size()) {
    throw std::invalid_argument("ground cost: sample dimensions differ");
  }
  check_sample(task, s, "s");
  check_sample(task, s_prime, "s_prime");
  CostBreakdown b;
  b.feature_term = euclidean(s.x, s_prime.x);
  b.label_term = euclidean(s.y, s_prime.y);
  b.decision_term = decision_term(task, s, s_prime, mode);
  b.total = w.alpha_x * b.feature_term + w.alpha_y * b.label_term + w.alpha_w * b.decision_term;
  return b;
}

ot::CostMatrix ComponentMatrices::combine(const GroundCostWeights& w) const {
  ot::CostMatrix out(feature.rows(), feature.cols());
  const auto f = feature.data(), l = label.data(), d = decision.data();
  auto o = out.data();
  for (std::size_t k = 0; k < o.size(); ++k) {
    o[k] = w.alpha_x * f[k] + w.alpha_y * l[k] + w.alpha_w * d[k];
  }
  return out;
}

namespace {

ComponentMatrices allocate(const PtODataset& d, const PtODataset& d_prime) {
  require_same_task(d, d_prime);
  d.validate();
  d_prime.validate();
  const std::size_t n = d.size(), m = d_prime.size();
  return {ot::CostMatrix(n, m), ot::CostMatrix(n, m), ot::CostMatrix(n, m)};
}

void fill_row(ComponentMatrices& c, const PtODataset& d, const PtODataset& d_prime, CostMode mode,
              std::size_t i) {
  const Sample& s = d.samples[i];
  for (std::size_t j = 0; j < d_prime.size(); ++j) {
    const Sample& t = d_prime.samples[j];
    c.feature(i, j) = euclidean(s.x, t.x);
    c.label(i, j) = euclidean(s.y, t.y);
    c.decision(i, j) = decision_term(d.task, s, t, mode);
  }
}

}  // namespace

ComponentMatrices component_matrices_serial(const PtODataset& d, const PtODataset& d_prime,
                                            CostMode mode) {
  ComponentMatrices c = allocate(d, d_prime);
  for (std::size_t i = 0; i < d.size(); ++i) fill_row(c, d, d_prime, mode, i);
  return c;
}

ComponentMatrices component_matrices(const PtODataset& d, const PtODataset& d_prime,
                                     CostMode mode) {
  ComponentMatrices c = allocate(d, d_prime);
  const long n = static_cast<long>(d.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) fill_row(c, d, d_prime, mode, static_cast<std::size_t>(i));
  return c;
}

ot::CostMatrix pairwise_cost_matrix(const PtODataset& d, const PtODataset& d_prime,
                                    const GroundCostWeights& w, CostMode mode) {
  w.validate();
  return component_matrices(d, d_prime, mode).combine(w);
}

ot::CostMatrix pairwise_cost_matrix_serial(const PtODataset& d, const PtODataset& d_prime,
                                           const GroundCostWeights& w, CostMode mode) {
  w.validate();
  return component_matrices_serial(d, d_prime, mode).combine(w);
}

DistanceResult solve_distance(const ot::CostMatrix& cost, const SolverSpec& solver) {
  const auto a = ot::Marginal::uniform(cost.rows());
  const auto b = ot::Marginal::uniform(cost.cols());
  DistanceResult r;
  if (solver.kind == SolverSpec::Kind::exact) {
    auto ex = ot::solve_exact(cost, a, b);
    r.distance = ex.cost;
    r.plan = std::move(ex.plan);
  } else {
    ot::SinkhornOptions opt;
    opt.epsilon = solver.epsilon;
    opt.max_iter = solver.max_iter;
    opt.tol = solver.tol;
    auto sk = ot::solve_sinkhorn(cost, a, b, opt);
    r.distance = sk.cost;
    r.plan = std::move(sk.plan);
    r.converged = sk.converged;
  }
  return r;
}

DistanceResult decision_aware_distance(const PtODataset& d, const PtODataset& d_prime,
                                       const GroundCostWeights& w, const SolverSpec& solver,
                                       CostMode mode) {
  return solve_distance(pairwise_cost_matrix(d, d_prime, w, mode), solver);
}

}  // namespace ptodist
