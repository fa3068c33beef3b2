#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "ptodist/transfer.hpp"

namespace ptodist {

namespace {

std::size_t grid_class(double x, std::size_t n_classes) {
  if (n_classes <= 1) return 0;
  const double scaled = std::round(x * static_cast<double>(n_classes - 1));
  return static_cast<std::size_t>(std::clamp(scaled, 0.0, static_cast<double>(n_classes - 1)));
}

// Pre-link scores, one per label element.
Vector scores(const TaskDefinition& task, std::span<const double> theta, std::span<const double> x) {
  const double bias = theta.back();
  switch (task.kind()) {
    case TaskKind::topk: {
      Vector s(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) s[i] = theta[0] * x[i] + bias;
      return s;
    }
    case TaskKind::shortest_path: {
      const std::size_t n_classes = task.grid_params().n_classes;
      Vector s(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) s[i] = theta[grid_class(x[i], n_classes)] + bias;
      return s;
    }
    case TaskKind::inventory: {
      const std::size_t k = task.label_dim(), n = x.size();
      Vector s(k, bias);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j) s[i] += theta[i * n + j] * x[j];
      return s;
    }
  }
  return {};
}

Vector apply_link(const TaskDefinition& task, Vector s) {
  switch (task.kind()) {
    case TaskKind::topk:
      return s;
    case TaskKind::shortest_path:
      for (double& v : s) v = std::max(v, 0.0);
      return s;
    case TaskKind::inventory: {
      const double hi = *std::max_element(s.begin(), s.end());
      double sum = 0.0;
      for (double& v : s) {
        v = std::exp(v - hi);
        sum += v;
      }
      for (double& v : s) v /= sum;
      return s;
    }
  }
  return s;
}

// Mean regret with q(y, y) cached per sample.
class RegretObjective {
 public:
  RegretObjective(const TaskDefinition& task, const PtODataset& d) : task_(task), data_(d) {
    best_.reserve(d.size());
    for (const Sample& s : d.samples) best_.push_back(tasks::decision_quality(task, s.y, s.y));
  }

  double operator()(std::span<const double> theta) const {
    double total = 0.0;
    for (std::size_t n = 0; n < data_.size(); ++n) {
      const Sample& s = data_.samples[n];
      const Vector y_hat = apply_link(task_, scores(task_, theta, s.x));
      const Vector z = tasks::oracle(task_, y_hat);
      total += std::abs(best_[n] - tasks::objective_unchecked(task_, z, s.y));
    }
    return total / static_cast<double>(data_.size());
  }

 private:
  const TaskDefinition& task_;
  const PtODataset& data_;
  Vector best_;
};

void check_model(const TaskDefinition& task, const PredictiveModel& model, std::size_t x_dim) {
  if (model.theta.size() != model_dim(task, x_dim)) {
    throw std::invalid_argument("model has " + std::to_string(model.theta.size()) +
                                " weights, task expects " + std::to_string(model_dim(task, x_dim)));
  }
  for (double t : model.theta) {
    if (!std::isfinite(t)) throw std::invalid_argument("model weights must be finite");
  }
}

}  // namespace

std::size_t model_dim(const TaskDefinition& task, std::size_t x_dim) {
  switch (task.kind()) {
    case TaskKind::topk: return 2;
    case TaskKind::shortest_path: return task.grid_params().n_classes + 1;
    case TaskKind::inventory: return x_dim * task.label_dim() + 1;
  }
  return 0;
}

Vector predict(const TaskDefinition& task, const PredictiveModel& model, std::span<const double> x) {
  check_model(task, model, x.size());
  return apply_link(task, scores(task, model.theta, x));
}

double mean_regret(const TaskDefinition& task, const PredictiveModel& model, const PtODataset& d) {
  if (d.samples.empty()) throw std::invalid_argument("mean_regret: empty dataset");
  check_model(task, model, d.samples.front().x.size());
  return RegretObjective(task, d)(model.theta);
}

PredictiveModel least_squares_fit(const TaskDefinition& task, const PtODataset& d) {
  if (d.samples.empty()) throw std::invalid_argument("least squares: empty dataset");
  const std::size_t x_dim = d.samples.front().x.size();
  const std::size_t dim = model_dim(task, x_dim);
  const std::size_t per_sample = task.label_dim();
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d.size() * per_sample),
                                                 static_cast<Eigen::Index>(dim));
  Eigen::VectorXd target(design.rows());
  Eigen::Index row = 0;
  for (const Sample& s : d.samples) {
    for (std::size_t e = 0; e < per_sample; ++e, ++row) {
      switch (task.kind()) {
        case TaskKind::topk:
          design(row, 0) = s.x[e];
          target(row) = s.y[e];
          break;
        case TaskKind::shortest_path:
          design(row, static_cast<Eigen::Index>(grid_class(s.x[e], task.grid_params().n_classes))) = 1.0;
          target(row) = s.y[e];
          break;
        case TaskKind::inventory:
          for (std::size_t j = 0; j < x_dim; ++j) {
            design(row, static_cast<Eigen::Index>(e * x_dim + j)) = s.x[j];
          }
          target(row) = std::log(std::max(s.y[e], 1e-12));
          break;
      }
      design(row, static_cast<Eigen::Index>(dim - 1)) = 1.0;
    }
  }
  const Eigen::VectorXd sol = design.colPivHouseholderQr().solve(target);
  PredictiveModel m;
  m.theta.assign(sol.data(), sol.data() + sol.size());
  for (double& t : m.theta) {
    if (!std::isfinite(t)) t = 0.0;
  }
  return m;
}

PredictiveModel train_regret_min(const TaskDefinition& task, const PtODataset& d,
                                 const TrainingOptions& options) {
  if (options.budget < 1) throw std::invalid_argument("training budget must be >= 1");
  if (options.restarts < 1) throw std::invalid_argument("training needs >= 1 restart");
  if (d.samples.empty()) throw std::invalid_argument("training: empty dataset");

  const RegretObjective objective(task, d);
  const PredictiveModel start = least_squares_fit(task, d);
  double scale = 1.0;
  for (double t : start.theta) scale = std::max(scale, std::abs(t));

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Vector best_theta = start.theta;
  double best = std::numeric_limits<double>::infinity();
  std::size_t used = 0;

  for (std::size_t r = 0; r < options.restarts && used < options.budget; ++r) {
    const std::size_t remaining_restarts = options.restarts - r;
    const std::size_t allowance = (options.budget - used) / remaining_restarts +
                                  ((options.budget - used) % remaining_restarts ? 1 : 0);
    std::size_t spent = 0;

    Vector theta = start.theta;
    if (r > 0) {
      for (double& t : theta) t += scale * gauss(rng);
    }
    double current = objective(theta);
    ++spent;
    if (current < best) {
      best = current;
      best_theta = theta;
    }

    double step = options.initial_step * scale;
    while (spent < allowance && step >= options.min_step) {
      bool improved = false;
      for (std::size_t i = 0; i < theta.size() && spent < allowance; ++i) {
        for (double dir : {1.0, -1.0}) {
          if (spent >= allowance) break;
          Vector trial = theta;
          trial[i] += dir * step;
          const double v = objective(trial);
          ++spent;
          if (v < current) {
            current = v;
            theta = std::move(trial);
            improved = true;
            break;
          }
        }
      }
      if (current < best) {
        best = current;
        best_theta = theta;
      }
      if (!improved) step *= 0.5;
    }
    used += spent;
  }
  return PredictiveModel{best_theta};
}

}  // namespace ptodist
