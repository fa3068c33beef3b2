#include "ptodist/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ptodist::datagen {

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

double cubic_label(double gamma, double x) { return 10.0 * (x * x * x - gamma * x); }

PtODataset gen_topk(double gamma, std::size_t n_resources, std::size_t n_instances,
                    std::size_t k, std::uint64_t seed) {
  PtODataset d;
  d.task = TaskDefinition::topk(n_resources, k);
  d.provenance.generator = "topk_gamma";
  d.provenance.parameters = {{"gamma", shortest(gamma)},
                             {"seed", std::to_string(seed)},
                             {"instances", std::to_string(n_instances)}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  d.samples.reserve(n_instances);
  for (std::size_t n = 0; n < n_instances; ++n) {
    Sample s;
    s.x.resize(n_resources);
    for (double& v : s.x) v = unif(rng);
    std::sort(s.x.begin(), s.x.end());
    s.y.resize(n_resources);
    for (std::size_t i = 0; i < n_resources; ++i) s.y[i] = cubic_label(gamma, s.x[i]);
    s.z = tasks::oracle(d.task, s.y);
    d.samples.push_back(std::move(s));
  }
  return d;
}

Vector grid_class_costs(std::size_t n_classes, double lo, double hi, std::uint64_t seed) {
  if (!(hi >= lo) || lo < 0.0) throw std::invalid_argument("grid: need 0 <= cost_lo <= cost_hi");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  Vector costs(n_classes);
  for (double& c : costs) c = unif(rng);
  return costs;
}

namespace {

// Bilinear interpolation of a (lattice+1)^2 grid of random values.
void add_octave(std::vector<double>& field, std::size_t side, std::size_t lattice,
                double weight, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t pts = lattice + 1;
  std::vector<double> node(pts * pts);
  for (double& v : node) v = unif(rng);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      const double fr = static_cast<double>(r) * static_cast<double>(lattice) /
                        static_cast<double>(side - 1);
      const double fc = static_cast<double>(c) * static_cast<double>(lattice) /
                        static_cast<double>(side - 1);
      const std::size_t r0 = std::min(static_cast<std::size_t>(fr), lattice - 1);
      const std::size_t c0 = std::min(static_cast<std::size_t>(fc), lattice - 1);
      const double tr = fr - static_cast<double>(r0), tc = fc - static_cast<double>(c0);
      const double v00 = node[r0 * pts + c0], v01 = node[r0 * pts + c0 + 1];
      const double v10 = node[(r0 + 1) * pts + c0], v11 = node[(r0 + 1) * pts + c0 + 1];
      const double top = v00 + tc * (v01 - v00), bottom = v10 + tc * (v11 - v10);
      field[r * side + c] += weight * (top + tr * (bottom - top));
    }
  }
}

}  // namespace

std::vector<std::size_t> grid_class_map(std::size_t side, std::size_t n_classes,
                                        std::uint64_t seed) {
  if (side < 2) throw std::invalid_argument("grid: side must be >= 2");
  if (n_classes < 1) throw std::invalid_argument("grid: need >= 1 class");
  std::mt19937_64 rng(seed);
  std::vector<double> field(side * side, 0.0);
  add_octave(field, side, 2, 1.0, rng);
  add_octave(field, side, 4, 0.5, rng);
  add_octave(field, side, 8, 0.25, rng);
  const auto [lo_it, hi_it] = std::minmax_element(field.begin(), field.end());
  const double lo = *lo_it, span = *hi_it - *lo_it;
  std::vector<std::size_t> classes(side * side, 0);
  if (span <= 0.0) return classes;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double v = (field[i] - lo) / span;
    classes[i] = std::min(n_classes - 1, static_cast<std::size_t>(v * static_cast<double>(n_classes)));
  }
  return classes;
}

Sample make_grid_sample(const TaskDefinition& task, const std::vector<std::size_t>& class_map,
                        const Vector& class_costs) {
  const std::size_t n_classes = class_costs.size();
  Sample s;
  s.x.resize(class_map.size());
  s.y.resize(class_map.size());
  for (std::size_t c = 0; c < class_map.size(); ++c) {
    if (class_map[c] >= n_classes) throw std::invalid_argument("grid: class id out of range");
    s.x[c] = n_classes > 1 ? static_cast<double>(class_map[c]) /
                                 static_cast<double>(n_classes - 1)
                           : 0.0;
    s.y[c] = class_costs[class_map[c]];
  }
  s.z = tasks::oracle(task, s.y);
  return s;
}

PtODataset gen_grid(const GridGenOptions& o) {
  GridParams params;
  params.side = o.side;
  params.neighborhood = o.neighborhood;
  params.count_start = o.count_start;
  params.length_penalty = o.length_penalty;
  params.n_classes = o.n_classes;
  PtODataset d;
  d.task = TaskDefinition::shortest_path(params);
  d.provenance.generator = "grid_class_costs";
  d.provenance.parameters = {{"class_cost_seed", std::to_string(o.class_cost_seed)},
                             {"map_seed", std::to_string(o.map_seed)},
                             {"cost_lo", shortest(o.cost_lo)},
                             {"cost_hi", shortest(o.cost_hi)},
                             {"instances", std::to_string(o.n_instances)}};
  const Vector table = grid_class_costs(o.n_classes, o.cost_lo, o.cost_hi, o.class_cost_seed);
  std::mt19937_64 map_stream(o.map_seed);
  d.samples.reserve(o.n_instances);
  for (std::size_t n = 0; n < o.n_instances; ++n) {
    const auto map = grid_class_map(o.side, o.n_classes, map_stream());
    d.samples.push_back(make_grid_sample(d.task, map, table));
  }
  return d;
}

Vector squared_softmax(const Vector& scores) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double s : scores) hi = std::max(hi, s * s);
  Vector p(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    p[i] = std::exp(scores[i] * scores[i] - hi);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

PtODataset gen_inventory(const InventoryGenOptions& o) {
  if (o.demand_values.size() < 2) throw std::invalid_argument("inventory: need >= 2 demand values");
  if (o.n_features < 1) throw std::invalid_argument("inventory: need >= 1 feature");
  PtODataset d;
  d.task = TaskDefinition::inventory(o.costs, o.demand_values);
  d.provenance.generator = "inventory_gaussian";
  d.provenance.parameters = {{"mean_shift_seed", std::to_string(o.mean_shift_seed)},
                             {"theta_seed", std::to_string(o.theta_seed)},
                             {"n_features", std::to_string(o.n_features)},
                             {"instances", std::to_string(o.n_instances)}};
  const std::size_t n = o.n_features, k = o.demand_values.size();

  std::mt19937_64 mean_stream(o.mean_shift_seed);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  Vector mu(n);
  for (double& m : mu) m = unif(mean_stream);

  std::mt19937_64 theta_stream(o.theta_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector theta(n * k);  // row-major n x k
  for (double& t : theta) t = gauss(theta_stream);

  d.samples.reserve(o.n_instances);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t s = 0; s < o.n_instances; ++s) {
    Sample sample;
    sample.x.resize(n);
    for (std::size_t j = 0; j < n; ++j) sample.x[j] = mu[j] + noise(mean_stream);
    Vector scores(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < n; ++j) scores[i] += theta[j * k + i] * sample.x[j];
    sample.y = squared_softmax(scores);
    sample.z = tasks::oracle(d.task, sample.y);
    d.samples.push_back(std::move(sample));
  }
  return d;
}

}  // namespace ptodist::datagen
