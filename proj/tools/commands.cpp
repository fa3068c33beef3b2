#include "commands.hpp"

#include <iostream>
#include <memory>

#include "cli_common.hpp"
#include "ptodist/datagen.hpp"

namespace cli {

using namespace ptodist;

namespace {

struct SolverFlags {
  std::string solver = "exact";
  double epsilon = 0.01;
  std::string mode = "as-written";

  void add(CLI::App* c) {
    c->add_option("--solver", solver, "exact | sinkhorn")->capture_default_str();
    c->add_option("--epsilon", epsilon, "Sinkhorn regularization")->capture_default_str();
    c->add_option("--mode", mode, "as-written | symmetrized")->capture_default_str();
  }
  SolverSpec spec() const { return make_solver(solver, epsilon); }
  CostMode cost_mode() const {
    try {
      return parse_cost_mode(mode);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
};

struct TrainingFlags {
  std::size_t budget = 5000;
  std::size_t restarts = 5;
  std::uint64_t seed = 0;

  void add(CLI::App* c) {
    c->add_option("--budget", budget, "objective evaluations per trained model")->capture_default_str();
    c->add_option("--restarts", restarts)->capture_default_str();
    c->add_option("--seed", seed, "training seed")->capture_default_str();
  }
  TrainingOptions options() const {
    if (budget < 1) throw UsageError("--budget must be >= 1");
    if (restarts < 1) throw UsageError("--restarts must be >= 1");
    TrainingOptions t;
    t.budget = budget;
    t.restarts = restarts;
    t.seed = seed;
    return t;
  }
};

std::string describe(const PtODataset& d) {
  std::string line = d.provenance.generator;
  for (const auto& [k, v] : d.provenance.parameters) line += " " + k + "=" + v;
  return line;
}

}  // namespace

Command add_gen(CLI::App& app) {
  struct Flags {
    std::string family, out;
    std::size_t instances = 50;
    std::optional<double> gamma;
    std::size_t resources = 25, k = 1;
    std::uint64_t seed = 0;
    std::size_t p = 12, classes = 5;
    std::optional<std::uint64_t> cost_seed, map_seed;
    double cost_lo = 0.8, cost_hi = 9.2, length_penalty = 0.0;
    int neighborhood = 8;
    bool exclude_start = false;
    std::optional<std::uint64_t> mean_seed, theta_seed;
    std::size_t features = 4;
    std::string demands = "1,2,3,4,5";
    InventoryParams costs;
  };
  auto f = std::make_shared<Flags>();
  CLI::App* c = app.add_subcommand("gen", "Generate a synthetic dataset file");
  c->add_option("--family", f->family, "topk | grid | inventory")->required();
  c->add_option("--out", f->out, "output dataset file")->required();
  c->add_option("--instances", f->instances)->capture_default_str();
  c->add_option("--gamma", f->gamma, "topk: labeling shift parameter");
  c->add_option("--resources", f->resources, "topk: resources per instance")->capture_default_str();
  c->add_option("--k", f->k, "topk: resources to select")->capture_default_str();
  c->add_option("--seed", f->seed, "topk: feature seed")->capture_default_str();
  c->add_option("--p", f->p, "grid: side length")->capture_default_str();
  c->add_option("--classes", f->classes, "grid: terrain classes")->capture_default_str();
  c->add_option("--cost-seed", f->cost_seed, "grid: class cost table seed");
  c->add_option("--map-seed", f->map_seed, "grid: class map seed");
  c->add_option("--cost-lo", f->cost_lo)->capture_default_str();
  c->add_option("--cost-hi", f->cost_hi)->capture_default_str();
  c->add_option("--neighborhood", f->neighborhood, "grid: 4 or 8")->capture_default_str();
  c->add_flag("--exclude-start", f->exclude_start, "grid: do not charge the start cell");
  c->add_option("--length-penalty", f->length_penalty, "grid: cost added per visited cell")
      ->capture_default_str();
  c->add_option("--mean-seed", f->mean_seed, "inventory: feature mean seed");
  c->add_option("--theta-seed", f->theta_seed, "inventory: score matrix seed");
  c->add_option("--features", f->features)->capture_default_str();
  c->add_option("--demands", f->demands, "inventory: demand values")->capture_default_str();
  c->add_option("--c0", f->costs.c0)->capture_default_str();
  c->add_option("--q0", f->costs.q0)->capture_default_str();
  c->add_option("--cb", f->costs.cb)->capture_default_str();
  c->add_option("--qb", f->costs.qb)->capture_default_str();
  c->add_option("--ch", f->costs.ch)->capture_default_str();
  c->add_option("--qh", f->costs.qh)->capture_default_str();

  return [f]() {
    if (f->instances < 1) throw UsageError("--instances must be >= 1");
    PtODataset d;
    if (f->family == "topk") {
      if (!f->gamma) throw UsageError("--gamma is required for --family topk");
      if (f->k < 1 || f->k > f->resources) throw UsageError("need 1 <= --k <= --resources");
      d = datagen::gen_topk(*f->gamma, f->resources, f->instances, f->k, f->seed);
    } else if (f->family == "grid") {
      if (!f->cost_seed || !f->map_seed) {
        throw UsageError("--cost-seed and --map-seed are required for --family grid");
      }
      if (f->neighborhood != 4 && f->neighborhood != 8) throw UsageError("--neighborhood must be 4 or 8");
      if (f->p < 2) throw UsageError("--p must be >= 2");
      if (f->classes < 1) throw UsageError("--classes must be >= 1");
      datagen::GridGenOptions o;
      o.class_cost_seed = *f->cost_seed;
      o.map_seed = *f->map_seed;
      o.side = f->p;
      o.n_classes = f->classes;
      o.n_instances = f->instances;
      o.cost_lo = f->cost_lo;
      o.cost_hi = f->cost_hi;
      o.neighborhood = f->neighborhood == 4 ? Neighborhood::four : Neighborhood::eight;
      o.count_start = !f->exclude_start;
      o.length_penalty = f->length_penalty;
      d = datagen::gen_grid(o);
    } else if (f->family == "inventory") {
      if (!f->mean_seed || !f->theta_seed) {
        throw UsageError("--mean-seed and --theta-seed are required for --family inventory");
      }
      datagen::InventoryGenOptions o;
      o.mean_shift_seed = *f->mean_seed;
      o.theta_seed = *f->theta_seed;
      o.n_features = f->features;
      o.n_instances = f->instances;
      o.demand_values = parse_list(f->demands);
      o.costs = f->costs;
      d = datagen::gen_inventory(o);
    } else {
      throw UsageError("unknown --family '" + f->family + "' (topk | grid | inventory)");
    }
    io::write_dataset(d, f->out);
    std::cout << describe(d) << " samples=" << d.size() << " -> " << f->out << '\n';
    return static_cast<int>(kOk);
  };
}

Command add_dist(CLI::App& app) {
  struct Flags {
    std::string a, b;
    std::optional<std::string> alpha;
    std::string breakdown;
    SolverFlags solver;
  };
  auto f = std::make_shared<Flags>();
  CLI::App* c = app.add_subcommand("dist", "Decision-aware OT distance between two dataset files");
  c->add_option("first", f->a, "dataset file")->required();
  c->add_option("second", f->b, "dataset file")->required();
  c->add_option("--alpha", f->alpha, "feature,label,decision weights summing to 1 (default: equal)");
  c->add_option("--breakdown", f->breakdown, "write the per-pair cost terms and plan mass here");
  f->solver.add(c);

  return [f]() {
    const GroundCostWeights w = f->alpha ? parse_alpha(*f->alpha) : GroundCostWeights{};
    const SolverSpec solver = f->solver.spec();
    const CostMode mode = f->solver.cost_mode();
    const PtODataset a = load(f->a), b = load(f->b);
    require_same_task(a, b);
    const ComponentMatrices parts = component_matrices(a, b, mode);
    const DistanceResult r = solve_distance(parts.combine(w), solver);
    std::cout << io::format_number(r.distance) << '\n';
    if (!f->breakdown.empty()) {
      CsvWriter out(f->breakdown, {"i", "j", "feature_term", "label_term", "decision_term", "total",
                                   "plan_mass"});
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
          const double total = w.alpha_x * parts.feature(i, j) + w.alpha_y * parts.label(i, j) +
                               w.alpha_w * parts.decision(i, j);
          out.cell(i).cell(j).cell(parts.feature(i, j)).cell(parts.label(i, j));
          out.cell(parts.decision(i, j)).cell(total).cell(r.plan.matrix(i, j));
          out.end_row();
        }
      }
    }
    if (!r.converged) {
      std::cerr << "warning: Sinkhorn did not reach the marginal tolerance\n";
      return static_cast<int>(kNumerical);
    }
    return static_cast<int>(kOk);
  };
}

namespace {

void write_transfer_header(CsvWriter& w) {
  for (const char* h : {"source_id", "target_id", "distance", "alpha_x", "alpha_y", "alpha_w",
                        "transferability", "regret_source_on_target", "regret_target_on_target",
                        "excess_regret"}) {
    w.cell(std::string(h));
  }
  w.end_row();
}

void write_transfer_row(CsvWriter& w, const TransferRecord& r) {
  w.cell(r.source_id).cell(r.target_id).cell(r.distance);
  w.cell(r.distance_weights.alpha_x).cell(r.distance_weights.alpha_y).cell(r.distance_weights.alpha_w);
  if (r.transferability) {
    w.cell(*r.transferability);
  } else {
    w.empty();
  }
  w.cell(r.regret_source_on_target).cell(r.regret_target_on_target).cell(r.excess_regret);
  w.end_row();
}

}  // namespace

Command add_transfer(CLI::App& app) {
  struct Flags {
    std::vector<std::string> sources;
    std::string target, out;
    std::optional<std::string> alpha;
    TrainingFlags training;
    SolverFlags solver;
  };
  auto f = std::make_shared<Flags>();
  CLI::App* c = app.add_subcommand("transfer", "Regret transferability of sources to a target");
  c->add_option("--source", f->sources, "source dataset file (repeatable)")->required();
  c->add_option("--target", f->target, "target dataset file")->required();
  c->add_option("--out", f->out, "output table (default: stdout)");
  c->add_option("--alpha", f->alpha, "ground cost weights of the reported distance (default: equal)");
  f->training.add(c);
  f->solver.add(c);

  return [f]() {
    TransferOptions opt;
    opt.training = f->training.options();
    if (f->alpha) opt.weights = parse_alpha(*f->alpha);
    opt.solver = f->solver.spec();
    opt.mode = f->solver.cost_mode();
    const PtODataset target = load(f->target);
    std::vector<PtODataset> sources;
    for (const auto& s : f->sources) {
      sources.push_back(load(s));
      require_same_task(sources.back(), target);
    }
    const PredictiveModel target_model = train_regret_min(target.task, target, opt.training);
    CsvWriter out(f->out, {});
    write_transfer_header(out);
    for (std::size_t i = 0; i < sources.size(); ++i) {
      write_transfer_row(out, regret_transferability(sources[i], target, target_model, opt,
                                                     dataset_id(f->sources[i]), dataset_id(f->target)));
    }
    return static_cast<int>(kOk);
  };
}

Command add_sweep(CLI::App& app) {
  struct Flags {
    std::vector<std::string> sources;
    std::string target, out, distances_out;
    std::size_t resolution = 10;
    TrainingFlags training;
    SolverFlags solver;
  };
  auto f = std::make_shared<Flags>();
  CLI::App* c = app.add_subcommand("sweep", "R^2 of transferability on distance over the weight simplex");
  c->add_option("--source", f->sources, "source dataset file (repeat, >= 3)")->required();
  c->add_option("--target", f->target, "target dataset file")->required();
  c->add_option("--resolution", f->resolution, "simplex grid resolution")->capture_default_str();
  c->add_option("--out", f->out, "output table (default: stdout)");
  c->add_option("--distances-out", f->distances_out, "also write the per-source distances here");
  f->training.add(c);
  f->solver.add(c);

  return [f]() {
    if (f->sources.size() < 3) throw UsageError("sweep needs at least 3 --source files");
    if (f->resolution < 1) throw UsageError("--resolution must be >= 1");
    const TrainingOptions training = f->training.options();
    const SolverSpec solver = f->solver.spec();
    const CostMode mode = f->solver.cost_mode();
    const PtODataset target = load(f->target);
    const PredictiveModel target_model = train_regret_min(target.task, target, training);
    TransferOptions opt;
    opt.training = training;
    opt.solver = solver;
    opt.mode = mode;

    std::vector<PtODataset> sources;
    std::vector<std::string> ids;
    std::vector<TransferRecord> records;
    for (const auto& path : f->sources) {
      sources.push_back(load(path));
      require_same_task(sources.back(), target);
      ids.push_back(dataset_id(path));
      records.push_back(regret_transferability(sources.back(), target, target_model, opt, ids.back(),
                                               dataset_id(f->target)));
    }
    const auto [transfer, defined] = transfer_responses(records);
    if (!defined) {
      std::cerr << "warning: target-trained model has zero regret, regressing on negated excess regret\n";
    }
    const auto rows = weight_sweep(sources, target, transfer, f->resolution, solver, mode);
    CsvWriter out(f->out, {"alpha_x", "alpha_y", "alpha_w", "r2"});
    for (const auto& r : rows) {
      out.cell(r.weights.alpha_x).cell(r.weights.alpha_y).cell(r.weights.alpha_w);
      if (r.r2) {
        out.cell(*r.r2);
      } else {
        out.empty();
      }
      out.end_row();
    }
    if (!f->distances_out.empty()) {
      CsvWriter d(f->distances_out, {"alpha_x", "alpha_y", "alpha_w", "source_id", "response",
                                     "distance"});
      for (const auto& r : rows) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
          d.cell(r.weights.alpha_x).cell(r.weights.alpha_y).cell(r.weights.alpha_w);
          d.cell(ids[i]).cell(transfer[i]).cell(r.distances[i]);
          d.end_row();
        }
      }
    }
    return static_cast<int>(kOk);
  };
}

Command add_bound(CLI::App& app) {
  struct Flags {
    std::string source, target, out, lambdas = "0.5,1,2,4";
    std::optional<double> k1, k2, lipschitz, radius;
    std::size_t trials = 2000;
    double safety = 1.5;
    TrainingFlags training;
  };
  auto f = std::make_shared<Flags>();
  CLI::App* c = app.add_subcommand("bound", "Evaluate the target-regret adaptation bound");
  c->add_option("--source", f->source, "source dataset file")->required();
  c->add_option("--target", f->target, "target dataset file")->required();
  c->add_option("--lambda", f->lambdas, "comma-separated lambda values")->capture_default_str();
  c->add_option("--k1", f->k1, "override the probed k1");
  c->add_option("--k2", f->k2, "override the probed k2");
  c->add_option("--trials", f->trials, "Lipschitz probe trials")->capture_default_str();
  c->add_option("--safety", f->safety, "factor applied to probed constants")->capture_default_str();
  c->add_option("--lipschitz", f->lipschitz, "Lipschitz constant of the joint predictor (strict variant)");
  c->add_option("--radius", f->radius, "feature-space radius (strict variant)");
  c->add_option("--out", f->out, "output table (default: stdout)");
  f->training.add(c);

  return [f]() {
    const auto lambdas = parse_list(f->lambdas);
    for (double l : lambdas) {
      if (!(l > 0.0)) throw UsageError("--lambda values must be > 0");
    }
    if (f->lipschitz.has_value() != f->radius.has_value()) {
      throw UsageError("--lipschitz and --radius go together");
    }
    const TrainingOptions training = f->training.options();
    const PtODataset source = load(f->source), target = load(f->target);
    require_same_task(source, target);
    const PredictiveModel model = train_regret_min(source.task, source, training);
    const PtODataset joint = concatenate(source, target);
    const PredictiveModel joint_model = train_regret_min(joint.task, joint, training);
    const std::vector<PredictiveModel> models{model, joint_model};
    auto [k1, k2] = empirical_lipschitz(source.task, models, source, target, f->trials, training.seed,
                                        f->safety);
    if (f->k1) k1 = *f->k1;
    if (f->k2) k2 = *f->k2;
    std::optional<StrictLipschitz> strict;
    if (f->lipschitz) strict = StrictLipschitz{*f->lipschitz, *f->radius};

    CsvWriter out(f->out, {});
    write_bound_header(out);
    bool all_hold = true;
    for (double l : lambdas) {
      const BoundReport r = evaluate_bound(source.task, model, joint_model, source, target, l, k1, k2, strict);
      all_hold = all_hold && r.holds;
      write_bound_row(out, {dataset_id(f->source), dataset_id(f->target)}, r);
    }
    return static_cast<int>(all_hold ? kOk : kBoundViolated);
  };
}

}  // namespace cli
