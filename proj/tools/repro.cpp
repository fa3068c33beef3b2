#include <algorithm>
#include <filesystem>
#include <tuple>
#include <iostream>
#include <memory>

#include "cli_common.hpp"
#include "commands.hpp"
#include "ptodist/datagen.hpp"

namespace cli {

using namespace ptodist;

namespace {

struct ReproConfig {
  std::string out_dir = "repro_out";
  std::uint64_t seed = 0;
  std::vector<std::string> stages{"fig1", "fig2", "fig4", "fig5"};
  std::vector<std::string> families{"topk", "grid", "inventory"};

  std::size_t instances = 50;
  std::size_t sources = 10;
  std::size_t resolution = 10;
  std::size_t budget = 5000;
  std::size_t restarts = 5;
  std::string solver = "exact";
  double epsilon = 0.01;
  std::string mode = "as-written";

  std::size_t resources = 25;
  std::size_t k = 1;
  double gamma_max = 1.3;
  double target_gamma = 0.65;
  double gamma_a = 0.0;
  double gamma_b = 1.2;

  std::size_t grid_side = 12;
  std::size_t grid_classes = 5;
  std::size_t inventory_features = 4;

  std::size_t correlation_pairs = 2000;
  double length_penalty = 5.0;
  std::vector<double> fig5_alpha{0.25, 0.25, 0.5};
};

// "--grid-side" is also reachable as "grid_side" in config files.
std::string names(const std::string& flag) {
  std::string alias = flag;
  std::replace(alias.begin(), alias.end(), '-', '_');
  return "--" + flag + ",--" + alias;
}

void register_options(CLI::App& app, ReproConfig& c) {
  app.set_config("--config", "", "flat key = value file; flags given on the command line win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.add_option(names("out-dir"), c.out_dir, "directory for all tables")->capture_default_str();
  app.add_option("--seed", c.seed, "base seed of every generator and trainer")->capture_default_str();
  app.add_option("--stages", c.stages, "subset of fig1 fig2 fig4 fig5")->delimiter(',')->capture_default_str();
  app.add_option("--families", c.families, "fig2 settings: topk grid inventory")->delimiter(',')
      ->capture_default_str();
  app.add_option("--instances", c.instances)->capture_default_str();
  app.add_option("--sources", c.sources, "source datasets per sweep")->capture_default_str();
  app.add_option("--resolution", c.resolution)->capture_default_str();
  app.add_option("--budget", c.budget)->capture_default_str();
  app.add_option("--restarts", c.restarts)->capture_default_str();
  app.add_option("--solver", c.solver)->capture_default_str();
  app.add_option("--epsilon", c.epsilon)->capture_default_str();
  app.add_option("--mode", c.mode)->capture_default_str();
  app.add_option("--resources", c.resources)->capture_default_str();
  app.add_option("--k", c.k)->capture_default_str();
  app.add_option(names("gamma-max"), c.gamma_max)->capture_default_str();
  app.add_option(names("target-gamma"), c.target_gamma)->capture_default_str();
  app.add_option(names("gamma-a"), c.gamma_a)->capture_default_str();
  app.add_option(names("gamma-b"), c.gamma_b)->capture_default_str();
  app.add_option(names("grid-side"), c.grid_side)->capture_default_str();
  app.add_option(names("grid-classes"), c.grid_classes)->capture_default_str();
  app.add_option(names("inventory-features"), c.inventory_features)->capture_default_str();
  app.add_option(names("correlation-pairs"), c.correlation_pairs)->capture_default_str();
  app.add_option(names("length-penalty"), c.length_penalty, "fig5: per-cell penalty of the second task")
      ->capture_default_str();
  app.add_option(names("fig5-alpha"), c.fig5_alpha)->expected(3)->delimiter(',')->capture_default_str();
}

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

struct Setting {
  std::string name;
  PtODataset target;
  std::vector<PtODataset> sources;
  std::vector<std::string> ids;
};

datagen::GridGenOptions grid_options(const ReproConfig& c, std::uint64_t cost_seed, double penalty) {
  datagen::GridGenOptions o;
  o.class_cost_seed = cost_seed;
  o.map_seed = c.seed + 7;
  o.side = c.grid_side;
  o.n_classes = c.grid_classes;
  o.n_instances = c.instances;
  o.length_penalty = penalty;
  return o;
}

Setting make_setting(const ReproConfig& c, const std::string& family, double penalty = 0.0) {
  Setting s;
  s.name = family;
  if (family == "topk") {
    s.target = datagen::gen_topk(c.target_gamma, c.resources, c.instances, c.k, c.seed + 3);
    for (std::size_t i = 0; i < c.sources; ++i) {
      const double gamma = c.sources > 1 ? c.gamma_max * static_cast<double>(i) /
                                               static_cast<double>(c.sources - 1)
                                         : 0.0;
      s.sources.push_back(datagen::gen_topk(gamma, c.resources, c.instances, c.k, c.seed + 100 + i));
      s.ids.push_back("gamma=" + s.sources.back().provenance.parameters.at("gamma"));
    }
  } else if (family == "grid") {
    s.target = datagen::gen_grid(grid_options(c, c.seed, penalty));
    for (std::size_t i = 0; i < c.sources; ++i) {
      s.sources.push_back(datagen::gen_grid(grid_options(c, c.seed + 1 + i, penalty)));
      s.ids.push_back("cost_seed=" + std::to_string(c.seed + 1 + i));
    }
  } else if (family == "inventory") {
    auto opts = [&](std::uint64_t shift) {
      datagen::InventoryGenOptions o;
      o.mean_shift_seed = c.seed + shift;
      o.theta_seed = c.seed + 1000 + shift;
      o.n_features = c.inventory_features;
      o.n_instances = c.instances;
      return o;
    };
    s.target = datagen::gen_inventory(opts(0));
    for (std::size_t i = 0; i < c.sources; ++i) {
      s.sources.push_back(datagen::gen_inventory(opts(1 + i)));
      s.ids.push_back("shift_seed=" + std::to_string(c.seed + 1 + i));
    }
  } else {
    throw UsageError("unknown family '" + family + "'");
  }
  return s;
}

std::string path_in(const ReproConfig& c, const std::string& name) {
  return (std::filesystem::path(c.out_dir) / name).string();
}

TrainingOptions training(const ReproConfig& c) {
  if (c.budget < 1 || c.restarts < 1) throw UsageError("--budget and --restarts must be >= 1");
  TrainingOptions t;
  t.budget = c.budget;
  t.restarts = c.restarts;
  t.seed = c.seed;
  return t;
}

void run_fig1(const ReproConfig& c) {
  const TrainingOptions t = training(c);
  const SolverSpec solver = make_solver(c.solver, c.epsilon);
  const PtODataset a = datagen::gen_topk(c.gamma_a, c.resources, c.instances, c.k, c.seed + 1);
  const PtODataset b = datagen::gen_topk(c.gamma_b, c.resources, c.instances, c.k, c.seed + 2);
  const PtODataset target = datagen::gen_topk(c.target_gamma, c.resources, c.instances, c.k, c.seed + 3);
  const std::vector<GroundCostWeights> weights{{0.5, 0.5, 0.0}, {0.0, 0.0, 1.0}, {0.5, 0.0, 0.5},
                                               GroundCostWeights{}};
  CsvWriter out(path_in(c, "fig1_motivating.csv"),
                {"source_id", "gamma", "regret_on_target", "alpha_x", "alpha_y", "alpha_w", "distance"});
  for (const auto& [id, src, gamma] : {std::tuple{"A", &a, c.gamma_a}, std::tuple{"B", &b, c.gamma_b}}) {
    const PredictiveModel m = train_regret_min(src->task, *src, t);
    const double regret = mean_regret(target.task, m, target);
    const ComponentMatrices parts = component_matrices(*src, target, parse_cost_mode(c.mode));
    for (const auto& w : weights) {
      out.cell(std::string(id)).cell(gamma).cell(regret);
      out.cell(w.alpha_x).cell(w.alpha_y).cell(w.alpha_w);
      out.cell(solve_distance(parts.combine(w), solver).distance);
      out.end_row();
    }
  }
}

std::vector<TransferRecord> transfer_table(const ReproConfig& c, const Setting& s, const std::string& file,
                                           const GroundCostWeights& w) {
  TransferOptions opt;
  opt.training = training(c);
  opt.solver = make_solver(c.solver, c.epsilon);
  opt.mode = parse_cost_mode(c.mode);
  opt.weights = w;
  const PredictiveModel target_model = train_regret_min(s.target.task, s.target, opt.training);
  CsvWriter out(path_in(c, file), {"source_id", "target_id", "distance", "alpha_x", "alpha_y", "alpha_w",
                                   "transferability", "regret_source_on_target",
                                   "regret_target_on_target", "excess_regret", "distance_feature_label"});
  std::vector<TransferRecord> records;
  for (std::size_t i = 0; i < s.sources.size(); ++i) {
    const TransferRecord r =
        regret_transferability(s.sources[i], s.target, target_model, opt, s.ids[i], "target");
    const double d_fl = decision_aware_distance(s.sources[i], s.target, GroundCostWeights{0.5, 0.5, 0.0},
                                                opt.solver, opt.mode)
                            .distance;
    out.cell(r.source_id).cell(r.target_id).cell(r.distance);
    out.cell(w.alpha_x).cell(w.alpha_y).cell(w.alpha_w);
    if (r.transferability) {
      out.cell(*r.transferability);
    } else {
      out.empty();
    }
    out.cell(r.regret_source_on_target).cell(r.regret_target_on_target).cell(r.excess_regret).cell(d_fl);
    out.end_row();
    records.push_back(r);
  }
  return records;
}

void run_fig2(const ReproConfig& c) {
  for (const auto& family : c.families) {
    const Setting s = make_setting(c, family);
    const auto records = transfer_table(c, s, "fig2_" + family + "_transfer.csv", GroundCostWeights{});
    if (records.size() < 3) {
      std::cerr << "fig2 " << family << ": fewer than 3 sources, sweep skipped\n";
      continue;
    }
    const auto [response, defined] = transfer_responses(records);
    std::string file = "fig2_" + family + "_sweep.csv";
    if (!defined) {
      std::cerr << "fig2 " << family << ": target-trained model has zero regret, sweep regresses on "
                << "negated excess regret\n";
      file = "fig2_" + family + "_sweep_excess.csv";
    }
    std::vector<SweepRow> rows;
    try {
      rows = weight_sweep(s.sources, s.target, response, c.resolution, make_solver(c.solver, c.epsilon),
                          parse_cost_mode(c.mode));
    } catch (const std::invalid_argument& e) {
      std::cerr << "fig2 " << family << ": " << e.what() << ", sweep skipped\n";
      continue;
    }
    CsvWriter out(path_in(c, file), {"alpha_x", "alpha_y", "alpha_w", "r2"});
    for (const auto& r : rows) {
      out.cell(r.weights.alpha_x).cell(r.weights.alpha_y).cell(r.weights.alpha_w);
      if (r.r2) {
        out.cell(*r.r2);
      } else {
        out.empty();
      }
      out.end_row();
    }
  }
}

void run_fig4(const ReproConfig& c) {
  CsvWriter summary(path_in(c, "fig4_correlation.csv"), {"family", "pairs", "pearson"});
  for (const std::string family : {"grid", "inventory"}) {
    const Setting s = make_setting(c, family);
    std::vector<PtODataset> pool = s.sources;
    pool.push_back(s.target);
    const auto pairs = label_decision_pairs(pool, c.correlation_pairs, c.seed);
    CsvWriter detail(path_in(c, "fig4_" + family + "_pairs.csv"), {"label_distance", "decision_disparity"});
    for (const auto& [dy, lg] : pairs) {
      detail.cell(dy).cell(lg);
      detail.end_row();
    }
    summary.cell(family).cell(pairs.size());
    try {
      summary.cell(pearson(pairs));
    } catch (const std::invalid_argument& e) {
      std::cerr << "fig4 " << family << ": " << e.what() << ", correlation left empty\n";
      summary.empty();
    }
    summary.end_row();
  }
}

void run_fig5(const ReproConfig& c) {
  GroundCostWeights w;
  try {
    w = GroundCostWeights::make(c.fig5_alpha[0], c.fig5_alpha[1], c.fig5_alpha[2]);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--fig5-alpha: ") + e.what());
  }
  for (double penalty : {0.0, c.length_penalty}) {
    const Setting s = make_setting(c, "grid", penalty);
    transfer_table(c, s, "fig5_grid_penalty_" + io::format_number(penalty) + ".csv", w);
  }
}

}  // namespace

Command add_repro(CLI::App& app) {
  CLI::App* c = app.add_subcommand("repro", "Run the experiment pipelines from one config file");
  c->prefix_command();
  c->set_help_flag();
  return [c]() {
    ReproConfig cfg;
    CLI::App parser("Run the experiment pipelines from one config file", "ptodist repro");
    register_options(parser, cfg);
    auto rest = c->remaining();
    std::reverse(rest.begin(), rest.end());
    try {
      parser.parse(rest);
    } catch (const CLI::CallForHelp& e) {
      parser.exit(e);
      return static_cast<int>(kOk);
    } catch (const CLI::ParseError& e) {
      parser.exit(e);
      return static_cast<int>(kUsage);
    }
    for (const auto& stage : cfg.stages) {
      if (!has({"fig1", "fig2", "fig4", "fig5"}, stage)) throw UsageError("unknown stage '" + stage + "'");
    }
    try {
      parse_cost_mode(cfg.mode);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    std::filesystem::create_directories(cfg.out_dir);
    if (has(cfg.stages, "fig1")) run_fig1(cfg);
    if (has(cfg.stages, "fig2")) run_fig2(cfg);
    if (has(cfg.stages, "fig4")) run_fig4(cfg);
    if (has(cfg.stages, "fig5")) run_fig5(cfg);
    std::cout << "tables written to " << cfg.out_dir << '\n';
    return static_cast<int>(kOk);
  };
}

}  // namespace cli
