#include "cli_common.hpp"

#include <filesystem>
#include <sstream>

namespace cli {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header) {
  if (path.empty() || path == "-") {
    out_ = &std::cout;
  } else {
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw ptodist::DataError("cannot open '" + path + "' for writing");
    out_ = &file_;
  }
  if (header.empty()) return;
  for (const auto& h : header) cell(h);
  end_row();
}

CsvWriter& CsvWriter::cell(const std::string& text) {
  if (!first_) *out_ << ',';
  *out_ << text;
  first_ = false;
  return *this;
}

CsvWriter& CsvWriter::cell(double value) { return cell(ptodist::io::format_number(value)); }

CsvWriter& CsvWriter::cell(std::size_t value) { return cell(std::to_string(value)); }

CsvWriter& CsvWriter::empty() { return cell(std::string{}); }

void CsvWriter::end_row() {
  *out_ << '\n';
  first_ = true;
  if (!*out_) throw ptodist::DataError("failed writing table");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw UsageError("not a number: '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

ptodist::GroundCostWeights parse_alpha(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 3) throw UsageError("--alpha takes three comma-separated weights");
  try {
    return ptodist::GroundCostWeights::make(v[0], v[1], v[2]);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--alpha: ") + e.what());
  }
}

ptodist::SolverSpec make_solver(const std::string& name, double epsilon) {
  if (name == "exact") return ptodist::SolverSpec::exact();
  if (name == "sinkhorn") {
    if (!(epsilon > 0.0)) throw UsageError("--epsilon must be > 0");
    return ptodist::SolverSpec::sinkhorn(epsilon);
  }
  throw UsageError("unknown solver '" + name + "'");
}

ptodist::PtODataset load(const std::string& path) { return ptodist::io::read_dataset(path); }

std::string dataset_id(const std::string& path) {
  return std::filesystem::path(path).filename().string();
}

ptodist::PtODataset concatenate(const ptodist::PtODataset& a, const ptodist::PtODataset& b) {
  ptodist::require_same_task(a, b);
  ptodist::PtODataset joint = a;
  joint.samples.insert(joint.samples.end(), b.samples.begin(), b.samples.end());
  joint.provenance.generator = "joint";
  return joint;
}

void write_bound_header(CsvWriter& w) {
  for (const char* h : {"source_id", "target_id", "lambda", "k1", "k2", "alpha_x", "alpha_y", "alpha_w",
                        "lhs", "joint_regret_source", "joint_regret_target", "lipschitz_term",
                        "ot_term", "rhs", "phi", "lipschitz_range", "distance", "holds",
                        "strict_lipschitz_term", "holds_strict"}) {
    w.cell(std::string(h));
  }
  w.end_row();
}

void write_bound_row(CsvWriter& w, const BoundRowContext& ctx, const ptodist::BoundReport& r) {
  w.cell(ctx.source_id).cell(ctx.target_id).cell(r.lambda).cell(r.k1).cell(r.k2);
  w.cell(r.weights.alpha_x).cell(r.weights.alpha_y).cell(r.weights.alpha_w);
  w.cell(r.lhs).cell(r.joint_regret_source).cell(r.joint_regret_target).cell(r.lipschitz_term);
  w.cell(r.ot_term).cell(r.rhs()).cell(r.phi).cell(r.lipschitz_range).cell(r.distance);
  w.cell(std::string(r.holds ? "true" : "false"));
  if (r.strict_lipschitz_term) {
    w.cell(*r.strict_lipschitz_term).cell(std::string(*r.holds_strict ? "true" : "false"));
  } else {
    w.empty().empty();
  }
  w.end_row();
}

}  // namespace cli
