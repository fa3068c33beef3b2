#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptodist/dataset_io.hpp"
#include "ptodist/error.hpp"
#include "ptodist/ground_cost.hpp"
#include "ptodist/transfer.hpp"

namespace cli {

/// Bad flag combinations detected after parsing; exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3, kBoundViolated = 4 };

/// Comma-separated table with one header row, numbers at 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  CsvWriter& cell(const std::string& text);
  CsvWriter& cell(double value);
  CsvWriter& cell(std::size_t value);
  CsvWriter& empty();
  void end_row();

 private:
  std::ofstream file_;
  std::ostream* out_;
  bool first_ = true;
};

std::vector<double> parse_list(const std::string& text);
ptodist::GroundCostWeights parse_alpha(const std::string& text);
ptodist::SolverSpec make_solver(const std::string& name, double epsilon);
ptodist::PtODataset load(const std::string& path);

/// Dataset identifier used in tables: the file name without directories.
std::string dataset_id(const std::string& path);

/// Training data of the joint predictor: both datasets concatenated.
ptodist::PtODataset concatenate(const ptodist::PtODataset& a, const ptodist::PtODataset& b);

struct BoundRowContext {
  std::string source_id;
  std::string target_id;
};
void write_bound_header(CsvWriter& w);
void write_bound_row(CsvWriter& w, const BoundRowContext& ctx, const ptodist::BoundReport& r);

}  // namespace cli
