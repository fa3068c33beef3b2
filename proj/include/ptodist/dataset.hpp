#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ptodist/tasks.hpp"

namespace ptodist {

/// One complete optimization instance: features, true labels, and the
/// decision attached to it.
struct Sample {
  Vector x;
  Vector y;
  Vector z;

  bool operator==(const Sample&) const = default;
};

struct Provenance {
  std::string generator;
  std::map<std::string, std::string> parameters;  // includes seeds

  bool operator==(const Provenance&) const = default;
};

/// Empirical distribution over feature-label-decision triples; uniform weights.
struct PtODataset {
  TaskDefinition task;
  std::vector<Sample> samples;
  Provenance provenance;

  std::size_t size() const { return samples.size(); }
  bool operator==(const PtODataset& other) const {
    return task == other.task && samples == other.samples && provenance == other.provenance;
  }

  /// Throws DataError on an empty sample list, inconsistent dimensions,
  /// invalid labels, infeasible decisions, or empty provenance.
  void validate() const;
};

/// Throws DataError unless both datasets are nonempty and share the task.
void require_same_task(const PtODataset& a, const PtODataset& b);

}  // namespace ptodist
