#include "ptodist/dataset.hpp"

#include <stdexcept>

#include "ptodist/error.hpp"

namespace ptodist {

void PtODataset::validate() const {
  if (samples.empty()) throw DataError("dataset must contain at least one sample");
  if (provenance.generator.empty()) throw DataError("dataset provenance is empty");
  const std::size_t x_dim = samples.front().x.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    const std::string where = "sample " + std::to_string(i) + ": ";
    if (s.x.empty() || s.y.empty() || s.z.empty()) throw DataError(where + "empty x, y or z");
    if (s.x.size() != x_dim) throw DataError(where + "feature dimension differs from sample 0");
    try {
      tasks::validate_labels(task, s.y);
    } catch (const std::invalid_argument& e) {
      throw DataError(where + e.what());
    }
    if (!tasks::validate_decision(task, s.z)) {
      throw DataError(where + "decision is infeasible for task " + to_string(task.kind()));
    }
  }
}

void require_same_task(const PtODataset& a, const PtODataset& b) {
  if (a.samples.empty() || b.samples.empty()) {
    throw DataError("dataset must contain at least one sample");
  }
  if (a.task.kind() != b.task.kind()) {
    throw DataError("task family mismatch: " + to_string(a.task.kind()) + " vs " +
                    to_string(b.task.kind()));
  }
  if (!(a.task == b.task)) throw DataError("task parameters differ between datasets");
  if (a.samples.front().x.size() != b.samples.front().x.size()) {
    throw DataError("feature dimensions differ between datasets");
  }
}

}  // namespace ptodist
