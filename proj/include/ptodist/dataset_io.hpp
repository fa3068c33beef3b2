#pragma once

// Line-delimited dataset files. The first line is a header object holding the
// task definition and provenance; every following line is one sample
// {"x": [...], "y": [...], "z": [...]}. Numbers are written with 17
// significant digits so read(write(D)) reproduces D bit for bit.

#include <iosfwd>
#include <string>

#include "ptodist/dataset.hpp"

namespace ptodist::io {

/// Decimal text that parses back to exactly the same double.
std::string format_number(double v);

void write_dataset(const PtODataset& dataset, std::ostream& out);
void write_dataset(const PtODataset& dataset, const std::string& path);

/// Throws DataError naming the line and field on malformed input.
PtODataset read_dataset(std::istream& in);
PtODataset read_dataset(const std::string& path);

}  // namespace ptodist::io
