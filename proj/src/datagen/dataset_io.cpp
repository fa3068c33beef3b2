#include "ptodist/dataset_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "ptodist/error.hpp"

namespace ptodist::io {

using nlohmann::json;

std::string format_number(double v) {
  // "-0" would come back from the parser as the integer 0.
  if (v == 0.0 && std::signbit(v)) return "-0.0";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

constexpr const char* kFormatTag = "ptodist-dataset";

void write_array(std::ostream& out, const Vector& v) {
  out << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << format_number(v[i]);
  }
  out << ']';
}

json task_to_json(const TaskDefinition& task) {
  json t;
  t["kind"] = to_string(task.kind());
  switch (task.kind()) {
    case TaskKind::topk:
      t["n_resources"] = task.topk_params().n_resources;
      t["k"] = task.topk_params().k;
      break;
    case TaskKind::shortest_path: {
      const auto& g = task.grid_params();
      t["side"] = g.side;
      t["neighborhood"] = static_cast<int>(g.neighborhood);
      t["count_start"] = g.count_start;
      t["length_penalty"] = format_number(g.length_penalty);
      t["n_classes"] = g.n_classes;
      break;
    }
    case TaskKind::inventory: {
      const auto& inv = task.inventory_params();
      const auto& c = inv.costs;
      t["costs"] = {{"c0", format_number(c.c0)}, {"q0", format_number(c.q0)},
                    {"cb", format_number(c.cb)}, {"qb", format_number(c.qb)},
                    {"ch", format_number(c.ch)}, {"qh", format_number(c.qh)}};
      std::vector<std::string> demands;
      for (double d : inv.demands) demands.push_back(format_number(d));
      t["demands"] = demands;
      break;
    }
  }
  return t;
}

// Task numbers are stored as decimal strings so they share the 17-digit
// representation of the sample arrays.
double number_field(const json& obj, const char* key) {
  const json& v = obj.at(key);
  if (v.is_string()) return std::stod(v.get<std::string>());
  return v.get<double>();
}

TaskDefinition task_from_json(const json& t) {
  const TaskKind kind = parse_task_kind(t.at("kind").get<std::string>());
  switch (kind) {
    case TaskKind::topk:
      return TaskDefinition::topk(t.at("n_resources").get<std::size_t>(),
                                  t.at("k").get<std::size_t>());
    case TaskKind::shortest_path: {
      GridParams g;
      g.side = t.at("side").get<std::size_t>();
      const int nb = t.at("neighborhood").get<int>();
      if (nb != 4 && nb != 8) throw std::invalid_argument("neighborhood must be 4 or 8");
      g.neighborhood = nb == 4 ? Neighborhood::four : Neighborhood::eight;
      g.count_start = t.at("count_start").get<bool>();
      g.length_penalty = number_field(t, "length_penalty");
      g.n_classes = t.at("n_classes").get<std::size_t>();
      return TaskDefinition::shortest_path(g);
    }
    case TaskKind::inventory: {
      const json& c = t.at("costs");
      InventoryParams p;
      p.c0 = number_field(c, "c0");
      p.q0 = number_field(c, "q0");
      p.cb = number_field(c, "cb");
      p.qb = number_field(c, "qb");
      p.ch = number_field(c, "ch");
      p.qh = number_field(c, "qh");
      Vector demands;
      for (const auto& d : t.at("demands")) {
        demands.push_back(d.is_string() ? std::stod(d.get<std::string>()) : d.get<double>());
      }
      return TaskDefinition::inventory(p, std::move(demands));
    }
  }
  throw std::invalid_argument("unknown task kind");
}

Vector read_array(const json& record, const char* field, std::size_t line) {
  if (!record.contains(field)) {
    throw DataError("line " + std::to_string(line) + ": record " + std::to_string(line - 1) +
                    " is missing field \"" + field + "\"");
  }
  const json& arr = record.at(field);
  if (!arr.is_array() || arr.empty()) {
    throw DataError("line " + std::to_string(line) + ": field \"" + field +
                    "\" must be a nonempty array of numbers");
  }
  Vector v;
  v.reserve(arr.size());
  for (const auto& e : arr) {
    if (!e.is_number()) {
      throw DataError("line " + std::to_string(line) + ": field \"" + field +
                      "\" contains a non-number");
    }
    v.push_back(e.get<double>());
  }
  return v;
}

}  // namespace

void write_dataset(const PtODataset& dataset, std::ostream& out) {
  json header;
  header["format"] = kFormatTag;
  header["version"] = 1;
  header["task"] = task_to_json(dataset.task);
  header["provenance"] = {{"generator", dataset.provenance.generator},
                          {"parameters", dataset.provenance.parameters}};
  out << header.dump() << '\n';
  for (const Sample& s : dataset.samples) {
    out << "{\"x\":";
    write_array(out, s.x);
    out << ",\"y\":";
    write_array(out, s.y);
    out << ",\"z\":";
    write_array(out, s.z);
    out << "}\n";
  }
}

void write_dataset(const PtODataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  write_dataset(dataset, out);
  if (!out) throw DataError("failed writing '" + path + "'");
}

PtODataset read_dataset(std::istream& in) {
  PtODataset d;
  std::string text;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      throw DataError("line " + std::to_string(line) + ": not a JSON object (" + e.what() + ")");
    }
    if (!record.is_object()) throw DataError("line " + std::to_string(line) + ": not a JSON object");
    if (!have_header) {
      try {
        if (record.value("format", std::string{}) != kFormatTag) {
          throw DataError("line 1: header field \"format\" must be \"" + std::string(kFormatTag) + "\"");
        }
        d.task = task_from_json(record.at("task"));
        const json& prov = record.at("provenance");
        d.provenance.generator = prov.at("generator").get<std::string>();
        d.provenance.parameters =
            prov.at("parameters").get<std::map<std::string, std::string>>();
      } catch (const DataError&) {
        throw;
      } catch (const std::exception& e) {
        throw DataError("line " + std::to_string(line) + ": bad header field (" + e.what() + ")");
      }
      have_header = true;
      continue;
    }
    Sample s;
    s.x = read_array(record, "x", line);
    s.y = read_array(record, "y", line);
    s.z = read_array(record, "z", line);
    d.samples.push_back(std::move(s));
  }
  if (!have_header) throw DataError("line 1: missing header record");
  d.validate();
  return d;
}

PtODataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return read_dataset(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace ptodist::io
