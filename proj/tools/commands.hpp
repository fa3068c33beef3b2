#pragma once

#include <functional>

#include "CLI11.hpp"

namespace cli {

using Command = std::function<int()>;

Command add_gen(CLI::App& app);
Command add_dist(CLI::App& app);
Command add_transfer(CLI::App& app);
Command add_sweep(CLI::App& app);
Command add_bound(CLI::App& app);
/// Takes the rest of the command line; flags may also come from --config.
Command add_repro(CLI::App& app);

}  // namespace cli
