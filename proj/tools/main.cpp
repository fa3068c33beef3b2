#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "cli_common.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Decision-aware dataset distances for predict-then-optimize tasks", "ptodist"};
  app.require_subcommand(1);
  std::map<std::string, cli::Command> commands{
      {"gen", cli::add_gen(app)},           {"dist", cli::add_dist(app)},
      {"transfer", cli::add_transfer(app)}, {"sweep", cli::add_sweep(app)},
      {"bound", cli::add_bound(app)},       {"repro", cli::add_repro(app)},
  };
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return commands.at(name)();
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const ptodist::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return cli::kData;
  } catch (const ptodist::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return cli::kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kData;
  }
}
