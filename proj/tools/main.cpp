// toravg command line tool: runs scenario files and emits JSON reports.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "toravg/errors.hpp"
#include "toravg/scenario.hpp"
#include "toravg/verification.hpp"

int main(int argc, char** argv) {
  CLI::App app{"toravg: vertical averaging, symplectic field decomposition and "
               "Hamiltonian normal forms on T^d x B"};
  app.require_subcommand(0, 1);

  bool list_tasks = false;
  app.add_flag("--list-tasks", list_tasks, "List scenario task kinds and exit");

  std::string scenario_path;
  std::string out_path;
  double tol_scale = 1.0;
  std::uint64_t seed = 42;

  CLI::App* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("file", scenario_path, "Scenario file")->required();
  run->add_option("--out", out_path, "Write the JSON report to this path (default: stdout)");
  run->add_option("--tol-scale", tol_scale, "Uniform tolerance multiplier");
  run->add_option("--seed", seed, "Seed for property-suite randomness");

  CLI11_PARSE(app, argc, argv);

  if (list_tasks) {
    std::cout << "task kinds:\n";
    for (const auto& [kind, description] : toravg::task_kinds())
      std::cout << "  " << kind << "\n      " << description << "\n";
    std::cout << "property-suite names:\n ";
    for (const auto& name : toravg::suite_names()) std::cout << " " << name;
    std::cout << "\n";
    return 0;
  }

  if (!run->parsed()) {
    std::cerr << app.help();
    return 2;
  }

  try {
    const toravg::ScenarioFile file = toravg::parse_scenario_file(scenario_path);
    toravg::RunOptions options;
    options.seed = seed;
    options.tol_scale = tol_scale;
    const toravg::RunOutcome outcome = toravg::run_scenario(file, options);

    if (out_path.empty()) {
      std::cout << outcome.report_json;
    } else {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return 2;
      }
      out << outcome.report_json;
      std::cerr << "report written to " << out_path << "\n";
    }
    return outcome.pass ? 0 : 1;
  } catch (const toravg::ParseError& e) {
    std::cerr << "parse error at line " << e.line() << ", column " << e.column() << ": "
              << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
