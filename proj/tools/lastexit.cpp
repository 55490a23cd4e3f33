#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lastexit/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Last exit time transforms for spectrally negative Levy processes"};
  app.require_subcommand(1);
  std::string scenario, out_path;
  unsigned threads = 1;
  for (const char* name : {"eval", "validate", "sweep"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("scenario", scenario, "scenario JSON file")->required();
    sub->add_option("--out", out_path, "write CSV here instead of stdout");
    sub->add_option("--threads", threads, "Monte Carlo worker threads")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : lastexit::cli::kParse;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "cannot write '" << out_path << "'\n";
      return lastexit::cli::kParse;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  const std::string cmd = app.get_subcommands().front()->get_name();
  if (cmd == "eval") return lastexit::cli::cmd_eval(scenario, out, std::cerr);
  if (cmd == "sweep") return lastexit::cli::cmd_sweep(scenario, out, std::cerr);
  return lastexit::cli::cmd_validate(scenario, out, std::cerr, threads);
}
