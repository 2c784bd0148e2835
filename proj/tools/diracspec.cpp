// diracspec: spectra, classification and basis diagnostics for 2x2
// Dirac-type boundary value problems.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dirac/cli.hpp"

namespace cli = dirac::cli;

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit for 2x2 Dirac-type boundary value problems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "json";
  cli::RunOptions opts;
  int window = 0;
  int grid = 0;

  for (const char* name : {"classify", "spectrum", "bari", "string"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "problem configuration (JSON)")->required();
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--perturbed", opts.perturbed, "use the potential from the config");
    sub->add_option("--p", opts.p, "closeness exponent in [1, 2]");
    sub->add_option("--window", window, "symmetric index window |n| <= N");
    sub->add_option("--grid", grid, "grid points on [0, 1]");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitConfig;
  }

  try {
    if (window != 0) opts.window = window;
    if (grid != 0) opts.grid = grid;
    const std::string command = app.get_subcommands().front()->get_name();
    const cli::ProblemConfig cfg = cli::apply_options(cli::load_config(config_path), opts);
    const cli::json result = cli::run_command(command, cfg, opts);
    const std::string text = format == "csv" ? cli::to_csv(result) : result.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      if (!out) throw cli::CliError(cli::kExitConfig, "cannot write '" + out_path + "'");
      out << text;
    }
    return 0;
  } catch (const cli::CliError& e) {
    std::cerr << "diracspec: " << e.what() << "\n";
    return e.code();
  } catch (const dirac::SpectralError& e) {
    std::cerr << "diracspec: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return cli::exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "diracspec: " << e.what() << "\n";
    return cli::kExitPanic;
  }
}
