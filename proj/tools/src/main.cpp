#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fhnvs_cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Steady states of heterogeneous FitzHugh-Nagumo systems"};
  app.require_subcommand(1);
  fhnvs::cli::CommandOptions opts;
  std::string config;
  std::string out;
  double s = 0.0;
  std::vector<double> ladder;
  std::string solution;
  const std::map<std::string, std::string> about{
      {"check-coeffs", "Certify a coefficient set and report its spectral data"},
      {"lambda1", "Principal eigenvalue of -Δ + σ for a chosen coefficient"},
      {"nu-s", "Exterior eigenvalue ν_s over shifted balls"},
      {"solve-mp", "Mountain-pass solution"},
      {"solve-three", "Positive, negative and sign-changing solutions"},
      {"verify", "Check residuals of a stored solution"}};

  for (const std::string& name : fhnvs::cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", out, "Output directory (overrides outputs.dir)");
    if (name == "nu-s") {
      sub->add_option("--s", s, "Exponent s >= 2");
      sub->add_option("--ladder", ladder, "Exterior radius ladder")->delimiter(',');
    }
    if (name == "verify") sub->add_option("--solution", solution, "Directory holding u.csv/v.csv")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fhnvs::cli::kExitConfig;
  }

  for (CLI::App* sub : app.get_subcommands()) {
    opts.command = sub->get_name();
    if (opts.command == "nu-s") {
      if (sub->count("--s") > 0) opts.s = s;
      if (sub->count("--ladder") > 0) opts.ladder = ladder;
    }
  }
  opts.config = config;
  if (!out.empty()) opts.out = out;
  if (!solution.empty()) opts.solution = solution;
  return fhnvs::cli::dispatch(opts, std::cerr);
}
