#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fgeo/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order geometric structures on finite projective towers"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<unsigned long long> seed;
  std::optional<double> tol;

  for (const std::string& name :
       {"geodesic", "transport", "convert-check", "tower-check", "ch"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "config file (key = value)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "probe RNG seed");
    sub->add_option("--tol", tol, "check tolerance");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    fgeo::CliOverrides overrides;
    overrides.out = out_dir;
    overrides.seed = seed;
    overrides.tol = tol;
    const std::string subcommand = app.get_subcommands().front()->get_name();
    return fgeo::run_from_text(read_file(config_path), subcommand, overrides);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}
