#include "eopt/report.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Ergodic optimization of top Lyapunov exponents over subshifts of finite type"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(eopt::kToolVersion));

  std::string config;
  std::string out;
  std::string cache_dir;
  int threads = 0;
  bool verbose = false;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"run", "run the experiment named in the config"},
      {"beta", "bracket beta(A) for a matrix cocycle"},
      {"birkhoff", "solve the scalar problem exactly"},
      {"perturb", "sweep e^(eps gamma) perturbations of a potential"},
      {"probe", "estimate how often small perturbations have a unique maximizer"},
      {"lambda", "certify a stability radius for a finite set of periodic measures"},
      {"irregular", "build a block-interleaved point and its exponent series"},
      {"flatten", "flatten the top of a function on a finite identity system"},
      {"measure", "integrate, compare and optimize over given measures"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "report path (default: out.report in the config, else stdout)");
    sub->add_option("--cache-dir", cache_dir, "report cache directory (default: $EOPT_CACHE_DIR)");
    sub->add_option("--threads", threads, "worker threads for the word-tree search")->check(CLI::PositiveNumber);
    sub->add_flag("--verbose", verbose, "log progress to stderr");
  }
  CLI11_PARSE(app, argc, argv);

  eopt::RunOptions options;
  if (!cache_dir.empty()) options.cache_dir = cache_dir;
  if (threads > 0) options.threads = threads;
  options.verbose = verbose;
  const std::string name = app.get_subcommands().front()->get_name();
  if (name != "run") options.experiment = name;

  std::optional<std::string> out_path;
  if (!out.empty()) out_path = out;
  return eopt::run(config, out_path, options, std::cerr);
}
