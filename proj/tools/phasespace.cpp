#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "phasespace/cli/commands.hpp"
#include "phasespace/cli/config.hpp"
#include "phasespace/cli/output.hpp"
#include "phasespace/parallel.hpp"

namespace cli = phasespace::cli;

int main(int argc, char** argv) {
  CLI::App app{"Quasiprobability distributions and their evolution"};
  app.set_version_flag("--version", std::string(cli::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string method;
  bool oracle = false;
  int threads = 0;
  std::string out;
  std::string suite;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "scenario JSON file");
    sub->add_option("--method", method, "closed-form, oracle or both");
    sub->add_option("--threads", threads, "OpenMP threads; 1 gives bitwise reproducible output")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "output directory");
  };
  CLI::App* dist = app.add_subcommand("dist", "sample Phi^(a) on a grid");
  CLI::App* evolve = app.add_subcommand("evolve", "evolve Phi^(a) under a master equation");
  CLI::App* sweep = app.add_subcommand("sweep", "order sweep of the phase-insensitive model");
  CLI::App* verify = app.add_subcommand("verify", "run invariant suites");
  for (CLI::App* sub : {dist, evolve, sweep, verify}) add_common(sub);
  dist->get_option("--config")->required();
  evolve->get_option("--config")->required();
  sweep->get_option("--config")->required();
  evolve->add_flag("--oracle", oracle, "compare against the Lindblad integrator");
  verify->add_option("--suite", suite, "fock, algebra, states, distributions, evolution, oracle or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (threads > 0) phasespace::set_thread_count(threads);
    cli::ScenarioConfig config;
    if (!config_path.empty()) config = cli::load_config(config_path);
    cli::RunOptions options;
    if (!method.empty()) options.method = cli::parse_method(method);
    options.oracle = oracle;
    if (!out.empty()) options.out = out;
    options.suite = suite;

    if (*dist) return cli::cmd_dist(config, options, std::cout);
    if (*evolve) return cli::cmd_evolve(config, options, std::cout);
    if (*sweep) return cli::cmd_sweep(config, options, std::cout);
    return cli::cmd_verify(config, options, std::cout);
  } catch (const phasespace::Error& e) {
    std::cerr << "error: " << phasespace::kind_name(e.kind()) << ": " << e.what() << "\n";
    return cli::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}
