#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "aqopt/errors.hpp"
#include "aqopt/run_io.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string output_dir;
  int jobs = 1;
  long long seed = -1;  // negative = not supplied, keep the config's value
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config_path, "JSON run configuration file");
  cmd->add_option("--output", opt.output_dir,
                  "output directory (overrides the config's output_dir)");
  cmd->add_option("--jobs", opt.jobs, "concurrent sweep cells")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt.seed,
                  "perturbation seed (overrides the config's seed)")
      ->check(CLI::NonNegativeNumber);
}

aqopt::RunConfig build_config(const CliOptions& opt, const std::string& mode) {
  aqopt::RunConfig cfg = opt.config_path.empty()
                             ? aqopt::parse_config("{}", mode)
                             : aqopt::load_config(opt.config_path, mode);
  if (!opt.output_dir.empty()) cfg.output_dir = opt.output_dir;
  if (opt.seed >= 0) cfg.seed = static_cast<std::uint32_t>(opt.seed);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Propagation, adiabatic initial sets, and gradient-flow optimization "
      "for piecewise-constant two-level control schedules"};
  app.require_subcommand(1);

  CliOptions opt;
  add_common_flags(
      app.add_subcommand("evaluate",
                         "propagate one initial set and report its objective"),
      opt);
  add_common_flags(
      app.add_subcommand("optimize", "run the gradient ascent from one initial set"),
      opt);
  add_common_flags(
      app.add_subcommand("sweep", "optimize a family x T x alpha grid of cells"),
      opt);
  add_common_flags(app.add_subcommand(
                       "grad-check",
                       "compare analytic gradients with finite differences"),
                   opt);
  add_common_flags(
      app.add_subcommand("init-set", "write an analytic schedule and its ratio/gap"),
      opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string mode = app.get_subcommands().front()->get_name();
  try {
    const aqopt::RunConfig cfg = build_config(opt, mode);
    if (mode == "evaluate") return aqopt::cmd_evaluate(cfg);
    if (mode == "optimize") return aqopt::cmd_optimize(cfg);
    if (mode == "sweep") return aqopt::cmd_sweep(cfg, opt.jobs);
    if (mode == "grad-check") return aqopt::cmd_grad_check(cfg);
    return aqopt::cmd_init_set(cfg);
  } catch (const aqopt::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const aqopt::ArgumentError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const aqopt::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
