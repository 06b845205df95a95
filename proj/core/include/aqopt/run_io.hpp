#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aqopt/families.hpp"
#include "aqopt/objectives.hpp"
#include "aqopt/optimizer.hpp"

namespace aqopt {

// One run description, parsed strictly from a flat JSON object (unknown keys
// are rejected). See README for the documented key set.
struct RunConfig {
  std::string mode;  // evaluate | optimize | sweep | grad-check | init-set
  ProblemLabel problem = ProblemLabel::I;
  double T = 2.0;
  int L = 0;  // 0 -> round(T / 0.01)
  double alpha = 0.0;
  TrackingKind tracking = TrackingKind::population;
  std::string init_family = "linear";
  std::vector<std::string> families;   // sweep only; defaults to {init_family}
  std::vector<double> T_values;        // sweep only; defaults to {T}
  std::vector<double> alpha_values;    // sweep only
  OptimizerConfig optimizer;
  std::string output_dir = ".";
  std::uint32_t seed = 0;
  double perturb_amplitude = 0.0;

  int resolved_L() const;
};

// Strict parse of a JSON config document. `mode_from_cli` is the subcommand
// name; a "mode" key in the file, if present, must agree. Throws ConfigError
// on syntax errors, unknown keys, type mismatches, or invalid values.
RunConfig parse_config(const std::string& json_text,
                       const std::string& mode_from_cli);

// Reads the file and parses it; throws ConfigError when unreadable.
RunConfig load_config(const std::string& path, const std::string& mode_from_cli);

// Locale-independent decimal formatting with 17 significant digits.
std::string format_double(double value);

// Trajectory CSV: header exactly "s,x,z,P0,g,R,E", one row per grid node
// l = 0..L with s = l/L; x and z are the samples of the interval containing
// s (row 0 reports interval 1's values).
void write_trajectory_csv(const std::string& path,
                          const ControlSchedule& schedule,
                          const ObjectiveReport& report);

// History CSV: header "iteration,J,F,P0bar,grad_max_norm".
void write_history_csv(const std::string& path, const RunRecord& record);

// Sweep CSV: header
// "family,T,alpha,infidelity,avg_population,iterations,termination,error".
void write_sweep_csv(const std::string& path,
                     const std::vector<SweepCell>& cells);

// Initial-set CSV: header "s,x,z,g,R" with the trajectory-CSV node
// convention.
void write_init_set_csv(const std::string& path,
                        const ControlSchedule& schedule,
                        const RealVector& gap_series,
                        const RealVector& ratio_series);

// Summary JSON with keys problem, family, T, L, alpha, tracking, fidelity,
// infidelity, avg_population, composite, iterations, termination, and
// epsilon/lambda when the family defines them.
void write_summary_json(const std::string& path, const RunConfig& config,
                        const ObjectiveReport& report, int iterations,
                        const std::string& termination,
                        std::optional<double> epsilon,
                        std::optional<double> lambda);

// Command implementations (the CLI maps exceptions to exit codes; these
// return 0 on success and cmd_grad_check returns 4 when the check fails).
int cmd_evaluate(const RunConfig& config);
int cmd_optimize(const RunConfig& config);
int cmd_sweep(const RunConfig& config, int jobs);
int cmd_grad_check(const RunConfig& config);
int cmd_init_set(const RunConfig& config);

}  // namespace aqopt
