#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aqopt/families.hpp"
#include "aqopt/objectives.hpp"
#include "aqopt/schedule.hpp"
#include "aqopt/types.hpp"

namespace aqopt {

// Adaptive-step gradient ascent with backtracking: the continuous gradient
// flow is realized as u <- u + eta grad J, where eta grows on every accepted
// step and shrinks until a trial does not decrease J.
struct OptimizerConfig {
  int max_iterations = 50000;
  double step_size = 0.1;        // initial eta
  double growth = 1.5;           // eta multiplier after an accepted step
  double shrink = 0.5;           // eta multiplier after a rejected trial
  double grad_tol = 1e-9;        // stop when max-norm of grad J falls below
  double objective_tol = 1e-14;  // stop when an accepted step gains less
  int record_every = 100;        // history stride (first/last always kept)
};

enum class Termination { grad_tol, objective_tol, max_iterations };

std::string termination_name(Termination t);

struct HistoryEntry {
  int iteration;
  double objective;       // J
  double fidelity;        // F
  double avg_population;  // PBar0
  double grad_max_norm;
};

struct RunRecord {
  ControlSchedule initial_schedule;
  ControlSchedule final_schedule;
  ObjectiveReport initial_report;
  ObjectiveReport final_report;
  int iterations = 0;  // accepted ascent steps
  std::vector<HistoryEntry> history;
  Termination termination = Termination::max_iterations;
};

// Monotone ascent from schedule0: every accepted iterate has J no smaller
// than its predecessor; all K*L samples vary freely (no endpoint pinning).
// Throws ConfigError for invalid config or a tracking kind without an
// analytic gradient (control-derivative), and NumericalError (carrying the
// iterate) when J or the gradient turns non-finite.
RunRecord optimize(const ControlledHamiltonian& model,
                   const ControlSchedule& schedule0, const ObjectiveSpec& spec,
                   const OptimizerConfig& config);

// One sweep cell: either a completed run or the error that stopped it.
struct SweepCell {
  std::string family;
  double T = 0.0;
  double alpha = 0.0;
  std::optional<RunRecord> record;
  std::string error;  // empty on success
};

// Cartesian product of T_values x alpha_values for one initial-set family of
// the given problem, each cell optimized independently (L = round(T/0.01)
// unless fixed_L > 0). Cells run concurrently up to `jobs`; results are
// deterministic and ordered (T outer, alpha inner). Individual cell failures
// are recorded per cell, not fatal.
std::vector<SweepCell> sweep(const ControlledHamiltonian& model,
                             const AqcProblem& problem,
                             const std::string& init_family,
                             const std::vector<double>& T_values,
                             const std::vector<double>& alpha_values,
                             TrackingKind tracking,
                             const OptimizerConfig& config, int jobs = 1,
                             int fixed_L = 0);

// Adds seeded uniform noise in [-amplitude, amplitude] to every sample;
// deterministic per seed across platforms.
ControlSchedule perturb(const ControlSchedule& schedule, double amplitude,
                        std::uint32_t seed);

}  // namespace aqopt
