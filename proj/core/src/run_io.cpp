#include "aqopt/run_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "aqopt/errors.hpp"
#include "aqopt/propagation.hpp"

namespace aqopt {

namespace {

using nlohmann::json;

const char* kModes[] = {"evaluate", "optimize", "sweep", "grad-check", "init-set"};
const char* kFamilies[] = {"linear", "const-x", "sine-x", "linear-constraint", "trig"};

bool known_mode(const std::string& mode) {
  for (const char* m : kModes) {
    if (mode == m) return true;
  }
  return false;
}

void check_family_name(const std::string& family) {
  for (const char* f : kFamilies) {
    if (family == f) return;
  }
  throw ConfigError("unknown family \"" + family +
                    "\"; expected one of linear, const-x, sine-x, "
                    "linear-constraint, trig");
}

double as_number(const json& value, const std::string& key) {
  if (!value.is_number()) {
    throw ConfigError("config key \"" + key + "\" must be a number");
  }
  return value.get<double>();
}

long long as_integer(const json& value, const std::string& key) {
  if (!value.is_number_integer()) {
    throw ConfigError("config key \"" + key + "\" must be an integer");
  }
  return value.get<long long>();
}

std::string as_string(const json& value, const std::string& key) {
  if (!value.is_string()) {
    throw ConfigError("config key \"" + key + "\" must be a string");
  }
  return value.get<std::string>();
}

std::vector<double> as_number_array(const json& value, const std::string& key) {
  if (!value.is_array()) {
    throw ConfigError("config key \"" + key + "\" must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(value.size());
  for (const json& item : value) {
    out.push_back(as_number(item, key));
  }
  return out;
}

void parse_optimizer_block(const json& block, OptimizerConfig& out) {
  if (!block.is_object()) {
    throw ConfigError("config key \"optimizer\" must be an object");
  }
  for (const auto& [key, value] : block.items()) {
    if (key == "max_iterations") {
      out.max_iterations = static_cast<int>(as_integer(value, "optimizer.max_iterations"));
    } else if (key == "step_size") {
      out.step_size = as_number(value, "optimizer.step_size");
    } else if (key == "growth") {
      out.growth = as_number(value, "optimizer.growth");
    } else if (key == "shrink") {
      out.shrink = as_number(value, "optimizer.shrink");
    } else if (key == "grad_tol") {
      out.grad_tol = as_number(value, "optimizer.grad_tol");
    } else if (key == "objective_tol") {
      out.objective_tol = as_number(value, "optimizer.objective_tol");
    } else if (key == "record_every") {
      out.record_every = static_cast<int>(as_integer(value, "optimizer.record_every"));
    } else {
      throw ConfigError("unknown config key \"optimizer." + key + "\"");
    }
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot open output file \"" + path + "\"");
  }
  return out;
}

// CSV field quoting for the free-text error column.
std::string csv_quote(const std::string& text) {
  if (text.empty()) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

// Everything the command implementations share: the model, problem states,
// the (possibly perturbed) starting schedule, and the resolved grid.
struct RunSetup {
  ControlledHamiltonian model;
  AqcProblem problem;
  InitialSet init;
  ControlSchedule schedule;
  ObjectiveSpec spec;
  int L = 0;
};

int checked_L(const RunConfig& config) {
  const int L = config.resolved_L();
  if (L < 2) {
    throw ConfigError("the grid needs at least 2 intervals (T and L give L = " +
                      std::to_string(L) + ")");
  }
  return L;
}

RunSetup prepare(const RunConfig& config) {
  RunSetup s;
  s.model = xz_model();
  s.problem = make_problem(config.problem);
  s.L = checked_L(config);
  try {
    s.init = build_initial_set(config.problem, config.init_family, config.T, s.L);
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  s.schedule = config.perturb_amplitude > 0.0
                   ? perturb(s.init.schedule, config.perturb_amplitude, config.seed)
                   : s.init.schedule;
  s.spec.alpha = config.alpha;
  s.spec.tracking = config.tracking;
  s.spec.initial_state = eigensystem(s.problem.initial_hamiltonian).ground();
  s.spec.target_state = eigensystem(s.problem.final_hamiltonian).ground();
  return s;
}

std::filesystem::path ensure_output_dir(const RunConfig& config) {
  const std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!std::filesystem::is_directory(dir)) {
    throw ConfigError("cannot create output directory \"" + config.output_dir + "\"");
  }
  return dir;
}

// Max-norm relative disagreement between an analytic gradient field and the
// central finite difference of `value` (probe 1e-6).
double fd_relative_error(const ControlSchedule& schedule, const RealMatrix& analytic,
                         const std::function<double(const ControlSchedule&)>& value) {
  constexpr double kProbe = 1e-6;
  RealMatrix fd(schedule.num_controls(), schedule.intervals());
  ControlSchedule probe = schedule;
  for (int k = 0; k < schedule.num_controls(); ++k) {
    for (int l = 0; l < schedule.intervals(); ++l) {
      const double saved = probe.samples(k, l);
      probe.samples(k, l) = saved + kProbe;
      const double up = value(probe);
      probe.samples(k, l) = saved - kProbe;
      const double down = value(probe);
      probe.samples(k, l) = saved;
      fd(k, l) = (up - down) / (2.0 * kProbe);
    }
  }
  const double scale = std::max(fd.cwiseAbs().maxCoeff(), 1e-30);
  return (analytic - fd).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

int RunConfig::resolved_L() const {
  return L > 0 ? L : static_cast<int>(std::lround(T / 0.01));
}

RunConfig parse_config(const std::string& json_text,
                       const std::string& mode_from_cli) {
  if (!known_mode(mode_from_cli)) {
    throw ConfigError("unknown mode \"" + mode_from_cli + "\"");
  }
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config must be a JSON object");
  }

  RunConfig cfg;
  cfg.mode = mode_from_cli;
  for (const auto& [key, value] : doc.items()) {
    if (key == "mode") {
      const std::string mode = as_string(value, key);
      if (mode != mode_from_cli) {
        throw ConfigError("config mode \"" + mode +
                          "\" disagrees with the subcommand \"" + mode_from_cli + "\"");
      }
    } else if (key == "problem") {
      try {
        cfg.problem = parse_problem(as_string(value, key));
      } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "T") {
      cfg.T = as_number(value, key);
      if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) {
        throw ConfigError("config key \"T\" must be positive and finite");
      }
    } else if (key == "L") {
      const long long L = as_integer(value, key);
      if (L < 2 || L > 10'000'000) {
        throw ConfigError("config key \"L\" must be an integer in [2, 1e7]");
      }
      cfg.L = static_cast<int>(L);
    } else if (key == "alpha") {
      cfg.alpha = as_number(value, key);
      if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha)) {
        throw ConfigError("config key \"alpha\" must be non-negative and finite");
      }
    } else if (key == "tracking") {
      try {
        cfg.tracking = parse_tracking(as_string(value, key));
      } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "init_family") {
      cfg.init_family = as_string(value, key);
      check_family_name(cfg.init_family);
    } else if (key == "families") {
      if (!value.is_array()) {
        throw ConfigError("config key \"families\" must be an array of strings");
      }
      cfg.families.clear();
      for (const json& item : value) {
        cfg.families.push_back(as_string(item, key));
        check_family_name(cfg.families.back());
      }
    } else if (key == "T_values") {
      cfg.T_values = as_number_array(value, key);
      for (double T : cfg.T_values) {
        if (!(T > 0.0) || !std::isfinite(T)) {
          throw ConfigError("config key \"T_values\" entries must be positive and finite");
        }
      }
    } else if (key == "alpha_values") {
      cfg.alpha_values = as_number_array(value, key);
      for (double a : cfg.alpha_values) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
          throw ConfigError(
              "config key \"alpha_values\" entries must be non-negative and finite");
        }
      }
    } else if (key == "optimizer") {
      parse_optimizer_block(value, cfg.optimizer);
    } else if (key == "output_dir") {
      cfg.output_dir = as_string(value, key);
      if (cfg.output_dir.empty()) {
        throw ConfigError("config key \"output_dir\" must not be empty");
      }
    } else if (key == "seed") {
      const long long seed = as_integer(value, key);
      if (seed < 0 || seed > 0xFFFFFFFFLL) {
        throw ConfigError("config key \"seed\" must fit an unsigned 32-bit integer");
      }
      cfg.seed = static_cast<std::uint32_t>(seed);
    } else if (key == "perturb_amplitude") {
      cfg.perturb_amplitude = as_number(value, key);
      if (!(cfg.perturb_amplitude >= 0.0) || !std::isfinite(cfg.perturb_amplitude)) {
        throw ConfigError(
            "config key \"perturb_amplitude\" must be non-negative and finite");
      }
    } else {
      throw ConfigError("unknown config key \"" + key + "\"");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path, const std::string& mode_from_cli) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read config file \"" + path + "\"");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), mode_from_cli);
}

std::string format_double(double value) {
  std::array<char, 40> buf;
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                    std::chars_format::general, 17);
  return std::string(buf.data(), result.ptr);
}

void write_trajectory_csv(const std::string& path, const ControlSchedule& schedule,
                          const ObjectiveReport& report) {
  const int L = schedule.intervals();
  if (report.pop_series.size() != L + 1 || report.gap_series.size() != L + 1 ||
      report.ratio_series.size() != L + 1 || report.energy_series.size() != L + 1) {
    throw ArgumentError("trajectory CSV needs L+1 values in every series");
  }
  std::ofstream out = open_output(path);
  out << "s,x,z,P0,g,R,E\n";
  for (int l = 0; l <= L; ++l) {
    const int m = std::max(l, 1) - 1;  // row 0 reports interval 1's controls
    out << format_double(static_cast<double>(l) / L) << ','
        << format_double(schedule.samples(0, m)) << ','
        << format_double(schedule.samples(1, m)) << ','
        << format_double(report.pop_series(l)) << ','
        << format_double(report.gap_series(l)) << ','
        << format_double(report.ratio_series(l)) << ','
        << format_double(report.energy_series(l)) << '\n';
  }
}

void write_history_csv(const std::string& path, const RunRecord& record) {
  std::ofstream out = open_output(path);
  out << "iteration,J,F,P0bar,grad_max_norm\n";
  for (const HistoryEntry& entry : record.history) {
    out << entry.iteration << ',' << format_double(entry.objective) << ','
        << format_double(entry.fidelity) << ','
        << format_double(entry.avg_population) << ','
        << format_double(entry.grad_max_norm) << '\n';
  }
}

void write_sweep_csv(const std::string& path, const std::vector<SweepCell>& cells) {
  std::ofstream out = open_output(path);
  out << "family,T,alpha,infidelity,avg_population,iterations,termination,error\n";
  for (const SweepCell& cell : cells) {
    out << cell.family << ',' << format_double(cell.T) << ','
        << format_double(cell.alpha) << ',';
    if (cell.record.has_value()) {
      const RunRecord& r = *cell.record;
      out << format_double(r.final_report.infidelity) << ','
          << format_double(r.final_report.avg_population) << ',' << r.iterations
          << ',' << termination_name(r.termination) << ',';
    } else {
      out << ",,,,";
    }
    out << csv_quote(cell.error) << '\n';
  }
}

void write_init_set_csv(const std::string& path, const ControlSchedule& schedule,
                        const RealVector& gap_series,
                        const RealVector& ratio_series) {
  const int L = schedule.intervals();
  if (gap_series.size() != L + 1 || ratio_series.size() != L + 1) {
    throw ArgumentError("initial-set CSV needs L+1 values in every series");
  }
  std::ofstream out = open_output(path);
  out << "s,x,z,g,R\n";
  for (int l = 0; l <= L; ++l) {
    const int m = std::max(l, 1) - 1;
    out << format_double(static_cast<double>(l) / L) << ','
        << format_double(schedule.samples(0, m)) << ','
        << format_double(schedule.samples(1, m)) << ','
        << format_double(gap_series(l)) << ','
        << format_double(ratio_series(l)) << '\n';
  }
}

void write_summary_json(const std::string& path, const RunConfig& config,
                        const ObjectiveReport& report, int iterations,
                        const std::string& termination,
                        std::optional<double> epsilon,
                        std::optional<double> lambda) {
  json j;
  j["problem"] = problem_name(config.problem);
  j["family"] = config.init_family;
  j["T"] = config.T;
  j["L"] = config.resolved_L();
  j["alpha"] = config.alpha;
  j["tracking"] = tracking_name(config.tracking);
  j["fidelity"] = report.fidelity;
  j["infidelity"] = report.infidelity;
  j["avg_population"] = report.avg_population;
  j["composite"] = report.composite;
  j["iterations"] = iterations;
  j["termination"] = termination;
  if (epsilon.has_value()) j["epsilon"] = *epsilon;
  if (lambda.has_value()) j["lambda"] = *lambda;

  std::ofstream out = open_output(path);
  out << j.dump(2) << '\n';
}

int cmd_evaluate(const RunConfig& config) {
  const RunSetup s = prepare(config);
  const auto dir = ensure_output_dir(config);
  const ObjectiveReport report = evaluate_objective(s.model, s.schedule, s.spec);
  write_trajectory_csv((dir / "trajectory.csv").string(), s.schedule, report);
  write_summary_json((dir / "summary.json").string(), config, report, 0, "none",
                     s.init.epsilon, s.init.lambda);
  std::cout << "evaluate problem=" << problem_name(config.problem)
            << " family=" << config.init_family << " T=" << format_double(config.T)
            << " L=" << s.L << ": infidelity=" << format_double(report.infidelity)
            << " avg_population=" << format_double(report.avg_population)
            << " composite=" << format_double(report.composite) << '\n';
  return 0;
}

int cmd_optimize(const RunConfig& config) {
  const RunSetup s = prepare(config);
  const auto dir = ensure_output_dir(config);
  if (config.tracking == TrackingKind::control_derivative) {
    std::cerr << "warning: the control-derivative cost has no analytic gradient "
                 "and cannot be optimized\n";
  }
  const RunRecord record = optimize(s.model, s.schedule, s.spec, config.optimizer);
  write_trajectory_csv((dir / "initial_trajectory.csv").string(),
                       record.initial_schedule, record.initial_report);
  write_trajectory_csv((dir / "final_trajectory.csv").string(),
                       record.final_schedule, record.final_report);
  write_history_csv((dir / "history.csv").string(), record);
  write_summary_json((dir / "summary.json").string(), config, record.final_report,
                     record.iterations, termination_name(record.termination),
                     s.init.epsilon, s.init.lambda);
  std::cout << "optimize problem=" << problem_name(config.problem)
            << " family=" << config.init_family << " T=" << format_double(config.T)
            << " L=" << s.L << ": iterations=" << record.iterations
            << " termination=" << termination_name(record.termination)
            << " infidelity=" << format_double(record.final_report.infidelity)
            << " avg_population="
            << format_double(record.final_report.avg_population) << '\n';
  return 0;
}

int cmd_sweep(const RunConfig& config, int jobs) {
  const ControlledHamiltonian model = xz_model();
  const AqcProblem problem = make_problem(config.problem);
  const auto dir = ensure_output_dir(config);

  const std::vector<std::string> families =
      config.families.empty() ? std::vector<std::string>{config.init_family}
                              : config.families;
  const std::vector<double> T_values =
      config.T_values.empty() ? std::vector<double>{config.T} : config.T_values;
  const std::vector<double> alpha_values = config.alpha_values.empty()
                                               ? std::vector<double>{config.alpha}
                                               : config.alpha_values;

  std::vector<SweepCell> cells;
  for (const std::string& family : families) {
    std::vector<SweepCell> part =
        sweep(model, problem, family, T_values, alpha_values, config.tracking,
              config.optimizer, jobs, config.L);
    cells.insert(cells.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
  }
  write_sweep_csv((dir / "sweep.csv").string(), cells);

  for (const SweepCell& cell : cells) {
    std::cout << "sweep family=" << cell.family << " T=" << format_double(cell.T)
              << " alpha=" << format_double(cell.alpha) << ": ";
    if (cell.record.has_value()) {
      std::cout << "infidelity="
                << format_double(cell.record->final_report.infidelity)
                << " avg_population="
                << format_double(cell.record->final_report.avg_population)
                << " iterations=" << cell.record->iterations << " termination="
                << termination_name(cell.record->termination) << '\n';
    } else {
      std::cout << "error: " << cell.error << '\n';
    }
  }
  return 0;
}

int cmd_grad_check(const RunConfig& config) {
  const RunSetup s = prepare(config);
  if (config.tracking == TrackingKind::control_derivative) {
    throw ConfigError(
        "grad-check needs a tracking kind with an analytic gradient "
        "(population, energy, or none)");
  }
  const Trajectory traj = propagate(s.model, s.schedule, s.spec.initial_state);
  const GradientField field = gradient(s.model, s.schedule, traj, s.spec);

  constexpr double kTol = 5e-3;
  bool ok = true;

  const ObjectiveSpec& spec = s.spec;
  const ControlledHamiltonian& model = s.model;
  const double err_f = fd_relative_error(
      s.schedule, field.fidelity_part, [&](const ControlSchedule& u) {
        return fidelity(propagate(model, u, spec.initial_state), spec);
      });
  std::cout << "fidelity gradient: max relative error " << format_double(err_f)
            << " (tolerance " << format_double(kTol) << ")\n";
  ok = ok && err_f < kTol;

  if (config.tracking == TrackingKind::population ||
      config.tracking == TrackingKind::energy) {
    if (config.alpha == 0.0) {
      const bool zero = field.tracking_part.isZero(0.0);
      std::cout << "tracking gradient (" << tracking_name(config.tracking)
                << "): exactly zero at alpha=0: " << (zero ? "yes" : "no") << '\n';
      ok = ok && zero;
    } else {
      const bool population = config.tracking == TrackingKind::population;
      const double err_t = fd_relative_error(
          s.schedule, field.tracking_part, [&](const ControlSchedule& u) {
            const Trajectory t = propagate(model, u, spec.initial_state);
            return population
                       ? spec.alpha * population_series(t, model, u).average
                       : -spec.alpha * energy_series(t, model, u).average;
          });
      std::cout << "tracking gradient (" << tracking_name(config.tracking)
                << "): max relative error " << format_double(err_t)
                << " (tolerance " << format_double(kTol) << ")\n";
      ok = ok && err_t < kTol;
    }
  }
  return ok ? 0 : 4;
}

int cmd_init_set(const RunConfig& config) {
  const int L = checked_L(config);
  InitialSet init;
  try {
    init = build_initial_set(config.problem, config.init_family, config.T, L);
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  const auto dir = ensure_output_dir(config);

  RealVector gaps(L + 1);
  for (int l = 0; l <= L; ++l) {
    const int m = std::max(l, 1) - 1;
    gaps(l) = 2.0 * std::hypot(init.schedule.samples(0, m),
                               init.schedule.samples(1, m));
  }
  const RealVector ratios = adiabatic_ratio_series(init.schedule);
  write_init_set_csv((dir / "init_set.csv").string(), init.schedule, gaps, ratios);

  json meta;
  meta["problem"] = problem_name(config.problem);
  meta["family"] = config.init_family;
  meta["T"] = config.T;
  meta["L"] = L;
  if (init.epsilon.has_value()) meta["epsilon"] = *init.epsilon;
  if (init.lambda.has_value()) meta["lambda"] = *init.lambda;
  std::ofstream out = open_output((dir / "init_set.json").string());
  out << meta.dump(2) << '\n';

  std::cout << "init-set problem=" << problem_name(config.problem)
            << " family=" << config.init_family << " T=" << format_double(config.T)
            << " L=" << L;
  if (init.epsilon.has_value()) std::cout << " epsilon=" << format_double(*init.epsilon);
  if (init.lambda.has_value()) std::cout << " lambda=" << format_double(*init.lambda);
  std::cout << '\n';
  return 0;
}

}  // namespace aqopt
