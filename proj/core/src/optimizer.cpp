#include "aqopt/optimizer.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <thread>
#include <utility>

#include "aqopt/errors.hpp"
#include "aqopt/propagation.hpp"

namespace aqopt {

namespace {

// A trial step is rejected rather than fatal when its samples or objective
// misbehave; the ascent only fails hard when the accepted iterate itself is
// broken (see optimize).
bool trial_objective(const ControlledHamiltonian& model, double horizon,
                     const RealMatrix& samples, const ObjectiveSpec& spec,
                     double& J_out) {
  if (!samples.allFinite()) return false;
  const double J = composite_value(model, ControlSchedule{horizon, samples}, spec);
  if (!std::isfinite(J)) return false;
  J_out = J;
  return true;
}

void check_config(const OptimizerConfig& config) {
  if (config.max_iterations < 0) {
    throw ConfigError("optimizer: max_iterations must be >= 0");
  }
  if (!(config.step_size > 0.0) || !std::isfinite(config.step_size)) {
    throw ConfigError("optimizer: step_size must be positive and finite");
  }
  if (!(config.growth >= 1.0) || !std::isfinite(config.growth)) {
    throw ConfigError("optimizer: growth must be >= 1");
  }
  if (!(config.shrink > 0.0) || !(config.shrink < 1.0)) {
    throw ConfigError("optimizer: shrink must lie in (0, 1)");
  }
  if (!(config.grad_tol >= 0.0) || !(config.objective_tol >= 0.0)) {
    throw ConfigError("optimizer: tolerances must be non-negative");
  }
  if (config.record_every < 1) {
    throw ConfigError("optimizer: record_every must be >= 1");
  }
}

}  // namespace

std::string termination_name(Termination t) {
  switch (t) {
    case Termination::grad_tol: return "grad_tol";
    case Termination::objective_tol: return "objective_tol";
    case Termination::max_iterations: return "max_iterations";
  }
  return "unknown";
}

RunRecord optimize(const ControlledHamiltonian& model,
                   const ControlSchedule& schedule0, const ObjectiveSpec& spec,
                   const OptimizerConfig& config) {
  check_config(config);
  if (spec.tracking == TrackingKind::control_derivative) {
    throw ConfigError(
        "the control-derivative tracking cost has no analytic gradient and "
        "cannot drive the ascent; choose population, energy, or none");
  }

  RunRecord record;
  record.initial_schedule = schedule0;
  record.initial_report = evaluate_objective(model, schedule0, spec);

  ControlSchedule u = schedule0;
  Trajectory traj = propagate(model, u, spec.initial_state);
  double J = record.initial_report.composite;
  double eta = config.step_size;
  record.termination = Termination::max_iterations;

  int last_recorded = -1;
  auto record_history = [&](double grad_max) {
    record.history.push_back(
        {record.iterations, J, fidelity(traj, spec),
         population_series(traj, model, u).average, grad_max});
    last_recorded = record.iterations;
  };

  bool stopped = false;
  while (!stopped && record.iterations < config.max_iterations) {
    if (!std::isfinite(J)) {
      throw NumericalError("optimize: objective became non-finite", u.horizon,
                           u.samples);
    }
    const GradientField field = gradient(model, u, traj, spec);
    if (!field.values.allFinite()) {
      throw NumericalError("optimize: gradient became non-finite", u.horizon,
                           u.samples);
    }
    const double grad_max = field.values.cwiseAbs().maxCoeff();
    if (record.iterations % config.record_every == 0 &&
        last_recorded != record.iterations) {
      record_history(grad_max);
    }
    if (grad_max < config.grad_tol) {
      record.termination = Termination::grad_tol;
      stopped = true;
      break;
    }

    // Backtracking line search on the ascent direction; eta recovers by the
    // growth factor after every acceptance.
    while (true) {
      const RealMatrix trial = u.samples + eta * field.values;
      double J2 = 0.0;
      if (trial_objective(model, u.horizon, trial, spec, J2) && J2 >= J) {
        const double gain = J2 - J;
        u.samples = trial;
        traj = propagate(model, u, spec.initial_state);
        J = J2;
        ++record.iterations;
        eta *= config.growth;
        if (gain < config.objective_tol) {
          record.termination = Termination::objective_tol;
          stopped = true;
        }
        break;
      }
      eta *= config.shrink;
      if (eta < 1e-18) {
        // The search direction cannot make measurable progress.
        record.termination = Termination::objective_tol;
        stopped = true;
        break;
      }
    }
  }

  if (last_recorded != record.iterations) {
    const GradientField field = gradient(model, u, traj, spec);
    record_history(field.values.cwiseAbs().maxCoeff());
  }
  record.final_schedule = u;
  record.final_report = evaluate_objective(model, u, spec);
  return record;
}

std::vector<SweepCell> sweep(const ControlledHamiltonian& model,
                             const AqcProblem& problem,
                             const std::string& init_family,
                             const std::vector<double>& T_values,
                             const std::vector<double>& alpha_values,
                             TrackingKind tracking,
                             const OptimizerConfig& config, int jobs,
                             int fixed_L) {
  // An empty Cartesian product is an empty sweep, not an error.
  std::vector<SweepCell> cells;
  cells.reserve(T_values.size() * alpha_values.size());
  for (double T : T_values) {
    for (double alpha : alpha_values) {
      SweepCell cell;
      cell.family = init_family;
      cell.T = T;
      cell.alpha = alpha;
      cells.push_back(std::move(cell));
    }
  }

  ObjectiveSpec base_spec;
  base_spec.tracking = tracking;
  base_spec.initial_state = eigensystem(problem.initial_hamiltonian).ground();
  base_spec.target_state = eigensystem(problem.final_hamiltonian).ground();

  auto run_cell = [&](SweepCell& cell) {
    try {
      const int L = fixed_L > 0
                        ? fixed_L
                        : std::max(1, static_cast<int>(std::lround(cell.T / 0.01)));
      const InitialSet init =
          build_initial_set(problem.label, init_family, cell.T, L);
      ObjectiveSpec spec = base_spec;
      spec.alpha = cell.alpha;
      cell.record = optimize(model, init.schedule, spec, config);
    } catch (const std::exception& e) {
      cell.record.reset();
      cell.error = e.what();
    }
  };

  const int workers =
      std::min<int>(std::max(jobs, 1), static_cast<int>(cells.size()));
  if (workers <= 1) {
    for (SweepCell& cell : cells) run_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= cells.size()) break;
          run_cell(cells[i]);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  return cells;
}

ControlSchedule perturb(const ControlSchedule& schedule, double amplitude,
                        std::uint32_t seed) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw ArgumentError("perturb: amplitude must be non-negative and finite");
  }
  std::mt19937 gen(seed);
  RealMatrix samples = schedule.samples;
  // Row-major draw order and an explicit 2^-32 scaling keep the noise
  // bit-identical across platforms (mt19937's sequence is pinned by the
  // standard, unlike uniform_real_distribution).
  for (int k = 0; k < samples.rows(); ++k) {
    for (int l = 0; l < samples.cols(); ++l) {
      const double u01 = static_cast<double>(gen()) * (1.0 / 4294967296.0);
      samples(k, l) += (2.0 * u01 - 1.0) * amplitude;
    }
  }
  return make_schedule(schedule.horizon, std::move(samples));
}

}  // namespace aqopt
