// Microbenchmarks for the hot paths of the ascent loop: exact step
// propagation, full-schedule propagation, objective evaluation, and the
// composite gradient.

#include <benchmark/benchmark.h>

#include "aqopt/families.hpp"
#include "aqopt/model.hpp"
#include "aqopt/objectives.hpp"
#include "aqopt/optimizer.hpp"
#include "aqopt/propagation.hpp"

namespace {

using namespace aqopt;

ObjectiveSpec make_spec(const AqcProblem& problem, double alpha, TrackingKind kind) {
  ObjectiveSpec spec;
  spec.alpha = alpha;
  spec.tracking = kind;
  spec.initial_state = eigensystem(problem.initial_hamiltonian).ground();
  spec.target_state = eigensystem(problem.final_hamiltonian).ground();
  return spec;
}

void BM_StepPropagator(benchmark::State& state) {
  const ControlledHamiltonian model = xz_model();
  RealVector u(2);
  u << 1.0, 0.5;
  const Matrix H = assemble(model, u);
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_propagator(H, 0.005));
  }
}
BENCHMARK(BM_StepPropagator);

void BM_Propagate(benchmark::State& state) {
  const ControlledHamiltonian model = xz_model();
  const AqcProblem problem = make_problem(ProblemLabel::I);
  const int L = static_cast<int>(state.range(0));
  const ControlSchedule schedule = linear_set(problem, 0.01 * L, L);
  const Vector psi0 = eigensystem(problem.initial_hamiltonian).ground();
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate(model, schedule, psi0));
  }
}
BENCHMARK(BM_Propagate)->Arg(100)->Arg(200)->Arg(400);

void BM_EvaluateObjective(benchmark::State& state) {
  const ControlledHamiltonian model = xz_model();
  const AqcProblem problem = make_problem(ProblemLabel::I);
  const int L = static_cast<int>(state.range(0));
  const ControlSchedule schedule = linear_set(problem, 0.01 * L, L);
  const ObjectiveSpec spec = make_spec(problem, 0.1, TrackingKind::population);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_objective(model, schedule, spec));
  }
}
BENCHMARK(BM_EvaluateObjective)->Arg(200);

void BM_Gradient(benchmark::State& state) {
  const ControlledHamiltonian model = xz_model();
  const AqcProblem problem = make_problem(ProblemLabel::I);
  const int L = static_cast<int>(state.range(0));
  const ControlSchedule schedule = linear_set(problem, 0.01 * L, L);
  const ObjectiveSpec spec = make_spec(problem, 0.1, TrackingKind::population);
  const Trajectory traj = propagate(model, schedule, spec.initial_state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gradient(model, schedule, traj, spec));
  }
}
BENCHMARK(BM_Gradient)->Arg(200);

void BM_HessianFidelity(benchmark::State& state) {
  const ControlledHamiltonian model = xz_model();
  const AqcProblem problem = make_problem(ProblemLabel::I);
  const int L = static_cast<int>(state.range(0));
  const ControlSchedule schedule = linear_set(problem, 0.01 * L, L);
  const ObjectiveSpec spec = make_spec(problem, 0.0, TrackingKind::none);
  const Trajectory traj = propagate(model, schedule, spec.initial_state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hessian_fidelity(traj, model, spec));
  }
}
BENCHMARK(BM_HessianFidelity)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
