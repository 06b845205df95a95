#pragma once

#include <functional>
#include <optional>
#include <string>

#include "aqopt/schedule.hpp"
#include "aqopt/types.hpp"

namespace aqopt {

// The two benchmark interpolation problems on H(s) = x(s) sigma_x +
// z(s) sigma_z:
//   I : H_i = sigma_x -> H_f = sigma_x + sigma_z (x: 1->1, z: 0->1)
//   II: H_i = sigma_x -> H_f = sigma_z           (x: 1->0, z: 0->1)
enum class ProblemLabel { I, II };

struct AqcProblem {
  ProblemLabel label;
  Matrix initial_hamiltonian;  // H_i
  Matrix final_hamiltonian;    // H_f
  double x_start, x_end, z_start, z_end;
};

AqcProblem make_problem(ProblemLabel label);

std::string problem_name(ProblemLabel label);
ProblemLabel parse_problem(const std::string& name);

// A schedule constructed so the adiabatic ratio
// R(t) = |x z' - z x'| / (4 (x^2+z^2)^{3/2} T) is constant and equal to
// epsilon, together with the dimensionless rate lambda = 4 epsilon T.
struct AdiabaticSolution {
  ControlSchedule schedule;
  double epsilon = 0.0;
  double lambda = 0.0;
  std::string family;
};

// Plain linear interpolation (problem I: x = 1, z = s; problem II: x = 1 - s,
// z = s), sampled at interval midpoints.
ControlSchedule linear_set(const AqcProblem& problem, double T, int L);

// Problem I, x held at 1: z = s / sqrt(2 - s^2), lambda = 1/sqrt(2),
// epsilon = 1/(sqrt(32) T).
AdiabaticSolution const_x_adiabatic_set(double T, int L);

// Problem I, x = 1 + sin(pi s) (gap-boosting choice); z has the closed form
// with denominator sqrt(2 (pi+2)^2 - b^2), b = 1 + pi s - cos(pi s);
// epsilon = pi / (4 sqrt(2) (pi+2) T).
AdiabaticSolution sine_x_adiabatic_set(double T, int L);

// Problem II, x + z = 1: z = (1 - (1-2s)/sqrt(1+4s-4s^2))/2, epsilon = 1/(2T).
AdiabaticSolution linear_constraint_adiabatic_set(double T, int L);

// Problem II, x^2 + z^2 = 1: x = cos(pi s/2), z = sin(pi s/2), constant gap 2,
// epsilon = pi/(8T).
AdiabaticSolution trig_adiabatic_set(double T, int L);

// A constraint that reduces the constant-R condition to a scalar first-order
// ODE dz/ds = f(s, z; lambda), plus the map recovering x from the constraint.
struct AdiabaticOde {
  std::function<double(double s, double z, double lambda)> dzds;
  std::function<double(double s, double z)> x_of;
};

// Integrates dz/ds with fixed-step RK4 on the half grid (so interval
// midpoints land on integration nodes) and finds lambda by bisection
// shooting so z(1) matches z_end to 1e-10. lambda is bracketed inside
// [1e-6, 1e3] by geometric expansion; non-finite integration counts as
// overshoot. Returns the sampled schedule and epsilon = lambda / (4T).
// Throws NoSolutionError when the bracket cannot enclose a solution and
// DomainError when the right-hand side is non-finite at the initial point.
AdiabaticSolution solve_adiabatic_ode(const AdiabaticOde& ode, double z_start,
                                      double z_end, double T, int L,
                                      const std::string& family = "ode");

// Closed-form gap g(s) = 2 sqrt(x(s)^2 + z(s)^2) for the named family
// ("linear" depends on the problem; the other families determine it).
// Throws ArgumentError for unknown identifiers or invalid pairings.
double reference_gap(ProblemLabel problem, const std::string& family, double s);

// Continuous closed forms with analytic s-derivatives, for oracles, analytic
// R evaluation, and figure overlays. epsilon_times_T / lambda are zero for
// the (non-adiabatic) linear family.
struct FamilyCurves {
  std::function<double(double)> x, z, dx, dz;
  double lambda = 0.0;
  double epsilon_times_T = 0.0;
};

FamilyCurves family_curves(ProblemLabel problem, const std::string& family);

// Adiabatic ratio of a family evaluated from its analytic derivatives.
double analytic_ratio(const FamilyCurves& curves, double s, double T);

// Dispatch by stable family identifier ("linear", "const-x", "sine-x",
// "linear-constraint", "trig"); validates the problem/family pairing and
// reports epsilon/lambda when the family defines them.
struct InitialSet {
  ControlSchedule schedule;
  std::string family;
  std::optional<double> epsilon;
  std::optional<double> lambda;
};

InitialSet build_initial_set(ProblemLabel problem, const std::string& family,
                             double T, int L);

}  // namespace aqopt
