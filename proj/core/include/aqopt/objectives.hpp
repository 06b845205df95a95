#pragma once

#include <string>
#include <vector>

#include "aqopt/eigensystem.hpp"
#include "aqopt/model.hpp"
#include "aqopt/propagation.hpp"
#include "aqopt/schedule.hpp"
#include "aqopt/types.hpp"

namespace aqopt {

enum class TrackingKind { population, energy, control_derivative, none };

std::string tracking_name(TrackingKind kind);
TrackingKind parse_tracking(const std::string& name);

// Composite objective J = F + J_t: final-time fidelity against target_state
// plus an adiabaticity tracking term weighted by alpha
// (population: +alpha PBar0; energy: -alpha EBar; control-derivative:
// value-only cost on du/dt; none: J = F).
struct ObjectiveSpec {
  double alpha = 0.0;
  TrackingKind tracking = TrackingKind::none;
  Vector target_state;   // phi0 of the final Hamiltonian
  Vector initial_state;  // phi0 of the initial Hamiltonian
};

struct ObjectiveReport {
  double fidelity = 0.0;
  double infidelity = 0.0;
  double avg_population = 0.0;
  double avg_energy = 0.0;
  double composite = 0.0;
  RealVector pop_series;     // L+1 node values P0(t_l)
  RealVector gap_series;     // L+1 node values g(t_l)
  RealVector ratio_series;   // L+1 node values R(t_l)
  RealVector energy_series;  // L+1 node values E(t_l)
};

// Per-sample partial derivatives of the composite objective. `values` is the
// exact sum of the two parts.
struct GradientField {
  RealMatrix values;         // K x L, d J / d u_{k,l}
  RealMatrix fidelity_part;  // K x L
  RealMatrix tracking_part;  // K x L
};

// (K L) x (K L) symmetric second-derivative matrix, flattened index k*L + l.
struct HessianMatrix {
  RealMatrix values;
};

// Derivative of the gauge-fixed instantaneous ground state with respect to
// each control at fixed time; for the x/z model it is proportional to the
// excited state.
struct GroundDerivative {
  std::vector<Vector> chi;  // one N-vector per coupling
};

struct SeriesAverage {
  RealVector series;     // L+1 node values
  double average = 0.0;  // trapezoid quadrature over [0, T] divided by T
};

// F = |<target| U_T |initial>|^2; phase-invariant in both states.
double fidelity(const Trajectory& trajectory, const ObjectiveSpec& spec);

// Instantaneous ground-state population P0(t_l) = |<phi0(t_l)|psi(t_l)>|^2.
// Node l uses the Hamiltonian of the interval containing it (node 0 shares
// interval 1). Throws DegenerateSpectrumError (naming the grid index) when
// the gap at any node is <= 1e-12.
SeriesAverage population_series(const Trajectory& trajectory,
                                const ControlledHamiltonian& model,
                                const ControlSchedule& schedule);

// Instantaneous energy E(t_l) = <psi(t_l)| H(t_l) |psi(t_l)> with the same
// node convention.
SeriesAverage energy_series(const Trajectory& trajectory,
                            const ControlledHamiltonian& model,
                            const ControlSchedule& schedule);

// Adiabatic ratio R = |x z' - z x'| / (4 (x^2+z^2)^{3/2}), evaluated at grid
// nodes from the sampled schedule: values and s-derivatives of x, z are
// interpolated from the four nearest midpoint samples by cubic Lagrange
// stencils (symmetric in the interior, clamped windows at the ends; smaller
// windows when L < 4), then scaled by 1/T. Requires the two-control x/z form;
// throws DegenerateSpectrumError when x^2 + z^2 <= 1e-24 at a node.
RealVector adiabatic_ratio_series(const ControlSchedule& schedule);

// Value-only smoothness cost -(alpha / (K T)) sum_k sum_l
// (u_{k,l+1} - u_{k,l})^2 / dt (forward differences between adjacent
// samples). No analytic gradient is provided.
double control_derivative_cost(const ControlSchedule& schedule, double alpha);

// d F / d u_{k,l} = 2 Im{ <f|U_T|i>^* <f|U_T A_k(t_l)|i> } dt, with the
// Heisenberg operator A_k(t_l) = V_l^dag A_k V_l anchored at the interval
// midpoint propagator.
RealMatrix grad_fidelity(const Trajectory& trajectory,
                         const ControlledHamiltonian& model,
                         const ObjectiveSpec& spec);

// Closed-form ground-state derivatives for H = x sigma_x + z sigma_z with
// h = sqrt(x^2+z^2):
//   d phi0 / dx = -z / sqrt(8 h^5) (sqrt(h+z), sqrt(h-z))^T
//   d phi0 / dz = +x / sqrt(8 h^5) (sqrt(h+z), sqrt(h-z))^T
// consistent with the eigensystem gauge (x >= 0 branch). Throws
// DegenerateSpectrumError when h <= 1e-12.
GroundDerivative ground_state_derivative_xz(double x, double z);

// d (alpha PBar0) / d u_{k,l}: boundary term through the instantaneous
// ground state's dependence on the sample (via chi_k) plus the propagation
// term summed over nodes l' >= l with the trapezoid weights of the PBar0
// quadrature (node 0 shares interval 1, so its contributions fold into
// l = 1). Restricted to the x/z model (closed-form chi); throws
// UnsupportedModelError otherwise and DegenerateSpectrumError on a
// degenerate gap.
RealMatrix grad_population_tracking(const Trajectory& trajectory,
                                    const ControlledHamiltonian& model,
                                    const ControlSchedule& schedule,
                                    const ObjectiveSpec& spec);

// d (-alpha EBar) / d u_{k,l}: explicit term -(alpha/T) w_l <psi(t_l)|A_k
// |psi(t_l)> dt (node-anchored; + node-0 share for l = 1) plus the
// propagation term -(2 alpha/T) Im sum_{l' >= l} w_l' <i|U^dag(t_l') H(t_l')
// U(t_l') A_k(t_l)|i> dt^2. Works for any linear-control model.
RealMatrix grad_energy_tracking(const Trajectory& trajectory,
                                const ControlledHamiltonian& model,
                                const ControlSchedule& schedule,
                                const ObjectiveSpec& spec);

// Second derivatives of F: for t <= t' the entry is
// 2 Re[ -<f|U_T|i>^* <f|U_T A_j(t') A_k(t)|i>
//       + <f|U_T A_k(t)|i>^* <f|U_T A_j(t')|i> ] dt^2,
// with the operator order reversed for t > t' (later time leftmost) and the
// symmetrized product (1/2){A_k, A_j} at equal times; assembled symmetric.
HessianMatrix hessian_fidelity(const Trajectory& trajectory,
                               const ControlledHamiltonian& model,
                               const ObjectiveSpec& spec);

// Closed form valid at an optimum with U_T|i> = |f> (requires F >= 1-1e-8,
// else NotAtOptimumError):
//   entry = [ -<i|{A_k(t_l) A_j(t_l') + A_j(t_l') A_k(t_l)}|i>
//             + 2 <A_k(t_l)> <A_j(t_l')> ] dt^2,
// negative semidefinite by construction.
HessianMatrix hessian_at_optimum(const Trajectory& trajectory,
                                 const ControlledHamiltonian& model,
                                 const ObjectiveSpec& spec);

// Full report for one schedule: propagates from spec.initial_state and fills
// every series plus the composite J. The ratio series requires the x/z form
// and is zero-filled for other models.
ObjectiveReport evaluate_objective(const ControlledHamiltonian& model,
                                   const ControlSchedule& schedule,
                                   const ObjectiveSpec& spec);

// Composite gradient with its two parts (tracking part is zero for the
// control-derivative and none kinds).
GradientField gradient(const ControlledHamiltonian& model,
                       const ControlSchedule& schedule,
                       const Trajectory& trajectory,
                       const ObjectiveSpec& spec);

// Scalar J for one schedule (used by the optimizer's line search).
double composite_value(const ControlledHamiltonian& model,
                       const ControlSchedule& schedule,
                       const ObjectiveSpec& spec);

}  // namespace aqopt
