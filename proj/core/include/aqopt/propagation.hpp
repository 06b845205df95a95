#pragma once

#include <vector>

#include "aqopt/model.hpp"
#include "aqopt/schedule.hpp"
#include "aqopt/types.hpp"

namespace aqopt {

// Exact step propagator exp(-i H dt) via eigendecomposition (closed form for
// N = 2); unitary to roundoff. Throws ValidationError if H is not Hermitian
// within 1e-12 and ArgumentError if dt <= 0.
Matrix step_propagator(const Matrix& H, double dt);

// Cumulative evolution of one schedule: node unitaries U(t_l) = P_l ... P_1,
// the states they generate, and the mid-interval propagators
// V_l = exp(-i H_l dt/2) U(t_{l-1}) that gradient and Hessian evaluation
// anchor their Heisenberg operators at.
struct Trajectory {
  std::vector<Matrix> unitaries;           // L+1 entries, unitaries[0] = I
  std::vector<Matrix> midpoint_unitaries;  // L entries, V_1..V_L
  std::vector<Vector> states;              // L+1 entries, states[l] = U(t_l) psi0
  Vector initial_state;
  double dt = 0.0;  // interval length T/L of the generating schedule

  int intervals() const { return static_cast<int>(midpoint_unitaries.size()); }
  const Matrix& final_unitary() const { return unitaries.back(); }
};

// Exact piecewise-constant propagation. Each node unitary is the product of
// exact step exponentials (each step applied as two half-steps so the
// midpoint propagators come for free). Throws ValidationError when the
// initial state norm is outside 1 +/- 1e-8 or samples are not finite, and
// ArgumentError on shape mismatches.
Trajectory propagate(const ControlledHamiltonian& model,
                     const ControlSchedule& schedule,
                     const Vector& initial_state);

}  // namespace aqopt
