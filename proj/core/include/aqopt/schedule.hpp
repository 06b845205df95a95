#pragma once

#include "aqopt/types.hpp"

namespace aqopt {

// K real control functions, piecewise constant on L uniform intervals over
// [0, T]. samples(k, l) is the value of u_k on (t_l, t_{l+1}] with
// t_l = l T / L (l is 0-based here; the interval containing time t > 0 has
// index floor(t/dt), clamped to L-1).
struct ControlSchedule {
  double horizon = 0.0;  // T, time units with hbar = 1
  RealMatrix samples;    // K x L

  int num_controls() const { return static_cast<int>(samples.rows()); }
  int intervals() const { return static_cast<int>(samples.cols()); }
  double dt() const { return horizon / intervals(); }
};

// Validating factory: T > 0, L >= 1, K >= 1, all samples finite.
ControlSchedule make_schedule(double horizon, RealMatrix samples);

// Scaled midpoints s_m = (m + 1/2)/L for m = 0..L-1; smooth schedules are
// sampled at these points (second-order accurate piecewise-constant
// representation).
RealVector interval_midpoints(int intervals);

}  // namespace aqopt
