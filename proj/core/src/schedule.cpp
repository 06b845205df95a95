#include "aqopt/schedule.hpp"

#include <cmath>
#include <utility>

#include "aqopt/errors.hpp"

namespace aqopt {

ControlSchedule make_schedule(double horizon, RealMatrix samples) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ArgumentError("schedule horizon must be positive and finite");
  }
  if (samples.rows() < 1 || samples.cols() < 1) {
    throw ArgumentError("schedule needs at least one control and one interval");
  }
  if (!samples.allFinite()) {
    throw ValidationError("schedule samples must all be finite");
  }
  return ControlSchedule{horizon, std::move(samples)};
}

RealVector interval_midpoints(int intervals) {
  if (intervals < 1) {
    throw ArgumentError("interval count must be positive");
  }
  RealVector s(intervals);
  for (int m = 0; m < intervals; ++m) {
    s[m] = (m + 0.5) / intervals;
  }
  return s;
}

}  // namespace aqopt
