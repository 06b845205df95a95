#include "aqopt/families.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "aqopt/errors.hpp"
#include "aqopt/model.hpp"

namespace aqopt {

namespace {

constexpr double kPi = std::numbers::pi;

ControlSchedule sample_curves(const FamilyCurves& curves, double T, int L) {
  if (L < 1) {
    throw ArgumentError("family schedules need at least one interval");
  }
  RealMatrix samples(2, L);
  for (int m = 0; m < L; ++m) {
    const double s = (m + 0.5) / L;
    samples(0, m) = curves.x(s);
    samples(1, m) = curves.z(s);
  }
  return make_schedule(T, std::move(samples));
}

AdiabaticSolution closed_form_set(ProblemLabel problem, const std::string& family,
                                  double T, int L) {
  FamilyCurves curves = family_curves(problem, family);
  AdiabaticSolution out;
  out.schedule = sample_curves(curves, T, L);
  out.lambda = curves.lambda;
  out.epsilon = curves.epsilon_times_T / T;
  out.family = family;
  return out;
}

}  // namespace

AqcProblem make_problem(ProblemLabel label) {
  AqcProblem p;
  p.label = label;
  p.initial_hamiltonian = pauli_x();
  p.x_start = 1.0;
  p.z_start = 0.0;
  p.z_end = 1.0;
  if (label == ProblemLabel::I) {
    p.final_hamiltonian = pauli_x() + pauli_z();
    p.x_end = 1.0;
  } else {
    p.final_hamiltonian = pauli_z();
    p.x_end = 0.0;
  }
  return p;
}

std::string problem_name(ProblemLabel label) {
  return label == ProblemLabel::I ? "I" : "II";
}

ProblemLabel parse_problem(const std::string& name) {
  if (name == "I") return ProblemLabel::I;
  if (name == "II") return ProblemLabel::II;
  throw ArgumentError("unknown problem \"" + name + "\" (expected \"I\" or \"II\")");
}

ControlSchedule linear_set(const AqcProblem& problem, double T, int L) {
  return sample_curves(family_curves(problem.label, "linear"), T, L);
}

AdiabaticSolution const_x_adiabatic_set(double T, int L) {
  return closed_form_set(ProblemLabel::I, "const-x", T, L);
}

AdiabaticSolution sine_x_adiabatic_set(double T, int L) {
  return closed_form_set(ProblemLabel::I, "sine-x", T, L);
}

AdiabaticSolution linear_constraint_adiabatic_set(double T, int L) {
  return closed_form_set(ProblemLabel::II, "linear-constraint", T, L);
}

AdiabaticSolution trig_adiabatic_set(double T, int L) {
  return closed_form_set(ProblemLabel::II, "trig", T, L);
}

AdiabaticSolution solve_adiabatic_ode(const AdiabaticOde& ode, double z_start,
                                      double z_end, double T, int L,
                                      const std::string& family) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw ArgumentError("solve_adiabatic_ode: T must be positive and finite");
  }
  if (L < 1) {
    throw ArgumentError("solve_adiabatic_ode: L must be at least 1");
  }
  if (!std::isfinite(ode.dzds(0.0, z_start, 1.0))) {
    throw DomainError("solve_adiabatic_ode: right-hand side is not finite at s = 0");
  }

  // One RK4 integration on the half grid; nodes 2l-1 are the interval
  // midpoints (2l-1)/(2L). Any non-finite value poisons the rest of the
  // array, which the shooting loop reads as an overshoot.
  const int steps = 2 * L;
  const double h = 1.0 / steps;
  auto integrate = [&](double lambda, std::vector<double>& zs) {
    zs.assign(steps + 1, std::numeric_limits<double>::quiet_NaN());
    double z = z_start;
    zs[0] = z;
    for (int n = 0; n < steps; ++n) {
      const double s = n * h;
      const double k1 = ode.dzds(s, z, lambda);
      const double k2 = ode.dzds(s + 0.5 * h, z + 0.5 * h * k1, lambda);
      const double k3 = ode.dzds(s + 0.5 * h, z + 0.5 * h * k2, lambda);
      const double k4 = ode.dzds(s + h, z + h * k3, lambda);
      z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!std::isfinite(z)) {
        return std::numeric_limits<double>::quiet_NaN();
      }
      zs[n + 1] = z;
    }
    return z;
  };

  const bool increasing = z_end > z_start;
  auto overshoots = [&](double z1) {
    return !std::isfinite(z1) || (increasing ? z1 > z_end : z1 < z_end);
  };

  std::vector<double> zs;
  double lo = 1e-6;
  if (overshoots(integrate(lo, zs))) {
    throw NoSolutionError(
        "solve_adiabatic_ode: the slowest admissible rate already overshoots the endpoint");
  }
  double hi = 0.0;
  for (double candidate = 1e-5; candidate <= 1e3; candidate *= 10.0) {
    if (overshoots(integrate(candidate, zs))) {
      hi = candidate;
      break;
    }
    lo = candidate;
  }
  if (hi == 0.0) {
    throw NoSolutionError(
        "solve_adiabatic_ode: no rate in [1e-6, 1e3] reaches the endpoint");
  }

  double lambda = lo;
  double z1 = integrate(lambda, zs);
  constexpr double kShootTol = 1e-10;
  // the continuation test is phrased so a non-finite probe keeps bisecting
  for (int it = 0; it < 200 && !(std::abs(z1 - z_end) <= kShootTol); ++it) {
    const double mid = 0.5 * (lo + hi);
    lambda = mid;
    z1 = integrate(mid, zs);
    if (overshoots(z1)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (!(std::abs(z1 - z_end) <= kShootTol)) {
    // the last probe may sit on the overshooting side; report the bracket
    // floor, the best iterate that stayed admissible
    lambda = lo;
    z1 = integrate(lambda, zs);
  }
  if (!(std::abs(z1 - z_end) <= kShootTol)) {
    throw NoSolutionError("solve_adiabatic_ode: shooting did not converge to the endpoint");
  }

  RealMatrix samples(2, L);
  for (int l = 1; l <= L; ++l) {
    const double s = (2 * l - 1) * h;
    const double z = zs[2 * l - 1];
    samples(0, l - 1) = ode.x_of(s, z);
    samples(1, l - 1) = z;
  }
  AdiabaticSolution out;
  out.schedule = make_schedule(T, std::move(samples));
  out.lambda = lambda;
  out.epsilon = lambda / (4.0 * T);
  out.family = family;
  return out;
}

FamilyCurves family_curves(ProblemLabel problem, const std::string& family) {
  FamilyCurves c;
  if (family == "linear") {
    if (problem == ProblemLabel::I) {
      c.x = [](double) { return 1.0; };
      c.dx = [](double) { return 0.0; };
    } else {
      c.x = [](double s) { return 1.0 - s; };
      c.dx = [](double) { return -1.0; };
    }
    c.z = [](double s) { return s; };
    c.dz = [](double) { return 1.0; };
    return c;
  }
  if (family == "const-x") {
    if (problem != ProblemLabel::I) {
      throw ArgumentError("family \"const-x\" only applies to problem I");
    }
    c.x = [](double) { return 1.0; };
    c.dx = [](double) { return 0.0; };
    c.z = [](double s) { return s / std::sqrt(2.0 - s * s); };
    c.dz = [](double s) { return 2.0 / std::pow(2.0 - s * s, 1.5); };
    c.lambda = 1.0 / std::sqrt(2.0);
    c.epsilon_times_T = 1.0 / std::sqrt(32.0);
    return c;
  }
  if (family == "sine-x") {
    if (problem != ProblemLabel::I) {
      throw ArgumentError("family \"sine-x\" only applies to problem I");
    }
    const double C = 2.0 * (kPi + 2.0) * (kPi + 2.0);
    c.x = [](double s) { return 1.0 + std::sin(kPi * s); };
    c.dx = [](double s) { return kPi * std::cos(kPi * s); };
    c.z = [C](double s) {
      const double x = 1.0 + std::sin(kPi * s);
      const double b = 1.0 + kPi * s - std::cos(kPi * s);
      return x * b / std::sqrt(C - b * b);
    };
    c.dz = [C](double s) {
      const double x = 1.0 + std::sin(kPi * s);
      const double b = 1.0 + kPi * s - std::cos(kPi * s);
      const double dx = kPi * std::cos(kPi * s);
      const double db = kPi * x;
      const double D = std::sqrt(C - b * b);
      return (dx * b + x * db) / D + x * b * b * db / (D * D * D);
    };
    c.lambda = kPi / (std::sqrt(2.0) * (kPi + 2.0));
    c.epsilon_times_T = kPi / (4.0 * std::sqrt(2.0) * (kPi + 2.0));
    return c;
  }
  if (family == "linear-constraint") {
    if (problem != ProblemLabel::II) {
      throw ArgumentError("family \"linear-constraint\" only applies to problem II");
    }
    // x + z = 1 with constant ratio; q = 1 - 2s, so 1 + 4s - 4s^2 = 2 - q^2.
    c.z = [](double s) {
      const double q = 1.0 - 2.0 * s;
      return 0.5 * (1.0 - q / std::sqrt(2.0 - q * q));
    };
    c.dz = [](double s) {
      const double q = 1.0 - 2.0 * s;
      return 2.0 / std::pow(2.0 - q * q, 1.5);
    };
    c.x = [z = c.z](double s) { return 1.0 - z(s); };
    c.dx = [dz = c.dz](double s) { return -dz(s); };
    c.lambda = 2.0;
    c.epsilon_times_T = 0.5;
    return c;
  }
  if (family == "trig") {
    if (problem != ProblemLabel::II) {
      throw ArgumentError("family \"trig\" only applies to problem II");
    }
    c.x = [](double s) { return std::cos(0.5 * kPi * s); };
    c.dx = [](double s) { return -0.5 * kPi * std::sin(0.5 * kPi * s); };
    c.z = [](double s) { return std::sin(0.5 * kPi * s); };
    c.dz = [](double s) { return 0.5 * kPi * std::cos(0.5 * kPi * s); };
    c.lambda = 0.5 * kPi;
    c.epsilon_times_T = kPi / 8.0;
    return c;
  }
  throw ArgumentError("unknown family \"" + family +
                      "\" (expected linear, const-x, sine-x, linear-constraint, or trig)");
}

double reference_gap(ProblemLabel problem, const std::string& family, double s) {
  const FamilyCurves c = family_curves(problem, family);
  const double x = c.x(s);
  const double z = c.z(s);
  return 2.0 * std::sqrt(x * x + z * z);
}

double analytic_ratio(const FamilyCurves& curves, double s, double T) {
  const double x = curves.x(s);
  const double z = curves.z(s);
  const double num = std::abs(x * curves.dz(s) - z * curves.dx(s));
  const double h = std::sqrt(x * x + z * z);
  return num / (4.0 * h * h * h * T);
}

InitialSet build_initial_set(ProblemLabel problem, const std::string& family,
                             double T, int L) {
  InitialSet out;
  out.family = family;
  if (family == "linear") {
    out.schedule = linear_set(make_problem(problem), T, L);
    return out;
  }
  const AdiabaticSolution sol = closed_form_set(problem, family, T, L);
  out.schedule = sol.schedule;
  out.epsilon = sol.epsilon;
  out.lambda = sol.lambda;
  return out;
}

}  // namespace aqopt
