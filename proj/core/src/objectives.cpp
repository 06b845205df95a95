#include "aqopt/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "aqopt/errors.hpp"

namespace aqopt {

namespace {

constexpr double kDegenerateTol = 1e-12;

// Trapezoid weight of grid node l in an L-interval quadrature; the weighted
// node sum divided by L is the time average over [0, T].
double trap_weight(int l, int L) { return (l == 0 || l == L) ? 0.5 : 1.0; }

// Node l takes its instantaneous Hamiltonian from the interval containing it;
// node 0 shares interval 1.
int node_interval(int l) { return std::max(l, 1); }

void check_spec_states(const ControlledHamiltonian& model, const ObjectiveSpec& spec) {
  if (spec.initial_state.size() != model.dim() ||
      spec.target_state.size() != model.dim()) {
    throw ArgumentError("objective states must match the model dimension");
  }
}

void check_trajectory(const Trajectory& trajectory, const ControlledHamiltonian& model,
                      const ControlSchedule& schedule) {
  if (trajectory.intervals() != schedule.intervals()) {
    throw ArgumentError("trajectory and schedule disagree on the interval count");
  }
  if (trajectory.unitaries.empty() || trajectory.unitaries.front().rows() != model.dim()) {
    throw ArgumentError("trajectory dimension does not match the model");
  }
}

std::vector<Matrix> interval_hamiltonians(const ControlledHamiltonian& model,
                                          const ControlSchedule& schedule) {
  const int L = schedule.intervals();
  std::vector<Matrix> out;
  out.reserve(L);
  for (int m = 1; m <= L; ++m) {
    out.push_back(assemble(model, schedule.samples.col(m - 1)));
  }
  return out;
}

std::vector<EigenSystem> interval_eigensystems(const ControlledHamiltonian& model,
                                               const ControlSchedule& schedule) {
  const int L = schedule.intervals();
  std::vector<EigenSystem> out;
  out.reserve(L);
  for (int m = 1; m <= L; ++m) {
    out.push_back(eigensystem(assemble(model, schedule.samples.col(m - 1))));
  }
  return out;
}

[[noreturn]] void throw_degenerate(int node) {
  throw DegenerateSpectrumError("spectral gap is below threshold at grid node " +
                                std::to_string(node));
}

// Value and first-derivative weights of the Lagrange polynomial through the
// n uniformly spaced points xi = 0..n-1, evaluated at xp (sample-spacing
// units).
void lagrange_weights(int n, double xp, std::vector<double>& value,
                      std::vector<double>& deriv) {
  value.assign(n, 0.0);
  deriv.assign(n, 0.0);
  if (n == 1) {
    value[0] = 1.0;
    return;
  }
  for (int i = 0; i < n; ++i) {
    double denom = 1.0;
    double num = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      denom *= static_cast<double>(i - j);
      num *= xp - j;
    }
    double dnum = 0.0;
    for (int q = 0; q < n; ++q) {
      if (q == i) continue;
      double partial = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j == i || j == q) continue;
        partial *= xp - j;
      }
      dnum += partial;
    }
    value[i] = num / denom;
    deriv[i] = dnum / denom;
  }
}

// Midpoint-anchored Heisenberg ingredients shared by the gradient and
// Hessian assemblies: a_l = V_l |i> and, when a target is involved,
// b_l = V_l U_T^dag |f>.
std::vector<Vector> midpoint_states(const Trajectory& trajectory, const Vector& seed) {
  std::vector<Vector> out;
  out.reserve(trajectory.intervals());
  for (const Matrix& V : trajectory.midpoint_unitaries) {
    out.push_back(V * seed);
  }
  return out;
}

// Tracking contribution to the composite J for one propagated schedule.
double tracking_value(const Trajectory& trajectory, const ControlledHamiltonian& model,
                      const ControlSchedule& schedule, const ObjectiveSpec& spec) {
  switch (spec.tracking) {
    case TrackingKind::population:
      return spec.alpha * population_series(trajectory, model, schedule).average;
    case TrackingKind::energy:
      return -spec.alpha * energy_series(trajectory, model, schedule).average;
    case TrackingKind::control_derivative:
      return control_derivative_cost(schedule, spec.alpha);
    case TrackingKind::none:
      return 0.0;
  }
  throw ArgumentError("unknown tracking kind");
}

}  // namespace

std::string tracking_name(TrackingKind kind) {
  switch (kind) {
    case TrackingKind::population: return "population";
    case TrackingKind::energy: return "energy";
    case TrackingKind::control_derivative: return "control-derivative";
    case TrackingKind::none: return "none";
  }
  throw ArgumentError("unknown tracking kind");
}

TrackingKind parse_tracking(const std::string& name) {
  if (name == "population") return TrackingKind::population;
  if (name == "energy") return TrackingKind::energy;
  if (name == "control-derivative") return TrackingKind::control_derivative;
  if (name == "none") return TrackingKind::none;
  throw ArgumentError("unknown tracking kind \"" + name +
                      "\" (expected population, energy, control-derivative, or none)");
}

double fidelity(const Trajectory& trajectory, const ObjectiveSpec& spec) {
  if (spec.target_state.size() != trajectory.states.back().size()) {
    throw ArgumentError("target state dimension does not match the trajectory");
  }
  return std::norm(spec.target_state.dot(trajectory.states.back()));
}

SeriesAverage population_series(const Trajectory& trajectory,
                                const ControlledHamiltonian& model,
                                const ControlSchedule& schedule) {
  check_trajectory(trajectory, model, schedule);
  const int L = schedule.intervals();
  const std::vector<EigenSystem> esys = interval_eigensystems(model, schedule);

  SeriesAverage out;
  out.series.resize(L + 1);
  double acc = 0.0;
  for (int l = 0; l <= L; ++l) {
    const EigenSystem& es = esys[node_interval(l) - 1];
    if (es.gap <= kDegenerateTol) throw_degenerate(l);
    const double p0 = std::norm(es.ground().dot(trajectory.states[l]));
    out.series(l) = p0;
    acc += trap_weight(l, L) * p0;
  }
  out.average = acc / L;
  return out;
}

SeriesAverage energy_series(const Trajectory& trajectory,
                            const ControlledHamiltonian& model,
                            const ControlSchedule& schedule) {
  check_trajectory(trajectory, model, schedule);
  const int L = schedule.intervals();
  const std::vector<Matrix> hams = interval_hamiltonians(model, schedule);

  SeriesAverage out;
  out.series.resize(L + 1);
  double acc = 0.0;
  for (int l = 0; l <= L; ++l) {
    const Vector& psi = trajectory.states[l];
    const double e = psi.dot(hams[node_interval(l) - 1] * psi).real();
    out.series(l) = e;
    acc += trap_weight(l, L) * e;
  }
  out.average = acc / L;
  return out;
}

RealVector adiabatic_ratio_series(const ControlSchedule& schedule) {
  if (schedule.num_controls() != 2) {
    throw UnsupportedModelError(
        "the adiabatic ratio is defined for the two-control x/z form");
  }
  const int L = schedule.intervals();
  const double T = schedule.horizon;
  const int n = std::min(4, L);

  RealVector out(L + 1);
  std::vector<double> w, dw;
  for (int l = 0; l <= L; ++l) {
    const int m0 = std::clamp(l - n / 2, 0, L - n);
    // Node l sits at sample coordinate l - m0 - 1/2 inside the window
    // (samples live at interval midpoints).
    lagrange_weights(n, l - m0 - 0.5, w, dw);
    double x = 0.0, z = 0.0, dx = 0.0, dz = 0.0;
    for (int i = 0; i < n; ++i) {
      x += w[i] * schedule.samples(0, m0 + i);
      z += w[i] * schedule.samples(1, m0 + i);
      dx += dw[i] * schedule.samples(0, m0 + i);
      dz += dw[i] * schedule.samples(1, m0 + i);
    }
    dx *= L;  // sample-spacing units -> d/ds
    dz *= L;
    const double h2 = x * x + z * z;
    if (h2 <= 1e-24) throw_degenerate(l);
    out(l) = std::abs(x * dz - z * dx) / (4.0 * h2 * std::sqrt(h2) * T);
  }
  return out;
}

double control_derivative_cost(const ControlSchedule& schedule, double alpha) {
  const int K = schedule.num_controls();
  const int L = schedule.intervals();
  if (L < 2) return 0.0;
  double acc = 0.0;
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m + 1 < L; ++m) {
      const double d = schedule.samples(k, m + 1) - schedule.samples(k, m);
      acc += d * d;
    }
  }
  return -alpha / (K * schedule.horizon) * acc / schedule.dt();
}

RealMatrix grad_fidelity(const Trajectory& trajectory,
                         const ControlledHamiltonian& model,
                         const ObjectiveSpec& spec) {
  check_spec_states(model, spec);
  const int K = model.num_controls();
  const int L = trajectory.intervals();
  const double dt = trajectory.dt;

  const Complex ov = spec.target_state.dot(trajectory.states.back());
  const Vector back_target = trajectory.final_unitary().adjoint() * spec.target_state;

  RealMatrix grad(K, L);
  for (int l = 1; l <= L; ++l) {
    const Matrix& V = trajectory.midpoint_unitaries[l - 1];
    const Vector a = V * trajectory.initial_state;
    const Vector b = V * back_target;
    for (int k = 0; k < K; ++k) {
      const Complex m = b.dot(model.couplings[k] * a);
      grad(k, l - 1) = 2.0 * dt * std::imag(std::conj(ov) * m);
    }
  }
  return grad;
}

GroundDerivative ground_state_derivative_xz(double x, double z) {
  const double h = std::hypot(x, z);
  if (h <= kDegenerateTol) {
    throw DegenerateSpectrumError("ground-state derivative undefined at zero field");
  }
  const double scale = 1.0 / std::sqrt(8.0 * h * h * h * h * h);
  Vector dir(2);
  dir << std::sqrt(std::max(h + z, 0.0)), std::sqrt(std::max(h - z, 0.0));
  GroundDerivative out;
  out.chi.push_back((-z * scale) * dir);
  out.chi.push_back((x * scale) * dir);
  return out;
}

RealMatrix grad_population_tracking(const Trajectory& trajectory,
                                    const ControlledHamiltonian& model,
                                    const ControlSchedule& schedule,
                                    const ObjectiveSpec& spec) {
  if (!is_xz_model(model)) {
    throw UnsupportedModelError(
        "population-tracking gradients are implemented for the one-qubit x/z model only");
  }
  check_trajectory(trajectory, model, schedule);
  const int K = model.num_controls();
  const int L = schedule.intervals();
  const double dt = schedule.dt();
  const double alpha = spec.alpha;

  RealMatrix grad = RealMatrix::Zero(K, L);
  if (alpha == 0.0) return grad;

  const std::vector<EigenSystem> esys = interval_eigensystems(model, schedule);

  // Per-node overlaps for the boundary (chi) term and the vectors
  // d_l = U_l^dag phi0(l) scaled by the ground overlap for the suffix sums of
  // the propagation term.
  std::vector<Complex> c(L + 1), p1(L + 1);
  std::vector<Vector> d(L + 1);
  for (int l = 0; l <= L; ++l) {
    const EigenSystem& es = esys[node_interval(l) - 1];
    if (es.gap <= kDegenerateTol) throw_degenerate(l);
    const Vector phi0 = es.ground();
    c[l] = phi0.dot(trajectory.states[l]);
    p1[l] = es.vectors.col(1).dot(trajectory.states[l]);
    d[l] = trajectory.unitaries[l].adjoint() * phi0;
  }

  // Boundary term: the instantaneous ground state of interval m depends on
  // u_{k,m}; each node anchored to that interval contributes
  // 2 Re[conj(c_l) <chi_k|psi_l>] with <chi_k|psi_l> = -(t_k/g) <phi1|psi_l>,
  // gauge-invariant through the projector form. Node 0 folds into m = 1.
  for (int l = 0; l <= L; ++l) {
    const int m = node_interval(l);
    const EigenSystem& es = esys[m - 1];
    const Vector phi0 = es.ground();
    const Vector phi1 = es.vectors.col(1);
    const double w = trap_weight(l, L);
    for (int k = 0; k < K; ++k) {
      const Complex t_k = phi0.dot(model.couplings[k] * phi1);
      grad(k, m - 1) += -(2.0 * alpha * w / (L * es.gap)) *
                        std::real(std::conj(c[l]) * t_k * p1[l]);
    }
  }

  // Propagation term: nodes l >= m respond to u_{k,m} through
  // dpsi_l = -i dt U_l A_k(t_m) |i>, with A_k anchored at the interval
  // midpoint. Accumulated as suffix sums S_m = sum_{l>=m} w_l c_l d_l.
  Vector S = Vector::Zero(model.dim());
  for (int m = L; m >= 1; --m) {
    S += trap_weight(m, L) * c[m] * d[m];
    const Matrix& V = trajectory.midpoint_unitaries[m - 1];
    const Vector a = V * trajectory.initial_state;
    const Vector G = V * S;
    for (int k = 0; k < K; ++k) {
      grad(k, m - 1) += (2.0 * alpha * dt / L) * std::imag(G.dot(model.couplings[k] * a));
    }
  }
  return grad;
}

RealMatrix grad_energy_tracking(const Trajectory& trajectory,
                                const ControlledHamiltonian& model,
                                const ControlSchedule& schedule,
                                const ObjectiveSpec& spec) {
  check_trajectory(trajectory, model, schedule);
  const int K = model.num_controls();
  const int L = schedule.intervals();
  const double dt = schedule.dt();
  const double alpha = spec.alpha;

  RealMatrix grad = RealMatrix::Zero(K, L);
  if (alpha == 0.0) return grad;

  const std::vector<Matrix> hams = interval_hamiltonians(model, schedule);

  // Explicit term: node l's Hamiltonian depends on its interval's sample,
  // d E_l / d u_k = <psi_l| A_k |psi_l> at the node state.
  for (int l = 0; l <= L; ++l) {
    const int m = node_interval(l);
    const Vector& psi = trajectory.states[l];
    const double w = trap_weight(l, L);
    for (int k = 0; k < K; ++k) {
      grad(k, m - 1) += -(alpha * w / L) * psi.dot(model.couplings[k] * psi).real();
    }
  }

  // Propagation term with suffix sums of e_l = U_l^dag H(t_l) psi_l.
  Vector S = Vector::Zero(model.dim());
  for (int m = L; m >= 1; --m) {
    S += trap_weight(m, L) *
         (trajectory.unitaries[m].adjoint() * (hams[m - 1] * trajectory.states[m]));
    const Matrix& V = trajectory.midpoint_unitaries[m - 1];
    const Vector a = V * trajectory.initial_state;
    const Vector G = V * S;
    for (int k = 0; k < K; ++k) {
      grad(k, m - 1) += -(2.0 * alpha * dt / L) * std::imag(G.dot(model.couplings[k] * a));
    }
  }
  return grad;
}

HessianMatrix hessian_fidelity(const Trajectory& trajectory,
                               const ControlledHamiltonian& model,
                               const ObjectiveSpec& spec) {
  check_spec_states(model, spec);
  const int K = model.num_controls();
  const int L = trajectory.intervals();
  const double dt2 = trajectory.dt * trajectory.dt;

  const Complex ov = spec.target_state.dot(trajectory.states.back());
  const Vector back_target = trajectory.final_unitary().adjoint() * spec.target_state;
  const std::vector<Vector> a = midpoint_states(trajectory, trajectory.initial_state);
  const std::vector<Vector> b = midpoint_states(trajectory, back_target);

  // Q[k][l] = A_k a_l, P[k][l] = A_k b_l, M(k,l) = <f|U_T A_k(t_l)|i>.
  std::vector<std::vector<Vector>> Q(K), P(K);
  Eigen::MatrixXcd M(K, L);
  for (int k = 0; k < K; ++k) {
    Q[k].reserve(L);
    P[k].reserve(L);
    for (int l = 0; l < L; ++l) {
      Q[k].push_back(model.couplings[k] * a[l]);
      P[k].push_back(model.couplings[k] * b[l]);
      M(k, l) = b[l].dot(Q[k][l]);
    }
  }

  HessianMatrix out;
  out.values.resize(K * L, K * L);
  for (int lp = 1; lp <= L; ++lp) {
    for (int l = 1; l <= lp; ++l) {
      if (l < lp) {
        // Later time leftmost: <f|U_T A_j(t_lp) A_k(t_l)|i>
        //   = (A_j b_lp)^dag (V_lp V_l^dag) (A_k a_l).
        const Matrix W = trajectory.midpoint_unitaries[lp - 1] *
                         trajectory.midpoint_unitaries[l - 1].adjoint();
        for (int j = 0; j < K; ++j) {
          for (int k = 0; k < K; ++k) {
            const Complex t1 = P[j][lp - 1].dot(W * Q[k][l - 1]);
            const double entry =
                2.0 * dt2 *
                std::real(-std::conj(ov) * t1 + std::conj(M(k, l - 1)) * M(j, lp - 1));
            out.values(k * L + l - 1, j * L + lp - 1) = entry;
            out.values(j * L + lp - 1, k * L + l - 1) = entry;
          }
        }
      } else {
        // Equal times: symmetrized product (1/2){A_k, A_j} at one anchor.
        for (int j = 0; j < K; ++j) {
          for (int k = 0; k <= j; ++k) {
            const Complex t1 = 0.5 * (P[j][l - 1].dot(Q[k][l - 1]) +
                                      P[k][l - 1].dot(Q[j][l - 1]));
            const double entry =
                2.0 * dt2 *
                std::real(-std::conj(ov) * t1 + std::conj(M(k, l - 1)) * M(j, l - 1));
            out.values(k * L + l - 1, j * L + l - 1) = entry;
            out.values(j * L + l - 1, k * L + l - 1) = entry;
          }
        }
      }
    }
  }
  return out;
}

HessianMatrix hessian_at_optimum(const Trajectory& trajectory,
                                 const ControlledHamiltonian& model,
                                 const ObjectiveSpec& spec) {
  check_spec_states(model, spec);
  const double F = fidelity(trajectory, spec);
  if (F < 1.0 - 1e-8) {
    throw NotAtOptimumError(
        "the at-optimum Hessian requires fidelity within 1e-8 of 1");
  }
  const int K = model.num_controls();
  const int L = trajectory.intervals();
  const double dt2 = trajectory.dt * trajectory.dt;

  const std::vector<Vector> a = midpoint_states(trajectory, trajectory.initial_state);
  std::vector<std::vector<Vector>> Q(K);
  RealMatrix mean(K, L);
  for (int k = 0; k < K; ++k) {
    Q[k].reserve(L);
    for (int l = 0; l < L; ++l) {
      Q[k].push_back(model.couplings[k] * a[l]);
      mean(k, l) = a[l].dot(Q[k][l]).real();
    }
  }

  HessianMatrix out;
  out.values.resize(K * L, K * L);
  for (int lp = 1; lp <= L; ++lp) {
    for (int l = 1; l <= lp; ++l) {
      Matrix W;
      if (l < lp) {
        W = trajectory.midpoint_unitaries[l - 1] *
            trajectory.midpoint_unitaries[lp - 1].adjoint();
      }
      for (int j = 0; j < K; ++j) {
        for (int k = 0; k < K; ++k) {
          if (l == lp && k > j) continue;
          // <i|A_k(t_l) A_j(t_lp)|i> = (A_k a_l)^dag (V_l V_lp^dag) (A_j a_lp);
          // the anticommutator doubles its real part.
          const Complex cross = l < lp ? Q[k][l - 1].dot(W * Q[j][lp - 1])
                                       : Q[k][l - 1].dot(Q[j][lp - 1]);
          const double entry =
              (-2.0 * std::real(cross) +
               2.0 * mean(k, l - 1) * mean(j, lp - 1)) *
              dt2;
          out.values(k * L + l - 1, j * L + lp - 1) = entry;
          out.values(j * L + lp - 1, k * L + l - 1) = entry;
        }
      }
    }
  }
  return out;
}

ObjectiveReport evaluate_objective(const ControlledHamiltonian& model,
                                   const ControlSchedule& schedule,
                                   const ObjectiveSpec& spec) {
  check_spec_states(model, spec);
  const Trajectory traj = propagate(model, schedule, spec.initial_state);
  const int L = schedule.intervals();

  ObjectiveReport report;
  report.fidelity = fidelity(traj, spec);
  report.infidelity = 1.0 - report.fidelity;

  const SeriesAverage pop = population_series(traj, model, schedule);
  report.pop_series = pop.series;
  report.avg_population = pop.average;

  const SeriesAverage energy = energy_series(traj, model, schedule);
  report.energy_series = energy.series;
  report.avg_energy = energy.average;

  report.gap_series.resize(L + 1);
  const std::vector<EigenSystem> esys = interval_eigensystems(model, schedule);
  for (int l = 0; l <= L; ++l) {
    report.gap_series(l) = esys[node_interval(l) - 1].gap;
  }

  if (is_xz_model(model)) {
    report.ratio_series = adiabatic_ratio_series(schedule);
  } else {
    report.ratio_series = RealVector::Zero(L + 1);
  }

  report.composite = report.fidelity + tracking_value(traj, model, schedule, spec);
  return report;
}

GradientField gradient(const ControlledHamiltonian& model,
                       const ControlSchedule& schedule,
                       const Trajectory& trajectory,
                       const ObjectiveSpec& spec) {
  check_trajectory(trajectory, model, schedule);
  GradientField field;
  field.fidelity_part = grad_fidelity(trajectory, model, spec);
  switch (spec.tracking) {
    case TrackingKind::population:
      field.tracking_part = grad_population_tracking(trajectory, model, schedule, spec);
      break;
    case TrackingKind::energy:
      field.tracking_part = grad_energy_tracking(trajectory, model, schedule, spec);
      break;
    case TrackingKind::control_derivative:
    case TrackingKind::none:
      field.tracking_part =
          RealMatrix::Zero(model.num_controls(), schedule.intervals());
      break;
  }
  field.values = field.fidelity_part + field.tracking_part;
  return field;
}

double composite_value(const ControlledHamiltonian& model,
                       const ControlSchedule& schedule,
                       const ObjectiveSpec& spec) {
  check_spec_states(model, spec);
  const Trajectory traj = propagate(model, schedule, spec.initial_state);
  return fidelity(traj, spec) + tracking_value(traj, model, schedule, spec);
}

}  // namespace aqopt
