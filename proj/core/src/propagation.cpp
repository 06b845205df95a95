#include "aqopt/propagation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "aqopt/errors.hpp"

namespace aqopt {

namespace {

constexpr double kHermTol = 1e-12;

// exp(-i H dt) for a 2x2 Hermitian H, written H = a I + v.sigma:
//   exp(-i H dt) = e^{-i a dt} [cos(w dt) I - i sin(w dt)/w (H - a I)]
// with w = |v|. The sin(w dt)/w factor degenerates gracefully to dt as
// w -> 0, where the propagator is a pure phase.
Matrix expm_two_level(const Matrix& H, double dt) {
  const double a = 0.5 * (H(0, 0).real() + H(1, 1).real());
  const double vz = 0.5 * (H(0, 0).real() - H(1, 1).real());
  const Complex b = H(0, 1);
  const double w = std::sqrt(vz * vz + std::norm(b));

  const Complex phase = std::polar(1.0, -a * dt);
  const double c = std::cos(w * dt);
  const double s_over_w = w > 0.0 ? std::sin(w * dt) / w : dt;

  Matrix U(2, 2);
  const Complex i_s(0.0, s_over_w);
  U(0, 0) = phase * (c - i_s * vz);
  U(0, 1) = phase * (-i_s * b);
  U(1, 0) = phase * (-i_s * std::conj(b));
  U(1, 1) = phase * (c + i_s * vz);
  return U;
}

}  // namespace

Matrix step_propagator(const Matrix& H, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ArgumentError("step_propagator: dt must be positive and finite");
  }
  if (H.rows() != H.cols() || H.rows() < 2) {
    throw ArgumentError("step_propagator: Hamiltonian must be square with dimension >= 2");
  }
  if (hermiticity_defect(H) > kHermTol) {
    throw ValidationError("step_propagator: Hamiltonian is not Hermitian within 1e-12");
  }

  if (H.rows() == 2) {
    return expm_two_level(H, dt);
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
  if (solver.info() != Eigen::Success) {
    throw ValidationError("step_propagator: eigendecomposition failed");
  }
  const RealVector& energies = solver.eigenvalues();
  const Matrix& vectors = solver.eigenvectors();
  Vector phases(H.rows());
  for (Eigen::Index k = 0; k < H.rows(); ++k) {
    phases(k) = std::polar(1.0, -energies(k) * dt);
  }
  return vectors * phases.asDiagonal() * vectors.adjoint();
}

Trajectory propagate(const ControlledHamiltonian& model,
                     const ControlSchedule& schedule,
                     const Vector& initial_state) {
  if (schedule.num_controls() != model.num_controls()) {
    throw ArgumentError("propagate: schedule has " +
                        std::to_string(schedule.num_controls()) +
                        " control rows but the model has " +
                        std::to_string(model.num_controls()) + " controls");
  }
  if (initial_state.size() != model.dim()) {
    throw ArgumentError("propagate: initial state dimension does not match the model");
  }
  const double norm = initial_state.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-8) {
    throw ValidationError("propagate: initial state must be normalized within 1e-8");
  }

  const int L = schedule.intervals();
  const int N = static_cast<int>(model.dim());
  const double half = 0.5 * schedule.dt();

  Trajectory traj;
  traj.initial_state = initial_state;
  traj.dt = schedule.dt();
  traj.unitaries.reserve(L + 1);
  traj.midpoint_unitaries.reserve(L);
  traj.states.reserve(L + 1);
  traj.unitaries.push_back(Matrix::Identity(N, N));
  traj.states.push_back(initial_state);

  for (int l = 1; l <= L; ++l) {
    const Matrix H = assemble(model, schedule.samples.col(l - 1));
    const Matrix P_half = step_propagator(H, half);
    Matrix V = P_half * traj.unitaries.back();
    Matrix U = P_half * V;
    traj.states.push_back(U * initial_state);
    traj.midpoint_unitaries.push_back(std::move(V));
    traj.unitaries.push_back(std::move(U));
  }
  return traj;
}

}  // namespace aqopt
