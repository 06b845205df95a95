#include "aqopt/model.hpp"

#include <string>
#include <utility>

#include "aqopt/errors.hpp"

namespace aqopt {

namespace {
constexpr double kHermTol = 1e-12;
}

double hermiticity_defect(const Matrix& H) {
  return (H - H.adjoint()).cwiseAbs().maxCoeff();
}

ControlledHamiltonian make_model(Matrix drift, std::vector<Matrix> couplings) {
  const auto n = drift.rows();
  if (n < 2 || drift.cols() != n) {
    throw ArgumentError("model drift must be square with dimension >= 2");
  }
  if (couplings.empty()) {
    throw ArgumentError("model needs at least one coupling operator");
  }
  if (hermiticity_defect(drift) > kHermTol) {
    throw ValidationError("model drift is not Hermitian within 1e-12");
  }
  for (std::size_t k = 0; k < couplings.size(); ++k) {
    if (couplings[k].rows() != n || couplings[k].cols() != n) {
      throw ArgumentError("coupling " + std::to_string(k) +
                          " does not match the drift dimension");
    }
    if (hermiticity_defect(couplings[k]) > kHermTol) {
      throw ValidationError("coupling " + std::to_string(k) +
                            " is not Hermitian within 1e-12");
    }
  }
  return ControlledHamiltonian{std::move(drift), std::move(couplings)};
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ControlledHamiltonian xz_model() {
  return make_model(Matrix::Zero(2, 2), {pauli_x(), pauli_z()});
}

bool is_xz_model(const ControlledHamiltonian& model) {
  if (model.dim() != 2 || model.num_controls() != 2) return false;
  const double tol = 1e-12;
  return model.drift.cwiseAbs().maxCoeff() <= tol &&
         (model.couplings[0] - pauli_x()).cwiseAbs().maxCoeff() <= tol &&
         (model.couplings[1] - pauli_z()).cwiseAbs().maxCoeff() <= tol;
}

Matrix assemble(const ControlledHamiltonian& model, const RealVector& values) {
  if (values.size() != model.num_controls()) {
    throw ArgumentError("assemble: expected " +
                        std::to_string(model.num_controls()) +
                        " control values, got " +
                        std::to_string(values.size()));
  }
  Matrix H = model.drift;
  for (int k = 0; k < model.num_controls(); ++k) {
    H.noalias() += values[k] * model.couplings[k];
  }
  return H;
}

Matrix heisenberg_coupling(const Matrix& U, const Matrix& A) {
  if (U.rows() != U.cols() || A.rows() != A.cols() || U.rows() != A.rows()) {
    throw ArgumentError("heisenberg_coupling: shape mismatch");
  }
  return U.adjoint() * A * U;
}

}  // namespace aqopt
