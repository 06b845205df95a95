#pragma once

#include <vector>

#include "aqopt/types.hpp"

namespace aqopt {

// Control-linear Hamiltonian H(t) = A0 + sum_k u_k(t) A_k for a dense
// N-dimensional Hermitian system.
struct ControlledHamiltonian {
  Matrix drift;                   // A0, N x N Hermitian
  std::vector<Matrix> couplings;  // A_k, each N x N Hermitian, K >= 1

  int dim() const { return static_cast<int>(drift.rows()); }
  int num_controls() const { return static_cast<int>(couplings.size()); }
};

// Validating factory: checks N >= 2, K >= 1, square shapes, and Hermiticity
// of drift and couplings to 1e-12 max-norm.
ControlledHamiltonian make_model(Matrix drift, std::vector<Matrix> couplings);

// One-qubit model with zero drift and couplings {sigma_x, sigma_z}.
ControlledHamiltonian xz_model();

// True when `model` is the one-qubit x/z model (zero drift, couplings exactly
// sigma_x then sigma_z within 1e-12).
bool is_xz_model(const ControlledHamiltonian& model);

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

// A0 + sum_k values_k A_k. Throws ArgumentError on length mismatch.
Matrix assemble(const ControlledHamiltonian& model, const RealVector& values);

// U^dag A U. Throws ArgumentError on shape mismatch.
Matrix heisenberg_coupling(const Matrix& U, const Matrix& A);

// Max-norm Hermiticity defect |H - H^dag|_max.
double hermiticity_defect(const Matrix& H);

}  // namespace aqopt
