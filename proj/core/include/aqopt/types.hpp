#pragma once

#include <complex>

#include <Eigen/Dense>

namespace aqopt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;      // dense complex operator
using Vector = Eigen::VectorXcd;      // complex state vector
using RealMatrix = Eigen::MatrixXd;   // K x L control samples, Hessians
using RealVector = Eigen::VectorXd;   // real series / eigenvalues

}  // namespace aqopt
