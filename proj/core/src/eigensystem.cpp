#include "aqopt/eigensystem.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "aqopt/errors.hpp"
#include "aqopt/model.hpp"

namespace aqopt {

namespace {

constexpr double kGaugeTol = 1e-12;

// Phase-rotate v (unit norm) so component `idx` becomes real with the given
// sign (+1 or -1); leaves v untouched when that component is negligible.
bool fix_phase_at(Vector& v, Eigen::Index idx, double sign) {
  const Complex c = v[idx];
  const double mag = std::abs(c);
  if (mag <= kGaugeTol) return false;
  v *= sign * std::conj(c) / mag;
  return true;
}

// Two-level gauge: ground state first component real <= 0, excited
// first component real >= 0; both fall back to second component real >= 0.
void gauge_two_level(Vector& v, bool is_ground) {
  if (!fix_phase_at(v, 0, is_ground ? -1.0 : 1.0)) {
    fix_phase_at(v, 1, 1.0);
  }
}

// General gauge: largest-magnitude component (lowest index on ties) made
// real and positive.
void gauge_general(Vector& v) {
  Eigen::Index best = 0;
  double best_mag = std::abs(v[0]);
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > best_mag) {
      best_mag = mag;
      best = i;
    }
  }
  fix_phase_at(v, best, 1.0);
}

// Closed-form Hermitian 2x2 eigensystem. With H = [[a, b], [conj(b), c]],
// the eigenvalues are m -+ r where m = (a+c)/2, r = sqrt(d^2 + |b|^2),
// d = (a-c)/2; the eigenvector branch is chosen by the sign of d so the
// normalization 2r(r+|d|) never cancels.
EigenSystem eigensystem_2x2(const Matrix& H) {
  const double a = H(0, 0).real();
  const double c = H(1, 1).real();
  const Complex b = H(0, 1);
  const double m = 0.5 * (a + c);
  const double d = 0.5 * (a - c);
  const double r = std::hypot(d, std::abs(b));

  EigenSystem out;
  out.energies = RealVector(2);
  out.energies << m - r, m + r;
  out.gap = 2.0 * r;
  out.vectors = Matrix(2, 2);

  if (r < 1e-300) {  // degenerate: any orthonormal pair is an eigenbasis
    out.vectors.setIdentity();
    return out;
  }

  Vector ground(2), excited(2);
  if (d >= 0.0) {
    ground << b, -(r + d);
    excited << r + d, std::conj(b);
  } else {
    ground << d - r, std::conj(b);
    excited << b, r - d;
  }
  ground.normalize();
  excited.normalize();
  gauge_two_level(ground, true);
  gauge_two_level(excited, false);
  out.vectors.col(0) = ground;
  out.vectors.col(1) = excited;
  return out;
}

}  // namespace

EigenSystem eigensystem(const Matrix& H) {
  if (H.rows() != H.cols() || H.rows() < 2) {
    throw ArgumentError("eigensystem: operator must be square with N >= 2");
  }
  if (hermiticity_defect(H) > 1e-12) {
    throw ValidationError("eigensystem: operator is not Hermitian within 1e-12");
  }
  if (H.rows() == 2) {
    return eigensystem_2x2(H);
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
  EigenSystem out;
  out.energies = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  for (Eigen::Index i = 0; i < out.vectors.cols(); ++i) {
    Vector v = out.vectors.col(i);
    gauge_general(v);
    out.vectors.col(i) = v;
  }
  out.gap = out.energies[1] - out.energies[0];
  return out;
}

}  // namespace aqopt
