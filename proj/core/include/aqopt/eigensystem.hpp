#pragma once

#include "aqopt/types.hpp"

namespace aqopt {

// Instantaneous eigensystem of a Hermitian operator with a deterministic
// gauge, so that eigenvector derivatives and overlaps are well defined.
struct EigenSystem {
  RealVector energies;  // ascending, E0 <= ... <= E_{N-1}
  Matrix vectors;       // unit-norm eigenvectors as columns, gauge-fixed
  double gap = 0.0;     // E1 - E0 >= 0

  Vector ground() const { return vectors.col(0); }
};

// Sorted, gauge-fixed eigendecomposition. Degenerate spectra are permitted
// here; operations that divide by the gap reject them downstream.
//
// Gauge: for N = 2 the ground state is phase-rotated so its first component
// is real and <= 0 (falling back to second component real >= 0 when the
// first is negligible), and the excited state so its first component is real
// and >= 0 (same fallback). For N > 2 each eigenvector's largest-magnitude
// component (lowest index on ties) is made real and positive.
EigenSystem eigensystem(const Matrix& H);

}  // namespace aqopt
