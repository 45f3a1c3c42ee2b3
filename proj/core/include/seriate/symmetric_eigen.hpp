#pragma once

#include <vector>

#include "seriate/matrix.hpp"

namespace seriate {

/// Eigenpairs of a dense symmetric matrix, eigenvalues ascending.
/// `vectors` holds one unit eigenvector per row, aligned with `values`.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

/// Cyclic Jacobi rotations. The input is assumed symmetric; only the upper
/// triangle is read. Converges quadratically; orthogonality of the
/// eigenvectors is at machine precision.
SymmetricEigen jacobi_eigen(const Matrix& a, int max_sweeps = 100);

}  // namespace seriate
