#pragma once

#include <vector>

namespace wallperc {

struct SymmetricEigen {
  int n = 0;
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // row-major; column k is the eigenvector of values[k]

  double vec(int i, int k) const { return vectors[static_cast<std::size_t>(i) * n + k]; }
};

// Cyclic Jacobi rotations on a dense symmetric matrix (row-major n*n).
// Robust at the sizes this library works with; returns an orthonormal basis.
SymmetricEigen symmetric_eigen(const std::vector<double>& a, int n);

}  // namespace wallperc
