#pragma once

#include <vector>

namespace bvquad {

/// Eigenvalues (ascending) of a symmetric tridiagonal matrix together with
/// the first component of each normalized eigenvector, which is all the
/// Golub-Welsch weight formula needs.
struct TridiagonalEigen {
  std::vector<double> values;
  std::vector<double> first_components;
};

/// Implicit QL with Wilkinson-type shifts. `offdiag` has size diag.size() - 1.
/// Throws ErrorKind::eigen_failure if an eigenvalue does not converge.
TridiagonalEigen tridiagonal_eigen(std::vector<double> diag, std::vector<double> offdiag);

}  // namespace bvquad
