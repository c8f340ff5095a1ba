#pragma once

#include <utility>
#include <vector>

#include "capdirac/algebra.hpp"

namespace capdirac {

// Thin checked wrappers around LAPACKE; every nonzero info becomes a
// solver_error.  Matrices are Eigen (column-major) and passed by value where
// LAPACK destroys its input.

// Hermitian eigendecomposition (zheevd).  Returns {eigenvalues, vectors}.
std::pair<VecXr, MatX> eig_hermitian(MatX a);

// Hermitian eigenvalues only.
VecXr eigvals_hermitian(MatX a);

// General (non-Hermitian) eigendecomposition (zgeev).
// Returns {eigenvalues, right eigenvectors}.
std::pair<VecX, MatX> eig_general(MatX a);

// General eigenvalues only.
VecX eigvals_general(MatX a);

// All singular values, descending (zgesvd, vectors not formed).
VecXr singular_values(MatX a);

// Solve A X = B by LU (zgesv).
MatX solve_lu(MatX a, MatX b);

}  // namespace capdirac
