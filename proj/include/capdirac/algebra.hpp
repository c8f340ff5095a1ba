#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace capdirac {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXcd;
using VecX = Eigen::VectorXcd;
using VecXr = Eigen::VectorXd;

// Pauli matrices, i in {1,2,3}.
Mat2 pauli(int i);

// Dirac matrices in the standard representation.
//   dim == 1: two-component model, alpha = sigma_1, beta = sigma_3
//             (only i == 1 is valid).
//   dim == 3: four-component, alpha_i = offdiag(sigma_i), beta = diag(I,-I).
MatX dirac_alpha(int i, int dim);
MatX dirac_beta(int dim);

// Largest max-norm deviation from the Clifford relations
//   {alpha_i, alpha_j} = 2 delta_ij I, {alpha_i, beta} = 0, beta^2 = I
// over all index pairs for the given dimension.
double clifford_defect(int dim);

// Max-norm of (c alpha.xi + beta m c^2)^2 - (c^2|xi|^2 + m^2 c^4) I.
double dispersion_defect(const std::vector<double>& xi, double m, double c,
                         int dim);

}  // namespace capdirac
