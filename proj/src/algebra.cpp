#include "capdirac/algebra.hpp"

#include "capdirac/errors.hpp"

namespace capdirac {

Mat2 pauli(int i) {
  const cplx I(0.0, 1.0);
  Mat2 s = Mat2::Zero();
  switch (i) {
    case 1:
      s << 0, 1, 1, 0;
      break;
    case 2:
      s << 0, -I, I, 0;
      break;
    case 3:
      s << 1, 0, 0, -1;
      break;
    default:
      throw config_error("pauli: index must be 1, 2 or 3");
  }
  return s;
}

MatX dirac_alpha(int i, int dim) {
  if (dim == 1) {
    if (i != 1) throw config_error("dirac_alpha: 1d model has a single alpha");
    return pauli(1);
  }
  if (dim != 3) throw config_error("dirac_alpha: dim must be 1 or 3");
  if (i < 1 || i > 3) throw config_error("dirac_alpha: index must be 1..3");
  Mat4 a = Mat4::Zero();
  a.block<2, 2>(0, 2) = pauli(i);
  a.block<2, 2>(2, 0) = pauli(i);
  return a;
}

MatX dirac_beta(int dim) {
  if (dim == 1) return pauli(3);
  if (dim != 3) throw config_error("dirac_beta: dim must be 1 or 3");
  Mat4 b = Mat4::Zero();
  b.block<2, 2>(0, 0) = Mat2::Identity();
  b.block<2, 2>(2, 2) = -Mat2::Identity();
  return b;
}

namespace {
double max_norm(const MatX& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

double clifford_defect(int dim) {
  const int nalpha = (dim == 1) ? 1 : 3;
  const int n = (dim == 1) ? 2 : 4;
  const MatX id = MatX::Identity(n, n);
  std::vector<MatX> gamma;
  for (int i = 1; i <= nalpha; ++i) gamma.push_back(dirac_alpha(i, dim));
  gamma.push_back(dirac_beta(dim));
  double worst = 0.0;
  for (size_t i = 0; i < gamma.size(); ++i)
    for (size_t j = 0; j < gamma.size(); ++j) {
      const MatX anti = gamma[i] * gamma[j] + gamma[j] * gamma[i];
      const MatX expect = (i == j) ? MatX(2.0 * id) : MatX(MatX::Zero(n, n));
      worst = std::max(worst, max_norm(anti - expect));
    }
  return worst;
}

double dispersion_defect(const std::vector<double>& xi, double m, double c,
                         int dim) {
  const int nalpha = (dim == 1) ? 1 : 3;
  if (static_cast<int>(xi.size()) != nalpha)
    throw config_error("dispersion_defect: xi size does not match dimension");
  const int n = (dim == 1) ? 2 : 4;
  MatX d = m * c * c * dirac_beta(dim);
  double xi2 = 0.0;
  for (int i = 1; i <= nalpha; ++i) {
    d += c * xi[i - 1] * dirac_alpha(i, dim);
    xi2 += xi[i - 1] * xi[i - 1];
  }
  const MatX sq = d * d;
  const MatX expect = (c * c * xi2 + m * m * c * c * c * c) * MatX::Identity(n, n);
  return max_norm(sq - expect);
}

}  // namespace capdirac
