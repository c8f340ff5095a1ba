#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "capdirac/algebra.hpp"
#include "capdirac/exec.hpp"
#include "capdirac/model.hpp"

namespace capdirac {

// Periodic grid on [-L, L): x_j = -L + j h, h = 2L/N, j = 0..N-1.
// Momenta follow FFT ordering with the Nyquist mode mapped to -N/2, so
// k_m = (pi/L) sig(m) with sig(m) = m for m < N/2 and m - N otherwise.
struct Grid1D {
  double L = 0.0;
  int N = 0;
  Grid1D() = default;
  Grid1D(const Geometry& geo) : L(geo.L), N(geo.N) {}
  double h() const { return 2.0 * L / N; }
  double x(int j) const { return -L + j * h(); }
  double k(int m) const {
    const int sig = (m < N / 2) ? m : m - N;
    return (M_PI / L) * sig;
  }
  std::vector<double> nodes() const;
  std::vector<double> momenta() const;
  // Largest grid momentum magnitude, pi N / (2 L).
  double k_max() const { return M_PI * (N / 2) / L; }
};

// Spectral (Fourier) derivative matrix: D = F^* diag(i k) F, exact for every
// grid plane wave including the Nyquist mode; skew-Hermitian.
MatX fourier_derivative(const Grid1D& g);

// Free operator H0 = -i c hbar sigma_1 (x) D + m c^2 sigma_3 (x) I,
// 2N x 2N with spinor-major block layout (index = s*N + j).
MatX assemble_free(const Grid1D& g, const PhysParams& p);

// H0 + V(x) as node-diagonal 2x2 blocks.
MatX assemble_perturbed(const Grid1D& g, const PhysParams& p,
                        const Potential1D& V);

// Damped operator J = H - i W(x); W acts as a scalar on the spinor components.
MatX assemble_cap(const Grid1D& g, const PhysParams& p, const Potential1D& V,
                  const Cap& cap);

// Complex-scaled operator
//   H_theta = -i c hbar sigma_1 (x) [ (1+theta g')^{-1} D
//                                     - theta g'' / (2 (1+theta g')^2) ]
//             + m c^2 sigma_3 + V(x)  [ - i W(x) if with_cap ],
// valid because V (and the non-constant part of W) live where g == 0 and W is
// constant where g != 0, so composition with x + theta g(x) changes nothing.
MatX assemble_distorted(const Grid1D& g, const PhysParams& p,
                        const Potential1D& V, const ScalingFn& scal,
                        const DistortionParam& th, bool with_cap = false,
                        const Cap& cap = {}, Exec ex = Exec::serial);

// Restriction to nodes strictly inside |x| < R (both spinor components):
// Dirichlet problem on the ball.  `nodes` lists the kept grid indices.
struct RestrictedOperator {
  MatX mat;
  std::vector<int> nodes;
};
RestrictedOperator dirichlet_restrict(const MatX& A, const Grid1D& g, double R);

// Weyl quantization of a 2x2 matrix symbol a(x, xi):
//   A_{(s j),(s' l)} = (1/N) sum_m a_{s s'}(mid(j,l), hbar k_m)
//                                e^{2 pi i m (j-l)/N},
// where mid(j,l) is the midpoint of the SHORT arc between x_j and x_l on the
// periodic box: the arithmetic midpoint (x_j+x_l)/2 for |j-l| <= N/2 and its
// antipode (shifted by L) for wrapped pairs.  The frequency factor only sees
// j-l modulo N, so pairing it with the arithmetic midpoint of the long arc
// would plant O(1) spurious entries in the far corners for symbols varying in
// both x and xi.  Multiplication operators, the momentum multiplier and
// symmetrized products of them are reproduced exactly; Hermitian symbols give
// Hermitian matrices by construction.
using MatrixSymbol = std::function<Mat2(double x, double xi)>;
MatX weyl_quantize(const Grid1D& g, const PhysParams& p, const MatrixSymbol& a,
                   Exec ex = Exec::serial);

// Same quadrature, but with the symbol pretabulated on the evaluation lattice:
// vals[s*N + m] = a(mu_s, hbar k_m) for s = 0..2N-1 (mu_s = -L + s h/2, the
// full midpoint half-lattice including the boundary row) and m = 0..N-1.
// Used when symbol evaluation is expensive (evolved symbols).
MatX weyl_quantize_lattice(const Grid1D& g, const std::vector<Mat2>& vals,
                           Exec ex = Exec::serial);

// Spherically reduced operator for total-angular-momentum channel kappa on a
// uniform radial grid over (0, R) with Dirichlet ends:
//   [ m c^2 + phi(r) ,  c hbar (-d/dr + kappa/r) ]
//   [ c hbar ( d/dr + kappa/r) , -m c^2 + phi(r) ]
// with the central-difference d/dr (exactly antisymmetric on the interior).
MatX radial_reduce(const PhysParams& p, const std::function<double(double)>& phi,
                   int kappa, double R, int Mnodes);

// Raw dump: row-major complex<double>, little-endian, plus "<path>.meta" text
// sidecar with the dimensions and layout.
void dump_operator(const MatX& A, const std::string& path);

}  // namespace capdirac
