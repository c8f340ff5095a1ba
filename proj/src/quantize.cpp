#include "capdirac/quantize.hpp"

#include <fftw3.h>
#include <omp.h>

#include <atomic>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>

#include "capdirac/errors.hpp"

namespace capdirac {

int exec_threads(Exec ex) {
  return (ex == Exec::parallel) ? default_threads() : 1;
}

namespace {
int g_default_threads = 0;
}

void set_default_threads(int n) {
  g_default_threads = std::max(1, std::min(n, omp_get_max_threads()));
}

int default_threads() {
  if (g_default_threads == 0) g_default_threads = omp_get_max_threads();
  return g_default_threads;
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(N);
  for (int j = 0; j < N; ++j) xs[j] = x(j);
  return xs;
}

std::vector<double> Grid1D::momenta() const {
  std::vector<double> ks(N);
  for (int m = 0; m < N; ++m) ks[m] = k(m);
  return ks;
}

MatX fourier_derivative(const Grid1D& g) {
  const int N = g.N;
  // First column of the circulant: col[d] = (1/N) sum_m (i k_m) e^{2pi i m d/N}.
  std::vector<cplx> in(N), out(N);
  for (int m = 0; m < N; ++m) in[m] = cplx(0.0, g.k(m));
  fftw_plan plan = fftw_plan_dft_1d(
      N, reinterpret_cast<fftw_complex*>(in.data()),
      reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  MatX D(N, N);
  for (int j = 0; j < N; ++j)
    for (int l = 0; l < N; ++l) D(j, l) = out[(j - l + N) % N] / double(N);
  return D;
}

MatX assemble_free(const Grid1D& g, const PhysParams& p) {
  const int N = g.N;
  const MatX D = fourier_derivative(g);
  const cplx factor(0.0, -p.c * p.hbar);  // -i c hbar
  MatX H = MatX::Zero(2 * N, 2 * N);
  // sigma_1 (x) D couples the spinor components; sigma_3 m c^2 on the diagonal.
  H.block(0, N, N, N) = factor * D;
  H.block(N, 0, N, N) = factor * D;
  const double mc2 = p.mc2();
  for (int j = 0; j < N; ++j) {
    H(j, j) += mc2;
    H(N + j, N + j) -= mc2;
  }
  return H;
}

namespace {
void add_potential(MatX& H, const Grid1D& g, const PhysParams& p,
                   const Potential1D& V) {
  const int N = g.N;
  for (int j = 0; j < N; ++j) {
    const Mat2 v = V.V(g.x(j), p);
    H(j, j) += v(0, 0);
    H(j, N + j) += v(0, 1);
    H(N + j, j) += v(1, 0);
    H(N + j, N + j) += v(1, 1);
  }
}

void add_cap(MatX& H, const Grid1D& g, const Cap& cap) {
  const int N = g.N;
  const cplx mi(0.0, -1.0);
  for (int j = 0; j < N; ++j) {
    const cplx w = mi * cap.W(g.x(j));
    H(j, j) += w;
    H(N + j, N + j) += w;
  }
}
}  // namespace

MatX assemble_perturbed(const Grid1D& g, const PhysParams& p,
                        const Potential1D& V) {
  MatX H = assemble_free(g, p);
  add_potential(H, g, p, V);
  return H;
}

MatX assemble_cap(const Grid1D& g, const PhysParams& p, const Potential1D& V,
                  const Cap& cap) {
  MatX H = assemble_perturbed(g, p, V);
  add_cap(H, g, cap);
  return H;
}

MatX assemble_distorted(const Grid1D& g, const PhysParams& p,
                        const Potential1D& V, const ScalingFn& scal,
                        const DistortionParam& th, bool with_cap,
                        const Cap& cap, Exec ex) {
  th.validate();
  const int N = g.N;
  const cplx theta = th.theta;
  const MatX D = fourier_derivative(g);

  // Conjugated derivative block: rows scaled by 1/(1+theta g'), then the
  // half-commutator correction -theta g'' / (2 (1+theta g')^2) on the diagonal.
  // Where g == 0 both coefficients reduce to (1, 0), so freeze-region rows of
  // the result equal the undistorted rows bitwise.
  MatX Dth(N, N);
  const int nthreads = exec_threads(ex);
  // Exceptions may not unwind out of an OpenMP region; marshal the first one.
  std::exception_ptr eptr = nullptr;
  std::atomic<bool> failed{false};
#pragma omp parallel for num_threads(nthreads) schedule(static)
  for (int j = 0; j < N; ++j) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      const double xj = g.x(j);
      const double gp = scal.gp(xj);
      const double gpp = scal.gpp(xj);
      if (gp == 0.0 && gpp == 0.0) {
        Dth.row(j) = D.row(j);
        continue;
      }
      const cplx jac = 1.0 + theta * gp;
      const cplx coeff = 1.0 / jac;
      const cplx corr = theta * gpp / (2.0 * jac * jac);
      Dth.row(j) = coeff * D.row(j);
      Dth(j, j) -= corr;
    } catch (...) {
#pragma omp critical(capdirac_distort_exc)
      if (!eptr) {
        eptr = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  }
  if (eptr) std::rethrow_exception(eptr);

  const cplx factor(0.0, -p.c * p.hbar);
  MatX H = MatX::Zero(2 * N, 2 * N);
  H.block(0, N, N, N) = factor * Dth;
  H.block(N, 0, N, N) = factor * Dth;
  const double mc2 = p.mc2();
  for (int j = 0; j < N; ++j) {
    H(j, j) += mc2;
    H(N + j, N + j) -= mc2;
  }
  add_potential(H, g, p, V);
  if (with_cap) add_cap(H, g, cap);
  return H;
}

RestrictedOperator dirichlet_restrict(const MatX& A, const Grid1D& g, double R) {
  const int N = g.N;
  if (2 * N != A.rows())
    throw config_error("dirichlet_restrict: matrix does not match grid");
  std::vector<int> keep;
  for (int j = 0; j < N; ++j)
    if (std::abs(g.x(j)) < R) keep.push_back(j);
  if (keep.empty()) throw config_error("dirichlet_restrict: empty interior");
  const int M = static_cast<int>(keep.size());
  MatX B(2 * M, 2 * M);
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b)
      for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t)
          B(s * M + a, t * M + b) = A(s * N + keep[a], t * N + keep[b]);
  return {std::move(B), std::move(keep)};
}

namespace {
// Shared core: one inverse DFT per anti-diagonal (fixed j+l) and spinor
// component; each matrix entry belongs to exactly one anti-diagonal, so
// parallel fills are disjoint and schedule-independent.
//
// Midpoints live on the periodic half-lattice mu_s = -L + s*h/2, s = 0..2N-1.
// The frequency factor exp(2*pi*i*m*(j-l)/N) resolves j-l only modulo N, i.e.
// it always measures the short arc between the two nodes on the circle. When
// |j-l| > N/2 that arc runs through the boundary and its midpoint is the
// antipode mu_{(s+N) mod 2N} of the arithmetic midpoint, not mu_s itself.
// Sampling the symbol on the wrong arc plants O(1) spurious entries in the
// far corners for any symbol varying in both x and xi; using the antipodal
// row keeps the quantization consistent on the torus, so entries decay with
// the short-arc separation whenever the symbol decays in x. Antipodal ties
// |j-l| = N/2 keep the arithmetic midpoint (symmetric in j <-> l).
MatX weyl_core(const Grid1D& g,
               const std::function<Mat2(int s, int m)>& lattice, Exec ex) {
  const int N = g.N;
  MatX A = MatX::Zero(2 * N, 2 * N);
  fftw_plan plan = nullptr;
  {
    std::vector<cplx> tmp_in(N), tmp_out(N);
    plan = fftw_plan_dft_1d(N, reinterpret_cast<fftw_complex*>(tmp_in.data()),
                            reinterpret_cast<fftw_complex*>(tmp_out.data()),
                            FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  const int nthreads = exec_threads(ex);
  // Exceptions may not unwind out of an OpenMP region; marshal the first one.
  std::exception_ptr eptr = nullptr;
  std::atomic<bool> failed{false};
#pragma omp parallel num_threads(nthreads)
  {
    std::vector<Mat2> sym(N), symw(N);
    std::vector<cplx> in(N), out(N), outw(N);
#pragma omp for schedule(static)
    for (int s = 0; s <= 2 * N - 2; ++s) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        const int jlo = std::max(0, s - N + 1);
        const int jhi = std::min(N - 1, s);
        // largest |j-l| on this anti-diagonal decides if wrapped pairs occur
        const bool wraps =
            std::max(2 * jhi - s, s - 2 * jlo) > N / 2;
        for (int m = 0; m < N; ++m) sym[m] = lattice(s, m);
        if (wraps) {
          const int sw = (s + N) % (2 * N);
          for (int m = 0; m < N; ++m) symw[m] = lattice(sw, m);
        }
        for (int s1 = 0; s1 < 2; ++s1)
          for (int s2 = 0; s2 < 2; ++s2) {
            for (int m = 0; m < N; ++m) in[m] = sym[m](s1, s2);
            fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                             reinterpret_cast<fftw_complex*>(out.data()));
            if (wraps) {
              for (int m = 0; m < N; ++m) in[m] = symw[m](s1, s2);
              fftw_execute_dft(plan,
                               reinterpret_cast<fftw_complex*>(in.data()),
                               reinterpret_cast<fftw_complex*>(outw.data()));
            }
            for (int j = jlo; j <= jhi; ++j) {
              const int l = s - j;
              const int d = ((j - l) % N + N) % N;
              const bool wrapped = std::abs(j - l) > N / 2;
              A(s1 * N + j, s2 * N + l) =
                  (wrapped ? outw[d] : out[d]) / double(N);
            }
          }
      } catch (...) {
#pragma omp critical(capdirac_weyl_exc)
        if (!eptr) {
          eptr = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
        }
      }
    }
  }
  fftw_destroy_plan(plan);
  if (eptr) std::rethrow_exception(eptr);
  return A;
}
}  // namespace

MatX weyl_quantize(const Grid1D& g, const PhysParams& p, const MatrixSymbol& a,
                   Exec ex) {
  const std::vector<double> ks = g.momenta();
  return weyl_core(
      g,
      [&](int s, int m) {
        const double mu = -g.L + 0.5 * s * g.h();
        return a(mu, p.hbar * ks[m]);
      },
      ex);
}

MatX weyl_quantize_lattice(const Grid1D& g, const std::vector<Mat2>& vals,
                           Exec ex) {
  const int N = g.N;
  if (vals.size() != static_cast<size_t>(2 * N) * N)
    throw config_error("weyl_quantize_lattice: table size mismatch");
  return weyl_core(
      g, [&](int s, int m) { return vals[static_cast<size_t>(s) * N + m]; },
      ex);
}

MatX radial_reduce(const PhysParams& p, const std::function<double(double)>& phi,
                   int kappa, double R, int Mnodes) {
  if (kappa == 0) throw config_error("radial_reduce: kappa must be nonzero");
  if (Mnodes < 3) throw config_error("radial_reduce: need at least 3 nodes");
  if (!(R > 0.0)) throw config_error("radial_reduce: R must be positive");
  const int M = Mnodes;
  const double hr = R / (M + 1);
  const double mc2 = p.mc2();
  const double chb = p.c * p.hbar;
  MatX H = MatX::Zero(2 * M, 2 * M);
  for (int i = 0; i < M; ++i) {
    const double r = (i + 1) * hr;
    H(i, i) = mc2 + phi(r);
    H(M + i, M + i) = -mc2 + phi(r);
    H(i, M + i) += chb * kappa / r;
    H(M + i, i) += chb * kappa / r;
    // central difference, Dirichlet beyond the ends
    if (i + 1 < M) {
      H(i, M + i + 1) += -chb / (2.0 * hr);   // -d/dr acting on lower component
      H(M + i, i + 1) += chb / (2.0 * hr);    // +d/dr acting on upper component
    }
    if (i - 1 >= 0) {
      H(i, M + i - 1) += chb / (2.0 * hr);
      H(M + i, i - 1) += -chb / (2.0 * hr);
    }
  }
  return H;
}

void dump_operator(const MatX& A, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw config_error("dump_operator: cannot open " + path);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      const cplx v = A(i, j);
      const double re = v.real(), im = v.imag();
      f.write(reinterpret_cast<const char*>(&re), sizeof(double));
      f.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
  f.close();
  std::ofstream meta(path + ".meta");
  meta << "rows=" << A.rows() << "\n"
       << "cols=" << A.cols() << "\n"
       << "dtype=complex128\n"
       << "layout=row-major\n"
       << "endian=little\n";
}

}  // namespace capdirac
