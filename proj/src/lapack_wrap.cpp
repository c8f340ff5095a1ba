#include "capdirac/lapack_wrap.hpp"

#include <lapacke.h>

#include <string>

#include "capdirac/errors.hpp"

namespace capdirac {

namespace {
lapack_complex_double* lp(MatX& m) {
  return reinterpret_cast<lapack_complex_double*>(m.data());
}

[[noreturn]] void fail(const char* routine, lapack_int info) {
  throw solver_error(std::string(routine) + " failed with info=" +
                     std::to_string(info));
}
}  // namespace

std::pair<VecXr, MatX> eig_hermitian(MatX a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  VecXr w(n);
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, lp(a), n, w.data());
  if (info != 0) fail("zheevd", info);
  return {std::move(w), std::move(a)};
}

VecXr eigvals_hermitian(MatX a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  VecXr w(n);
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, lp(a), n, w.data());
  if (info != 0) fail("zheevd", info);
  return w;
}

std::pair<VecX, MatX> eig_general(MatX a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  VecX w(n);
  MatX vr(n, n);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, lp(a), n,
                    reinterpret_cast<lapack_complex_double*>(w.data()), nullptr,
                    1, lp(vr), n);
  if (info != 0) fail("zgeev", info);
  return {std::move(w), std::move(vr)};
}

VecX eigvals_general(MatX a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  VecX w(n);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, lp(a), n,
                    reinterpret_cast<lapack_complex_double*>(w.data()), nullptr,
                    1, nullptr, 1);
  if (info != 0) fail("zgeev", info);
  return w;
}

VecXr singular_values(MatX a) {
  const lapack_int mrows = static_cast<lapack_int>(a.rows());
  const lapack_int ncols = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(mrows, ncols);
  VecXr s(k);
  std::vector<double> superb(std::max<lapack_int>(1, k - 1));
  const lapack_int info =
      LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', mrows, ncols, lp(a), mrows,
                     s.data(), nullptr, 1, nullptr, 1, superb.data());
  if (info != 0) fail("zgesvd", info);
  return s;
}

MatX solve_lu(MatX a, MatX b) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  const lapack_int nrhs = static_cast<lapack_int>(b.cols());
  std::vector<lapack_int> ipiv(n);
  const lapack_int info = LAPACKE_zgesv(LAPACK_COL_MAJOR, n, nrhs, lp(a), n,
                                        ipiv.data(), lp(b), n);
  if (info != 0) fail("zgesv", info);
  return b;
}

}  // namespace capdirac
