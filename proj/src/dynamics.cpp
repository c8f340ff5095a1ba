#include "capdirac/dynamics.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <random>

#include "capdirac/errors.hpp"
#include "capdirac/lapack_wrap.hpp"
#include "capdirac/spectra.hpp"

namespace capdirac {

// ---- symbol model -----------------------------------------------------------

Mat2 SymbolModel::d(double x, double xi) const {
  Mat2 out = phys.c * (xi - pot.A(x)) * pauli(1) + phys.mc2() * pauli(3);
  out += pot.phi(x) * Mat2::Identity();
  return out;
}

Mat2 SymbolModel::d_dx(double x, double xi) const {
  (void)xi;
  Mat2 out = -phys.c * pot.A_deriv(x) * pauli(1);
  out += pot.phi_deriv(x) * Mat2::Identity();
  return out;
}

Mat2 SymbolModel::d_dxi(double x, double xi) const {
  (void)x;
  (void)xi;
  return phys.c * pauli(1);
}

double SymbolModel::rho(double x, double xi) const {
  const double q = phys.c * (xi - pot.A(x));
  const double mc2 = phys.mc2();
  return std::sqrt(q * q + mc2 * mc2);
}

double SymbolModel::lambda(int band, double x, double xi) const {
  return pot.phi(x) + band * rho(x, xi);
}

Mat2 SymbolModel::projector(int band, double x, double xi) const {
  const Mat2 n = phys.c * (xi - pot.A(x)) * pauli(1) + phys.mc2() * pauli(3);
  return 0.5 * (Mat2::Identity() + double(band) / rho(x, xi) * n);
}

double SymbolModel::dlam_dxi(int band, double x, double xi) const {
  const double q = xi - pot.A(x);
  return band * phys.c * phys.c * q / rho(x, xi);
}

double SymbolModel::dlam_dx(int band, double x, double xi) const {
  const double q = xi - pot.A(x);
  return pot.phi_deriv(x) -
         band * phys.c * phys.c * q * pot.A_deriv(x) / rho(x, xi);
}

double hyperbolicity_margin(const SymbolModel& mdl, double x_lo, double x_hi,
                            double xi_lo, double xi_hi, int nx, int nxi) {
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= nx; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / nx;
    for (int j = 0; j <= nxi; ++j) {
      const double xi = xi_lo + (xi_hi - xi_lo) * j / nxi;
      const double gap = 2.0 * mdl.rho(x, xi);  // lambda_+ - lambda_-
      worst = std::min(worst, gap / std::sqrt(1.0 + xi * xi));
    }
  }
  return worst;
}

// ---- flow --------------------------------------------------------------------

namespace {
OdeRhs flow_rhs(const SymbolModel& mdl, int band) {
  return [&mdl, band](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy[0] = mdl.dlam_dxi(band, y[0], y[1]);
    dy[1] = -mdl.dlam_dx(band, y[0], y[1]);
  };
}
}  // namespace

FlowPoint integrate_flow(const SymbolModel& mdl, int band, double x0,
                         double xi0, double T, const OdeOptions& opt) {
  Eigen::VectorXd y0(2);
  y0 << x0, xi0;
  const double e0 = mdl.lambda(band, x0, xi0);
  const OdeResult r = integrate_ode(flow_rhs(mdl, band), y0, 0.0, T, opt);
  FlowPoint fp;
  fp.x = r.y[0];
  fp.xi = r.y[1];
  fp.energy_drift = std::abs(mdl.lambda(band, fp.x, fp.xi) - e0);
  return fp;
}

namespace {
// Deterministic uniform in [0,1): top 53 bits of the generator word.
double uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1p-53;
}
}  // namespace

NontrappingReport nontrapping_verdict(const SymbolModel& mdl, int band,
                                      double r_lo, double r_hi, double e_lo,
                                      double e_hi, double escape_R, double T,
                                      int n_seeds, std::uint64_t seed,
                                      Exec ex) {
  if (!(r_hi > r_lo) || !(e_hi >= e_lo) || n_seeds < 1)
    throw config_error("nontrapping_verdict: bad sampling window");
  // Seeds drawn serially from one stream; a seed needs lambda_band(x,.) = e
  // solvable, i.e. band*(e - phi(x)) >= m c^2.
  std::mt19937_64 rng(seed);
  std::vector<std::array<double, 2>> seeds;
  seeds.reserve(n_seeds);
  const double mc2 = mdl.phys.mc2();
  long tries = 0;
  const long max_tries = 200L * n_seeds;
  while (static_cast<int>(seeds.size()) < n_seeds && tries < max_tries) {
    ++tries;
    const double sx = (uniform01(rng) < 0.5) ? -1.0 : 1.0;
    const double x = sx * (r_lo + uniform01(rng) * (r_hi - r_lo));
    const double e = e_lo + uniform01(rng) * (e_hi - e_lo);
    const double w = band * (e - mdl.pot.phi(x));
    if (w < mc2) continue;  // classically forbidden at this energy
    const double q = std::sqrt(w * w - mc2 * mc2) / mdl.phys.c;
    const double sxi = (uniform01(rng) < 0.5) ? -1.0 : 1.0;
    seeds.push_back({x, mdl.pot.A(x) + sxi * q});
  }

  NontrappingReport rep;
  rep.n_seeds = static_cast<int>(seeds.size());
  std::vector<char> trapped(seeds.size(), 0);
  const int nthreads = exec_threads(ex);
  // Exceptions may not unwind out of an OpenMP region; marshal the first one.
  std::exception_ptr eptr = nullptr;
  std::atomic<bool> failed{false};
#pragma omp parallel for num_threads(nthreads) schedule(static)
  for (size_t i = 0; i < seeds.size(); ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      bool esc_fwd = false, esc_bwd = false;
      for (const double dir : {+1.0, -1.0}) {
        bool& esc = (dir > 0) ? esc_fwd : esc_bwd;
        Eigen::VectorXd y(2);
        y << seeds[i][0], seeds[i][1];
        const int chunks = 40;
        OdeOptions opt;
        opt.rel_tol = 1e-9;
        opt.abs_tol = 1e-11;
        for (int ch = 0; ch < chunks && !esc; ++ch) {
          const OdeResult r = integrate_ode(flow_rhs(mdl, band), y,
                                            dir * T * ch / chunks,
                                            dir * T * (ch + 1) / chunks, opt);
          y = r.y;
          if (std::abs(y[0]) > escape_R) esc = true;
        }
      }
      trapped[i] = (!esc_fwd && !esc_bwd) ? 1 : 0;
    } catch (...) {
#pragma omp critical(capdirac_nontrap_exc)
      if (!eptr) {
        eptr = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  }
  if (eptr) std::rethrow_exception(eptr);
  for (size_t i = 0; i < seeds.size(); ++i)
    if (trapped[i]) rep.trapped.push_back(seeds[i]);
  rep.nontrapping = rep.trapped.empty() && rep.n_seeds > 0;
  return rep;
}

// ---- Moyal -------------------------------------------------------------------

MoyalPair moyal_first_order(const MatrixSymbol& a, const MatrixSymbol& b,
                            double x, double xi) {
  const double h = 1e-4 * (1.0 + std::abs(x) + std::abs(xi));
  const auto dx = [&](const MatrixSymbol& f) {
    return Mat2(((f(x + h, xi) - f(x - h, xi)) / (2.0 * h)));
  };
  const auto dxi = [&](const MatrixSymbol& f) {
    return Mat2(((f(x, xi + h) - f(x, xi - h)) / (2.0 * h)));
  };
  MoyalPair out;
  out.c0 = a(x, xi) * b(x, xi);
  out.c1 = cplx(0.0, 0.5) * (dx(a) * dxi(b) - dxi(a) * dx(b));
  return out;
}

// ---- transport generator -------------------------------------------------------

namespace {
struct SymbolPieces {
  Mat2 P, Px, Pxi;      // projector and its derivatives
  Mat2 d, dx, dxi;      // dispersion matrix and derivatives
  double lam, lamx, lamxi;
};

SymbolPieces pieces_at(const SymbolModel& mdl, int band, double x, double xi) {
  SymbolPieces s;
  const double c = mdl.phys.c;
  const double mc2 = mdl.phys.mc2();
  const double A = mdl.pot.A(x);
  const double Ap = mdl.pot.A_deriv(x);
  const double q = c * (xi - A);
  const double rho = std::sqrt(q * q + mc2 * mc2);
  const Mat2 n = q * pauli(1) + mc2 * pauli(3);
  // d(n/rho) = dn/rho - n * drho/rho^2
  const Mat2 nx = -c * Ap * pauli(1);
  const Mat2 nxi = c * pauli(1);
  const double rhox = -q * c * Ap / rho;
  const double rhoxi = q * c / rho;
  s.P = 0.5 * (Mat2::Identity() + double(band) / rho * n);
  s.Px = 0.5 * double(band) * (nx / rho - n * (rhox / (rho * rho)));
  s.Pxi = 0.5 * double(band) * (nxi / rho - n * (rhoxi / (rho * rho)));
  s.d = mdl.d(x, xi);
  s.dx = mdl.d_dx(x, xi);
  s.dxi = mdl.d_dxi(x, xi);
  s.lam = mdl.lambda(band, x, xi);
  s.lamx = mdl.dlam_dx(band, x, xi);
  s.lamxi = mdl.dlam_dxi(band, x, xi);
  return s;
}

GeneratorTerms generator_terms(const SymbolPieces& s) {
  // Bracket convention {A,B} = d_xi A d_x B - d_x A d_xi B, order preserved.
  const Mat2 brPP = s.Pxi * s.Px - s.Px * s.Pxi;
  const Mat2 brLP = s.lamxi * s.Px - s.lamx * s.Pxi;
  const cplx mi(0.0, -1.0);
  GeneratorTerms t;
  t.self_bracket = mi * 0.5 * s.lam * (s.P * brPP * s.P);
  t.commutator = mi * (s.P * brLP - brLP * s.P);
  // Subprincipal of P # d # P from two first-order products:
  //   u = P # d:      u0 = P d,  u1 = (i/2)(Px dxi - Pxi dx)
  //   (u0+h u1) # P:  T1 = u1 P + (i/2)(d_x u0 Pxi - d_xi u0 Px)
  const cplx hi(0.0, 0.5);
  const Mat2 u0x = s.Px * s.d + s.P * s.dx;
  const Mat2 u0xi = s.Pxi * s.d + s.P * s.dxi;
  const Mat2 u1 = hi * (s.Px * s.dxi - s.Pxi * s.dx);
  const Mat2 T1 = u1 * s.P + hi * (u0x * s.Pxi - u0xi * s.Px);
  t.subprincipal = s.P * T1 * s.P;
  return t;
}
}  // namespace

GeneratorTerms transport_generator_terms(const SymbolModel& mdl, int band,
                                         double x, double xi) {
  return generator_terms(pieces_at(mdl, band, x, xi));
}

Mat2 transport_generator(const SymbolModel& mdl, int band, double x, double xi) {
  const GeneratorTerms t = transport_generator_terms(mdl, band, x, xi);
  return t.self_bracket + t.commutator + t.subprincipal;
}

// ---- transport along the flow ---------------------------------------------------

namespace {
inline Mat2 unpack_t(const Eigen::VectorXd& y) {
  Mat2 t;
  t(0, 0) = cplx(y[2], y[3]);
  t(1, 0) = cplx(y[4], y[5]);
  t(0, 1) = cplx(y[6], y[7]);
  t(1, 1) = cplx(y[8], y[9]);
  return t;
}

inline void pack_t(const Mat2& t, Eigen::VectorXd& y) {
  y[2] = t(0, 0).real();
  y[3] = t(0, 0).imag();
  y[4] = t(1, 0).real();
  y[5] = t(1, 0).imag();
  y[6] = t(0, 1).real();
  y[7] = t(0, 1).imag();
  y[8] = t(1, 1).real();
  y[9] = t(1, 1).imag();
}

OdeRhs transport_rhs(const SymbolModel& mdl, int band) {
  return [&mdl, band](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    const double x = y[0], xi = y[1];
    dy[0] = mdl.dlam_dxi(band, x, xi);
    dy[1] = -mdl.dlam_dx(band, x, xi);
    const Mat2 t = unpack_t(y);
    const Mat2 dt = cplx(0.0, -1.0) * (transport_generator(mdl, band, x, xi) * t);
    Eigen::VectorXd tmp(10);
    pack_t(dt, tmp);
    for (int i = 2; i < 10; ++i) dy[i] = tmp[i];
  };
}
}  // namespace

TransportResult transport_matrix(const SymbolModel& mdl, int band, double x0,
                                 double xi0, double T, const OdeOptions& opt) {
  Eigen::VectorXd y(10);
  y[0] = x0;
  y[1] = xi0;
  pack_t(Mat2::Identity(), y);
  const OdeResult r = integrate_ode(transport_rhs(mdl, band), y, 0.0, T, opt);
  TransportResult out;
  out.x = r.y[0];
  out.xi = r.y[1];
  out.t = unpack_t(r.y);
  out.unitarity_defect =
      (out.t.adjoint() * out.t - Mat2::Identity()).cwiseAbs().maxCoeff();
  const Mat2 Pend = mdl.projector(band, out.x, out.xi);
  const Mat2 P0 = mdl.projector(band, x0, xi0);
  out.intertwining_defect = (Pend * out.t - out.t * P0).cwiseAbs().maxCoeff();
  return out;
}

// ---- symbol evolution ------------------------------------------------------------

namespace {
bool symbol_zero_at(const SymbolSupport& supp, double x, double xi) {
  if (supp.x_rad > 0.0 && std::abs(x) > supp.x_rad) return true;
  if (supp.p_hi > 0.0 &&
      (std::abs(xi) < supp.p_lo || std::abs(xi) > supp.p_hi))
    return true;
  return false;
}
}  // namespace

std::vector<Mat2> evolve_symbol(const SymbolModel& mdl, const MatrixSymbol& a0,
                                const SymbolSupport& supp, double T,
                                const std::vector<std::array<double, 2>>& pts,
                                const OdeOptions& opt, Exec ex) {
  const double c = mdl.phys.c;
  const double r_int = mdl.pot.support_radius();
  // Force bound for the momentum reach-tube prune.
  double fmax = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = -r_int + 2.0 * r_int * i / 400.0;
    fmax = std::max(fmax, std::abs(mdl.pot.phi_deriv(x)) +
                              c * std::abs(mdl.pot.A_deriv(x)));
  }
  const double dxi_max = fmax * std::abs(T);

  std::vector<Mat2> out(pts.size(), Mat2::Zero());
  const int nthreads = exec_threads(ex);
  // Exceptions may not unwind out of an OpenMP region; marshal the first one.
  std::exception_ptr eptr = nullptr;
  std::atomic<bool> failed{false};
#pragma omp parallel for num_threads(nthreads) schedule(dynamic, 16)
  for (size_t i = 0; i < pts.size(); ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      const double x = pts[i][0], xi = pts[i][1];
      // Momentum reach-tube: if no attainable xi meets the symbol's momentum
      // window, every band contribution vanishes.
      if (supp.p_hi > 0.0) {
        const double lo = std::abs(xi) - dxi_max, hi = std::abs(xi) + dxi_max;
        if (hi < supp.p_lo || lo > supp.p_hi) continue;
      }
      const bool free_always = std::abs(x) > r_int + c * std::abs(T);
      if (free_always && supp.x_rad > 0.0 &&
          std::abs(x) - c * std::abs(T) > supp.x_rad)
        continue;  // cannot re-enter the spatial support either
      Mat2 acc = Mat2::Zero();
      for (const int band : {+1, -1}) {
        double xe, xie;
        Mat2 tmat;
        if (free_always) {
          // Exact free streaming: xi frozen, x drifts with the band velocity,
          // transport is trivial.
          xe = x + T * mdl.dlam_dxi(band, x, xi);
          xie = xi;
          tmat = Mat2::Identity();
        } else {
          const TransportResult tr = transport_matrix(mdl, band, x, xi, T, opt);
          xe = tr.x;
          xie = tr.xi;
          tmat = tr.t;
        }
        if (symbol_zero_at(supp, xe, xie)) continue;
        const Mat2 P = mdl.projector(band, xe, xie);
        acc += tmat.adjoint() * (P * a0(xe, xie) * P) * tmat;
      }
      out[i] = acc;
    } catch (...) {
#pragma omp critical(capdirac_evolve_exc)
      if (!eptr) {
        eptr = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  }
  if (eptr) std::rethrow_exception(eptr);
  return out;
}

// ---- Egorov comparison ---------------------------------------------------------

EgorovReport egorov_defect(const SymbolModel& mdl, const Grid1D& grid,
                           const MatrixSymbol& a0, const SymbolSupport& supp,
                           double T, const OdeOptions& opt, Exec ex) {
  const int N = grid.N;
  const PhysParams& p = mdl.phys;

  const MatX H = assemble_perturbed(grid, p, mdl.pot);
  auto [ev, V] = eig_hermitian(H);

  const MatX B0 = weyl_quantize(grid, p, a0, ex);

  // Heisenberg evolution U^* B0 U through the eigenbasis:
  // (V^* B0 V)_{ab} -> e^{i (ev_a - ev_b) T / hbar} (V^* B0 V)_{ab}.
  MatX W = V.adjoint() * B0 * V;
  for (Eigen::Index a = 0; a < W.rows(); ++a)
    for (Eigen::Index b = 0; b < W.cols(); ++b)
      W(a, b) *= std::exp(cplx(0.0, (ev[a] - ev[b]) * T / p.hbar));
  const MatX lhs = V * W * V.adjoint();

  // Evolved symbol on the Weyl evaluation lattice (all 2N midpoint rows).
  std::vector<std::array<double, 2>> pts;
  pts.reserve(static_cast<size_t>(2 * N) * N);
  for (int s = 0; s <= 2 * N - 1; ++s) {
    const double mu = -grid.L + 0.5 * s * grid.h();
    for (int m = 0; m < N; ++m) pts.push_back({mu, p.hbar * grid.k(m)});
  }
  const std::vector<Mat2> table = evolve_symbol(mdl, a0, supp, T, pts, opt, ex);
  const MatX Bt = weyl_quantize_lattice(grid, table, ex);

  EgorovReport rep;
  rep.b0_norm = op_norm_2(B0);
  rep.raw_defect = op_norm_2(lhs - Bt);
  rep.defect = rep.raw_defect / rep.b0_norm;
  return rep;
}

}  // namespace capdirac
