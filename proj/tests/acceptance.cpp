// Acceptance suite: one check per command-line argument, each printing a
// single [PASS]/[FAIL] line with its measurements.  Exit 0 on pass, 1 on fail.
//
// Every check is a fixed, deterministic configuration (seeded RNG where
// sampling is involved) so reruns are bit-for-bit reproducible.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "capdirac/algebra.hpp"
#include "capdirac/dynamics.hpp"
#include "capdirac/errors.hpp"
#include "capdirac/harness.hpp"
#include "capdirac/lapack_wrap.hpp"
#include "capdirac/model.hpp"
#include "capdirac/ode.hpp"
#include "capdirac/quantize.hpp"
#include "capdirac/smooth.hpp"
#include "capdirac/spectra.hpp"

namespace {

using namespace capdirac;

bool g_ok = true;

void pass(const char* name, const char* fmt, ...) {
  std::printf("[PASS] %s (", name);
  va_list ap;
  va_start(ap, fmt);
  std::vprintf(fmt, ap);
  va_end(ap);
  std::printf(")\n");
}

void fail(const char* name, const char* fmt, ...) {
  g_ok = false;
  std::fprintf(stderr, "[FAIL] %s: ", name);
  va_list ap;
  va_start(ap, fmt);
  std::vfprintf(stderr, fmt, ap);
  va_end(ap);
  std::fprintf(stderr, "\n");
}

// ---------------------------------------------------------------------------
// Shared fixtures.
// ---------------------------------------------------------------------------

// Shape-resonance double-barrier scenario used by the correspondence ladders,
// the drift/counting/resolvent checks and the intersecting-absorber variant.
Scenario barrier_scenario() {
  Scenario sc;
  sc.phys = PhysParams{1.0, 1.0, 1.0};
  sc.pot = Potential1D::barrier_pair(0.26, 0.7, 1.6);
  sc.cap = Cap{2.4, 2.9, 0.35, 0.0};
  sc.r0 = 3.0;
  sc.eta = 11.0;
  sc.L = 14.5;
  sc.grid_per_hbar = 28.0;
  sc.box = SpectralBox{1.192, 1.34, -0.05, 1e-10};
  return sc;
}

// Tall-barrier scenario for the quasimode instance: the deep well keeps the
// cutoff commutator far below the residual gate at the chosen resolution.
Scenario tall_barrier_scenario() {
  Scenario sc = barrier_scenario();
  sc.pot = Potential1D::barrier_pair(1.3, 1.2, 1.5);
  sc.cap = Cap{2.6, 3.0, 0.35, 0.0};
  sc.r0 = 3.2;
  sc.eta = 11.6;
  sc.L = 15.0;
  sc.grid_per_hbar = 56.0;
  return sc;
}

// Narrowest eigenvalue (smallest |Im|) of the distorted operator in the box.
cplx tracked_value(const Scenario& sc, double hbar, double tau, double r0,
                   double eta) {
  PhysParams p = sc.phys;
  p.hbar = hbar;
  const Grid1D g = sc.grid(hbar);
  const ScalingFn scal = make_scaling_g(r0, eta);
  const DistortionParam th{cplx(0.0, tau)};
  check_box_admissible(sc.box, th, p);
  const MatX A = assemble_distorted(g, p, sc.pot, scal, th);
  const auto eigs = eigs_in_box(A, sc.box);
  if (eigs.empty()) throw solver_error("tracked_value: empty box");
  cplx best = eigs[0].value;
  for (const BoxEig& be : eigs)
    if (std::abs(be.value.imag()) < std::abs(best.imag())) best = be.value;
  return best;
}

// ---------------------------------------------------------------------------
// 1. Dirac matrix algebra and the symbol-level dispersion identity.
// ---------------------------------------------------------------------------
void run_algebra_identities() {
  const char* name = "algebra_identities";
  const double c1 = clifford_defect(1);
  const double c3 = clifford_defect(3);
  if (c1 > 1e-14 || c3 > 1e-14) {
    fail(name, "clifford defect %.3e (d=1) / %.3e (d=3) above 1e-14", c1, c3);
    return;
  }
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> uni(-5.0, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int dim = (i % 2) ? 3 : 1;
    std::vector<double> xi(dim);
    for (double& v : xi) v = uni(rng);
    worst = std::max(worst, dispersion_defect(xi, 1.3, 0.9, dim));
  }
  if (worst > 1e-12) {
    fail(name, "dispersion defect %.3e above 1e-12", worst);
    return;
  }
  pass(name, "clifford defect %.1e/%.1e, dispersion defect %.1e on 100 draws",
       c1, c3, worst);
}

// ---------------------------------------------------------------------------
// 2. Free operator eigenvalues match the relativistic dispersion exactly.
// ---------------------------------------------------------------------------
void run_free_spectrum_dispersion() {
  const char* name = "free_spectrum_dispersion";
  const Grid1D g{Geometry{30.0, 1024}};
  const PhysParams p{1.0, 1.0, 1.0};
  const MatX A = assemble_free(g, p);
  const VecXr ev = eigvals_hermitian(A);
  std::vector<double> want;
  want.reserve(2 * g.N);
  for (int m = 0; m < g.N; ++m) {
    const double e = std::sqrt(p.hbar * p.hbar * g.k(m) * g.k(m) + 1.0);
    want.push_back(e);
    want.push_back(-e);
  }
  std::sort(want.begin(), want.end());
  double worst = 0.0;
  for (int i = 0; i < 2 * g.N; ++i)
    worst = std::max(worst,
                     std::abs(ev[i] - want[i]) / (1.0 + std::abs(want[i])));
  if (worst > 1e-10) {
    fail(name, "relative eigenvalue error %.3e above 1e-10", worst);
    return;
  }
  pass(name, "N=1024: all 2048 eigenvalues match dispersion, rel err %.1e",
       worst);
}

// ---------------------------------------------------------------------------
// 3. Global dilation rotates the free spectrum onto the scaled curve.
// ---------------------------------------------------------------------------
void run_dilation_essential_curve() {
  const char* name = "dilation_essential_curve";
  const Grid1D g{Geometry{30.0, 640}};
  const PhysParams p{1.0, 1.0, 1.0};
  // g(x) = x everywhere: a pure dilation, so every eigenvalue must sit on the
  // scaled curve, not just approach it far out.
  ScalingFn dil;
  dil.r0 = -1.0;
  dil.eta_requested = 0.5;
  dil.eta_effective = 0.5;
  const DistortionParam th{cplx(0.0, 0.2)};
  const MatX A =
      assemble_distorted(g, p, Potential1D::free_space(), dil, th);
  const VecX ev = eigvals_general(A);
  const double kcut = 0.5 * g.k_max();
  double worst = 0.0;
  int used = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) > kcut) continue;
    ++used;
    const double d = essential_distance(ev[i], th, p) / (1.0 + std::abs(ev[i]));
    worst = std::max(worst, d);
  }
  if (used == 0 || worst > 1e-6) {
    fail(name, "%d eigenvalues below cutoff, worst curve distance %.3e", used,
         worst);
    return;
  }
  pass(name, "%d eigenvalues within |z| <= %.1f, worst rel distance %.1e",
       used, kcut, worst);
}

// ---------------------------------------------------------------------------
// 4. Resonance value independent of the distortion angle and scaling window.
// ---------------------------------------------------------------------------
void run_resonance_drift_independence() {
  const char* name = "resonance_drift_independence";
  Scenario sc = barrier_scenario();
  sc.box = SpectralBox{1.192, 1.34, -0.04, 1e-10};
  const double hb = 0.1;
  struct Combo {
    double tau, r0, eta;
  };
  const Combo combos[] = {
      {0.15, 3.0, 11.0}, {0.20, 3.0, 11.0}, {0.25, 3.0, 11.0},
      {0.20, 3.1, 11.3}};
  std::vector<cplx> vals;
  for (const Combo& c : combos)
    vals.push_back(tracked_value(sc, hb, c.tau, c.r0, c.eta));
  double worst = 0.0;
  for (size_t i = 0; i < vals.size(); ++i)
    for (size_t j = i + 1; j < vals.size(); ++j)
      worst = std::max(worst, std::abs(vals[i] - vals[j]) /
                                  (1.0 + std::abs(vals[i])));
  if (worst > 1e-6) {
    fail(name, "relative drift %.3e across combos above 1e-6", worst);
    return;
  }
  pass(name,
       "z = %.9f %+.3e i at hbar=%.2f; worst drift %.1e over 3 angles + 2 "
       "scalings",
       vals[1].real(), vals[1].imag(), hb, worst);
}

// ---------------------------------------------------------------------------
// 5. Damped operators keep their whole spectrum in the closed lower half
//    plane, across models, absorber supports and complex dampings.
// ---------------------------------------------------------------------------
void run_cap_halfplane_confinement() {
  const char* name = "cap_halfplane_confinement";
  const Grid1D g{Geometry{14.5, 320}};
  const PhysParams p{0.1, 1.0, 1.0};
  const Potential1D models[] = {
      Potential1D::free_space(), Potential1D::well(0.5, 1.0),
      Potential1D::barrier_pair(0.26, 0.7, 1.6),
      Potential1D::em_bumps(0.4, 1.2, 0.3, 0.25, 1.0, -0.4)};
  const Cap caps[] = {
      Cap{2.4, 2.9, 0.35, 0.0},   // compact ramp
      Cap{2.4, 13.0, 0.35, 0.0},  // ramp filling the box
      Cap{2.4, 2.9, 0.35, 0.3},   // complex damping, |Im W| <= 0.3 sqrt(Re W)
      Cap{2.4, 13.0, 0.8, 0.3}};
  double worst = -std::numeric_limits<double>::infinity();
  int n_ops = 0;
  for (const Potential1D& V : models)
    for (const Cap& cap : caps) {
      const MatX J = assemble_cap(g, p, V, cap);
      const VecX ev = eigvals_general(J);
      for (Eigen::Index i = 0; i < ev.size(); ++i)
        worst = std::max(worst, ev[i].imag());
      ++n_ops;
    }
  if (worst > 1e-10) {
    fail(name, "max Im over battery %.3e above 1e-10", worst);
    return;
  }
  pass(name, "%d damped operators (4 models x 4 absorbers), max Im = %.1e",
       n_ops, worst);
}

// ---------------------------------------------------------------------------
// 6. Resonance -> damped-spectrum ladder: strict approach + containment at
//    every hypothesis-satisfying rung.
// ---------------------------------------------------------------------------
void run_cap_resonance_ladder() {
  const char* name = "cap_resonance_ladder";
  const Scenario sc = barrier_scenario();
  const LadderReport rep = run_resonance_to_cap(sc, {0.2, 0.1, 0.05, 0.025});
  if (rep.rungs.size() != 4) {
    fail(name, "expected 4 rungs, got %zu", rep.rungs.size());
    return;
  }
  int met = 0;
  for (size_t i = 0; i < rep.rungs.size(); ++i) {
    const RungResult& r = rep.rungs[i];
    if (r.n_res == 0) {
      fail(name, "rung hbar=%.3f: no resonance tracked", r.hbar);
      return;
    }
    if (i > 0 && !(r.dist < rep.rungs[i - 1].dist)) {
      fail(name, "|w0-z0| not strictly decreasing at hbar=%.3f (%.3e vs %.3e)",
           r.hbar, r.dist, rep.rungs[i - 1].dist);
      return;
    }
    if (r.gate) {
      ++met;
      if (!r.contained) {
        fail(name, "gate met at hbar=%.3f but w0 outside the predicted window",
             r.hbar);
        return;
      }
    }
  }
  if (met == 0) {
    fail(name, "width gate never satisfied along the ladder");
    return;
  }
  const RungResult& last = rep.rungs.back();
  pass(name,
       "dists %.2e > %.2e > %.2e > %.2e; %d gate-met rung(s) all contained; "
       "final z0 = %.9f %+.2e i",
       rep.rungs[0].dist, rep.rungs[1].dist, rep.rungs[2].dist, last.dist,
       met, last.z0.real(), last.z0.imag());
}

// ---------------------------------------------------------------------------
// 7. Damped-spectrum -> resonance direction: the residual constant
//    ||(H - w0) f|| / (sqrt(-Im w0) ||f||) stays within +/-50% of its mean.
// ---------------------------------------------------------------------------
void run_cap_residual_law() {
  const char* name = "cap_residual_law";
  const Scenario sc = barrier_scenario();
  const LadderReport rep = run_cap_to_resonance(sc, {0.2, 0.1, 0.05, 0.025});
  if (rep.rungs.size() != 4) {
    fail(name, "expected 4 rungs, got %zu", rep.rungs.size());
    return;
  }
  double mean = 0.0;
  for (const RungResult& r : rep.rungs) mean += r.resid_const;
  mean /= static_cast<double>(rep.rungs.size());
  for (const RungResult& r : rep.rungs) {
    if (r.resid_const < 0.5 * mean || r.resid_const > 1.5 * mean) {
      fail(name, "residual constant %.4f at hbar=%.3f outside [%.4f, %.4f]",
           r.resid_const, r.hbar, 0.5 * mean, 1.5 * mean);
      return;
    }
  }
  pass(name, "constants {%.4f, %.4f, %.4f, %.4f}, mean %.4f, all in +/-50%%",
       rep.rungs[0].resid_const, rep.rungs[1].resid_const,
       rep.rungs[2].resid_const, rep.rungs[3].resid_const, mean);
}

// ---------------------------------------------------------------------------
// 8. Overlapping-absorber variant: trapping refused; nontrapping model passes
//    with shrinking absorber-support mass; moving the absorber off the
//    potential support improves the match at every rung.
// ---------------------------------------------------------------------------
void run_intersecting_support() {
  const char* name = "intersecting_support";
  Scenario std_sc = barrier_scenario();
  std_sc.cap = Cap{2.4, 2.8, 0.35, 0.0};
  Scenario inter = std_sc;
  inter.cap = Cap{2.0, 2.4, 0.35, 0.0};

  // Absorber reaching under the barrier into the well: trapped trajectories
  // start outside its inner edge, so the run must refuse.
  Scenario trap = std_sc;
  trap.cap = Cap{1.0, 2.9, 0.35, 0.0};
  bool refused = false;
  try {
    (void)run_intersecting(trap, std_sc, {0.1});
  } catch (const precondition_error&) {
    refused = true;
  }
  if (!refused) {
    fail(name, "trapping absorber (r1=1.0) was not refused");
    return;
  }

  const IntersectReport rep =
      run_intersecting(inter, std_sc, {0.2, 0.1, 0.05});
  if (!rep.nt.nontrapping || rep.hyperbolicity <= 0.0) {
    fail(name, "nontrapping=%d hyperbolicity=%.3f", int(rep.nt.nontrapping),
         rep.hyperbolicity);
    return;
  }
  for (size_t i = 0; i < rep.inter.rungs.size(); ++i) {
    const RungResult& ri = rep.inter.rungs[i];
    const RungResult& rs = rep.standard.rungs[i];
    if (i > 0 && !(ri.cap_mass < rep.inter.rungs[i - 1].cap_mass)) {
      fail(name, "absorber-support mass not decreasing at hbar=%.3f", ri.hbar);
      return;
    }
    if (!(rs.dist < ri.dist)) {
      fail(name,
           "non-overlapping run not closer at hbar=%.3f (%.3e vs %.3e)",
           ri.hbar, rs.dist, ri.dist);
      return;
    }
  }
  pass(name,
       "trap refused; nontrapping (%d seeds), hyperbolicity %.1f; masses "
       "{%.2e, %.2e, %.2e} decreasing; paired dists smaller at all 3 rungs",
       rep.nt.n_seeds, rep.hyperbolicity, rep.inter.rungs[0].cap_mass,
       rep.inter.rungs[1].cap_mass, rep.inter.rungs[2].cap_mass);
}

// ---------------------------------------------------------------------------
// 9. Contour-projector rank equals the dense eigenvalue count, including a
//    defective (Jordan) block.
// ---------------------------------------------------------------------------
void run_riesz_rank_exactness() {
  const char* name = "riesz_rank_exactness";
  std::mt19937_64 rng(777);
  std::normal_distribution<double> nrm(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const int n = 20 + static_cast<int>(rng() % 81);
    MatX A(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) A(i, j) = cplx(nrm(rng), nrm(rng));
    A /= std::sqrt(static_cast<double>(n));
    const VecX ev = eigvals_general(A);
    // Rejection-sample a circle staying clear of all eigenvalues.
    cplx center;
    double radius = 0.0;
    int want = -1;
    for (int attempt = 0; attempt < 200; ++attempt) {
      center = cplx(3.0 * (uni(rng) - 0.5), 3.0 * (uni(rng) - 0.5));
      radius = 0.2 + 1.0 * uni(rng);
      int inside = 0;
      double sep = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double d = std::abs(ev[i] - center);
        sep = std::min(sep, std::abs(d - radius));
        if (d < radius) ++inside;
      }
      if (sep >= 0.02 * radius) {
        want = inside;
        break;
      }
    }
    if (want < 0) {
      fail(name, "matrix %d: no admissible contour found", t);
      return;
    }
    const int got = riesz_rank(A, center, radius);
    if (got != want) {
      fail(name, "matrix %d (n=%d): rank %d != dense count %d", t, n, got,
           want);
      return;
    }
  }
  MatX jordan(2, 2);
  jordan << cplx(0.5, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.5, 0.0);
  const int jr = riesz_rank(jordan, cplx(0.5, 0.0), 0.3);
  if (jr != 2) {
    fail(name, "Jordan block rank %d != 2", jr);
    return;
  }
  pass(name, "200 random matrices (n in [20,100]) exact; Jordan block rank 2");
}

// ---------------------------------------------------------------------------
// 10. Resolvent growth above the box: the fitted constant in
//     ||(D_theta - z)^{-1}|| <= C / Im z is stable across resolutions.
// ---------------------------------------------------------------------------
void run_resolvent_bound_stability() {
  const char* name = "resolvent_bound_stability";
  const Scenario sc = barrier_scenario();
  const double res[] = {1.192, 1.229, 1.266, 1.303, 1.34};
  const double ims[] = {0.05, 0.1, 0.25, 0.5};
  const ScalingFn scal = make_scaling_g(sc.r0, sc.eta);
  const DistortionParam th{cplx(0.0, sc.tau_ref)};
  double C[2] = {0.0, 0.0};
  int ng[2] = {0, 0};
  int k = 0;
  for (const double hb : {0.1, 0.05}) {
    PhysParams p = sc.phys;
    p.hbar = hb;
    const Grid1D g = sc.grid(hb);
    const MatX A = assemble_distorted(g, p, sc.pot, scal, th);
    double worst = 0.0;
    for (const double re : res)
      for (const double im : ims)
        worst = std::max(worst, resolvent_norm(A, cplx(re, im)) * im);
    C[k] = worst;
    ng[k++] = g.N;
  }
  const double ratio = std::max(C[0], C[1]) / std::min(C[0], C[1]);
  if (!(ratio <= 1.3)) {
    fail(name, "C = %.4f (N=%d) vs %.4f (N=%d), ratio %.3f above 1.3", C[0],
         ng[0], C[1], ng[1], ratio);
    return;
  }
  pass(name, "C = %.4f (N=%d) and %.4f (N=%d) on 20 samples, ratio %.3f",
       C[0], ng[0], C[1], ng[1], ratio);
}

// ---------------------------------------------------------------------------
// 11. Transport frames stay unitary, with defect scaling in the ODE
//     tolerance.
// ---------------------------------------------------------------------------
void run_transport_unitarity() {
  const char* name = "transport_unitarity";
  SymbolModel mdl;
  mdl.phys = PhysParams{0.1, 1.1, 1.3};
  mdl.pot = Potential1D::em_bumps(0.4, 1.2, 0.3, 0.25, 1.0, -0.4);
  const double T = 0.8;
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uxi(-2.5, 2.5);
  struct Seed {
    double x, xi;
    int band;
  };
  std::vector<Seed> seeds;
  for (int s = 0; s < 100; ++s)
    seeds.push_back({ux(rng), uxi(rng), (s % 2) ? 1 : -1});

  double worst = 0.0;
  for (const Seed& s : seeds) {
    const TransportResult tr =
        transport_matrix(mdl, s.band, s.x, s.xi, T, OdeOptions{});
    worst = std::max(worst, tr.unitarity_defect);
  }
  if (worst > 1e-8) {
    fail(name, "worst unitarity defect %.3e above 1e-8", worst);
    return;
  }

  OdeOptions loose;
  loose.rel_tol = 1e-7;
  loose.abs_tol = 1e-9;
  OdeOptions mid;
  mid.rel_tol = 1e-8;
  mid.abs_tol = 1e-10;
  std::vector<double> ratios;
  for (const Seed& s : seeds) {
    const double dl =
        transport_matrix(mdl, s.band, s.x, s.xi, T, loose).unitarity_defect;
    const double dm =
        transport_matrix(mdl, s.band, s.x, s.xi, T, mid).unitarity_defect;
    if (dm > 0.0) ratios.push_back(dl / dm);
  }
  std::sort(ratios.begin(), ratios.end());
  const double med = ratios[ratios.size() / 2];
  if (!(med >= 5.0)) {
    fail(name, "median defect ratio %.2f below 5 when tolerance tightens x10",
         med);
    return;
  }
  pass(name, "100 seeds, worst defect %.1e; median x10-tolerance ratio %.1f",
       worst, med);
}

// ---------------------------------------------------------------------------
// 12. Quantum-classical defect halves (within [0.3, 0.7]) when hbar halves;
//     the identity symbol commutes exactly.
// ---------------------------------------------------------------------------
void run_egorov_remainder_ladder() {
  const char* name = "egorov_remainder_ladder";
  const double L = 7.0;
  const double times[] = {0.2, 0.35, 0.5};
  double mean[3] = {0.0, 0.0, 0.0};
  for (int lvl = 0; lvl < 3; ++lvl) {
    const double hb = 0.2 / (1 << lvl);
    const int N = 112 * (1 << lvl);
    SymbolModel mdl;
    mdl.phys = PhysParams{hb, 1.0, 1.0};
    mdl.pot = Potential1D::em_bumps(0.4, 1.4, 0.0, 0.0, 1.0, 0.0);
    const Grid1D g{Geometry{L, N}};
    const double xim = hb * g.k_max();
    const MatrixSymbol a0 = [xim](double x, double xi) {
      const double chi = plateau_cutoff(xi, 0.3 * xim, 0.5 * xim);
      return Mat2(std::exp(-x * x / 3.24) * chi * Mat2::Identity());
    };
    for (const double T : times) {
      const EgorovReport rep = egorov_defect(mdl, g, a0, SymbolSupport{}, T,
                                             OdeOptions{}, Exec::parallel);
      if (rep.b0_norm < 0.5) {
        fail(name, "degenerate comparison at hbar=%.2f, T=%.2f (norm %.2e)",
             hb, T, rep.b0_norm);
        return;
      }
      mean[lvl] += rep.defect;
    }
    mean[lvl] /= 3.0;
  }
  const double r1 = mean[1] / mean[0];
  const double r2 = mean[2] / mean[1];
  if (r1 < 0.3 || r1 > 0.7 || r2 < 0.3 || r2 > 0.7) {
    fail(name, "halving ratios %.3f, %.3f outside [0.3, 0.7]", r1, r2);
    return;
  }
  // a == I commutes with the propagator: defect at rounding level.
  {
    SymbolModel mdl;
    mdl.phys = PhysParams{0.2, 1.0, 1.0};
    mdl.pot = Potential1D::em_bumps(0.4, 1.4, 0.0, 0.0, 1.0, 0.0);
    const Grid1D g{Geometry{L, 112}};
    const MatrixSymbol one = [](double, double) {
      return Mat2(Mat2::Identity());
    };
    const EgorovReport rep = egorov_defect(mdl, g, one, SymbolSupport{}, 0.35,
                                           OdeOptions{}, Exec::parallel);
    if (rep.raw_defect > 1e-10) {
      fail(name, "identity symbol defect %.3e above 1e-10", rep.raw_defect);
      return;
    }
  }
  pass(name,
       "mean defects {%.4f, %.4f, %.4f}, halving ratios %.2f/%.2f; identity "
       "exact",
       mean[0], mean[1], mean[2], r1, r2);
}

// ---------------------------------------------------------------------------
// 13. Resonance counting grows like a power of 1/hbar with exponent <= 1.3,
//     stable under grid refinement; damped-spectrum counts dominate.
// ---------------------------------------------------------------------------
void run_counting_growth() {
  const char* name = "counting_growth";
  const Scenario sc = barrier_scenario();
  const SpectralBox window{1.02, 1.34, -0.04, 1e-10};
  const CountReport rep =
      counting_sweep(sc, {0.2, 0.1, 0.05, 0.025}, window);
  for (const CountRung& r : rep.rungs) {
    if (r.J < r.n_res) {
      fail(name, "J=%d below resonance count %d at hbar=%.3f", r.J, r.n_res,
           r.hbar);
      return;
    }
  }
  if (!(rep.exponent <= 1.3)) {
    fail(name, "fitted exponent %.4f above 1.3", rep.exponent);
    return;
  }
  if (std::abs(rep.exponent - rep.exponent_refined) > 0.2) {
    fail(name, "exponent %.4f vs refined %.4f differ beyond 0.2",
         rep.exponent, rep.exponent_refined);
    return;
  }
  pass(name,
       "J = {%d, %d, %d, %d}, resonances {%d, %d, %d, %d}; exponent %.3f "
       "(refined %.3f)",
       rep.rungs[0].J, rep.rungs[1].J, rep.rungs[2].J, rep.rungs[3].J,
       rep.rungs[0].n_res, rep.rungs[1].n_res, rep.rungs[2].n_res,
       rep.rungs[3].n_res, rep.exponent, rep.exponent_refined);
}

// ---------------------------------------------------------------------------
// 14. Quasimode existence window: a Dirichlet-derived trial with the residual
//     gate satisfied locates a resonance; an exact bound-state trial recovers
//     its real eigenvalue.
// ---------------------------------------------------------------------------
void run_quasimode_resonance() {
  const char* name = "quasimode_resonance";
  // (a) Dirichlet level of the deep double-barrier well, smoothly cut.
  const Scenario sc = tall_barrier_scenario();
  const double hb = 0.05;
  const Quasimode qm = dirichlet_quasimode(sc, hb, 2.45, 1.85, 2.35,
                                           1.28, 1.31);
  const double gate =
      std::pow(hb, 4.0) / (sc.c_gate * std::log(1.0 / hb));
  if (!(qm.rho <= gate)) {
    fail(name, "residual %.3e above gate %.3e", qm.rho, gate);
    return;
  }
  const QuasimodeMatch m = quasimode_to_resonance(sc, hb, qm);
  if (m.found.empty()) {
    fail(name, "no resonance inside the existence window (b=%.3e)", m.b);
    return;
  }
  double best = std::numeric_limits<double>::infinity();
  cplx znear;
  for (const Resonance& r : m.found) {
    const double d = std::abs(r.z.real() - qm.e);
    if (d < best) {
      best = d;
      znear = r.z;
    }
  }
  if (!(best <= m.b) || !(std::abs(znear.imag()) <= m.b)) {
    fail(name, "nearest z = %.9f %+.2e i misses the b-box (b=%.3e)",
         znear.real(), znear.imag(), m.b);
    return;
  }

  // (b) Exact discrete bound state of a well inside the spectral gap.
  Scenario wb;
  wb.phys = PhysParams{1.0, 1.0, 1.0};
  wb.pot = Potential1D::well(0.5, 1.0);
  wb.r0 = 2.2;
  wb.eta = 8.0;
  wb.L = 10.3;
  wb.n_fixed = 288;
  const double hb2 = 0.1;
  PhysParams p2 = wb.phys;
  p2.hbar = hb2;
  const Grid1D g2 = wb.grid(hb2);
  const MatX H2 = assemble_perturbed(g2, p2, wb.pot);
  const BoxEigvecs bound =
      eigs_in_box_with_vectors(H2, SpectralBox{0.55, 0.95, -1.0, 1.0});
  if (bound.values.empty()) {
    fail(name, "no bound state found in the gap window");
    return;
  }
  int pick = 0;
  for (size_t i = 1; i < bound.values.size(); ++i)
    if (std::abs(bound.values[i].real() - 0.75) <
        std::abs(bound.values[pick].real() - 0.75))
      pick = static_cast<int>(i);
  Quasimode exact;
  exact.grid = g2;
  exact.e = bound.values[pick].real();
  exact.u = bound.vectors.col(pick).normalized();
  exact.rho = (H2 * exact.u - exact.e * exact.u).norm();
  const QuasimodeMatch mb = quasimode_to_resonance(wb, hb2, exact);
  if (mb.found.empty()) {
    fail(name, "bound-state trial found no spectrum in its window");
    return;
  }
  double b2 = std::numeric_limits<double>::infinity();
  cplx z2;
  for (const Resonance& r : mb.found) {
    const double d = std::abs(r.z.real() - exact.e);
    if (d < b2) {
      b2 = d;
      z2 = r.z;
    }
  }
  if (!(b2 <= 1e-10) || !(std::abs(z2.imag()) <= 1e-10)) {
    fail(name, "bound state recovered at |dz|=%.2e, |Im|=%.2e (need 1e-10)",
         b2, std::abs(z2.imag()));
    return;
  }
  pass(name,
       "Dirichlet trial: rho %.2e <= gate %.2e, b %.2e, nearest |z-e| %.1e; "
       "bound-state trial: |dz| %.1e, |Im| %.1e",
       qm.rho, gate, m.b, best, b2, std::abs(z2.imag()));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <check-name>\n", argv[0]);
    return 2;
  }
  const std::string w = argv[1];
  try {
    if (w == "algebra_identities")
      run_algebra_identities();
    else if (w == "free_spectrum_dispersion")
      run_free_spectrum_dispersion();
    else if (w == "dilation_essential_curve")
      run_dilation_essential_curve();
    else if (w == "resonance_drift_independence")
      run_resonance_drift_independence();
    else if (w == "cap_halfplane_confinement")
      run_cap_halfplane_confinement();
    else if (w == "cap_resonance_ladder")
      run_cap_resonance_ladder();
    else if (w == "cap_residual_law")
      run_cap_residual_law();
    else if (w == "intersecting_support")
      run_intersecting_support();
    else if (w == "riesz_rank_exactness")
      run_riesz_rank_exactness();
    else if (w == "resolvent_bound_stability")
      run_resolvent_bound_stability();
    else if (w == "transport_unitarity")
      run_transport_unitarity();
    else if (w == "egorov_remainder_ladder")
      run_egorov_remainder_ladder();
    else if (w == "counting_growth")
      run_counting_growth();
    else if (w == "quasimode_resonance")
      run_quasimode_resonance();
    else {
      std::fprintf(stderr, "unknown check: %s\n", w.c_str());
      return 2;
    }
  } catch (const std::exception& e) {
    fail(w.c_str(), "unexpected exception: %s", e.what());
  }
  return g_ok ? 0 : 1;
}
