#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "capdirac/algebra.hpp"
#include "capdirac/exec.hpp"
#include "capdirac/model.hpp"
#include "capdirac/ode.hpp"
#include "capdirac/quantize.hpp"

namespace capdirac {

// ---------------------------------------------------------------------------
// Two-band dispersion matrix in 1d:
//   d(x,xi) = c sigma_1 (xi - A(x)) + sigma_3 m c^2 + phi(x) I,
// eigenvalues lambda_{+/-}(x,xi) = phi(x) -/+ ... = phi +/- rho with
// rho = sqrt(c^2 (xi-A)^2 + m^2 c^4) and rank-one eigenprojectors.
// ---------------------------------------------------------------------------
struct SymbolModel {
  PhysParams phys;
  Potential1D pot;

  Mat2 d(double x, double xi) const;
  Mat2 d_dx(double x, double xi) const;
  Mat2 d_dxi(double x, double xi) const;

  double rho(double x, double xi) const;
  // band is +1 or -1.
  double lambda(int band, double x, double xi) const;
  Mat2 projector(int band, double x, double xi) const;

  // Hamilton field of the band (closed forms; a finite-difference
  // Hellmann-Feynman cross-check lives in the tests).
  double dlam_dxi(int band, double x, double xi) const;
  double dlam_dx(int band, double x, double xi) const;
};

// min over the sampled window of |lambda_+ - lambda_-| / <xi>,
// <xi> = sqrt(1+xi^2); positive min certifies uniform band separation.
double hyperbolicity_margin(const SymbolModel& mdl, double x_lo, double x_hi,
                            double xi_lo, double xi_hi, int nx = 160,
                            int nxi = 160);

// ---------------------------------------------------------------------------
// Hamiltonian flow of one band.
// ---------------------------------------------------------------------------
struct FlowPoint {
  double x = 0.0, xi = 0.0;
  double energy_drift = 0.0;  // |lambda(end) - lambda(start)|
};
FlowPoint integrate_flow(const SymbolModel& mdl, int band, double x0,
                         double xi0, double T, const OdeOptions& opt = {});

// Deterministic escape-time sampler.  Seeds are drawn (fixed RNG seed) from
// {(x,xi): r_lo <= |x| <= r_hi, lambda_band in [e_lo, e_hi]}; a seed is
// trapped when neither the forward nor the backward trajectory leaves
// |x| > escape_R within time T.  Nontrapping verdict = no trapped seed.
struct NontrappingReport {
  bool nontrapping = false;
  int n_seeds = 0;
  std::vector<std::array<double, 2>> trapped;  // (x, xi) of trapped seeds
};
NontrappingReport nontrapping_verdict(const SymbolModel& mdl, int band,
                                      double r_lo, double r_hi, double e_lo,
                                      double e_hi, double escape_R, double T,
                                      int n_seeds, std::uint64_t seed,
                                      Exec ex = Exec::serial);

// ---------------------------------------------------------------------------
// First-order Moyal product of 2x2 symbols:  a # b = c0 + hbar c1 + O(hbar^2),
//   c0 = a b,   c1 = (i/2) (d_x a d_xi b - d_xi a d_x b)
// (matrix factors kept in written order).  Derivatives by central differences
// with step 1e-4 (1 + |x| + |xi|).
// ---------------------------------------------------------------------------
struct MoyalPair {
  Mat2 c0, c1;
};
MoyalPair moyal_first_order(const MatrixSymbol& a, const MatrixSymbol& b,
                            double x, double xi);

// ---------------------------------------------------------------------------
// Transport generator of band j at a phase-space point:
//   G = -i (lambda/2) P {P,P} P  - i [P, {lambda, P}]  + P T1 P,
// with {A,B} = d_xi A d_x B - d_x A d_xi B (order preserved) and T1 the
// subprincipal symbol of P # d # P computed with the principal projector via
// two first-order Moyal products.  The parallel-transport equation is
//   dt/ds + i G(Phi^s) t = 0,  t(0) = I.
// ---------------------------------------------------------------------------
Mat2 transport_generator(const SymbolModel& mdl, int band, double x, double xi);

// Pieces of the generator, for the structure tests.
struct GeneratorTerms {
  Mat2 self_bracket;   // -i (lambda/2) P {P,P} P
  Mat2 commutator;     // -i [P, {lambda, P}]
  Mat2 subprincipal;   // P T1 P
};
GeneratorTerms transport_generator_terms(const SymbolModel& mdl, int band,
                                         double x, double xi);

// Co-integrates the flow and the transport matrix over [0, T].
struct TransportResult {
  double x = 0.0, xi = 0.0;  // flow endpoint
  Mat2 t;                    // transport matrix
  double unitarity_defect = 0.0;     // ||t^* t - I||
  double intertwining_defect = 0.0;  // ||P(end) t - t P(start)||
};
TransportResult transport_matrix(const SymbolModel& mdl, int band, double x0,
                                 double xi0, double T,
                                 const OdeOptions& opt = {});

// ---------------------------------------------------------------------------
// Evolved matrix symbol
//   a_T(rho) = sum_j t_j(T,rho)^* P_j(Phi_j^T rho) a0(Phi_j^T rho)
//                                P_j(Phi_j^T rho) t_j(T,rho),
// evaluated on a batch of phase-space points.  Points whose trajectories stay
// outside the interaction region the whole time use the exact free-streaming
// form (t_j = I, straight-line flow).
// ---------------------------------------------------------------------------
struct SymbolSupport {
  double x_rad = 0.0;   // a0 vanishes for |x| > x_rad (0 = unbounded)
  double p_lo = 0.0, p_hi = 0.0;  // a0 vanishes for xi outside [p_lo, p_hi]
                                  // by absolute value (p_hi = 0 = unbounded)
};
std::vector<Mat2> evolve_symbol(const SymbolModel& mdl, const MatrixSymbol& a0,
                                const SymbolSupport& supp, double T,
                                const std::vector<std::array<double, 2>>& pts,
                                const OdeOptions& opt = {},
                                Exec ex = Exec::serial);

// ---------------------------------------------------------------------------
// Quantum-classical comparison:
//   defect(T) = || U(T)^* Op(a0) U(T) - Op(a_T) ||_2 / || Op(a0) ||_2
// with U(T) = exp(-i T H / hbar), H the quantized model operator.
// ---------------------------------------------------------------------------
struct EgorovReport {
  double defect = 0.0;      // normalized operator-norm defect
  double b0_norm = 0.0;     // || Op(a0) ||_2
  double raw_defect = 0.0;  // unnormalized
};
EgorovReport egorov_defect(const SymbolModel& mdl, const Grid1D& grid,
                           const MatrixSymbol& a0, const SymbolSupport& supp,
                           double T, const OdeOptions& opt = {},
                           Exec ex = Exec::serial);

}  // namespace capdirac
