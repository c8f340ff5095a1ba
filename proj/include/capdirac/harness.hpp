#pragma once

#include <optional>
#include <vector>

#include "capdirac/config.hpp"
#include "capdirac/dynamics.hpp"
#include "capdirac/model.hpp"
#include "capdirac/quantize.hpp"
#include "capdirac/spectra.hpp"

namespace capdirac {

// A complete comparison setup: potential + absorber + scaling + window,
// with the grid resolution tied to hbar.
struct Scenario {
  PhysParams phys;  // hbar field is the ladder default; rungs override it
  Potential1D pot;
  Cap cap;
  double r0 = 0.0, eta = 0.0;
  double L = 0.0;
  double grid_per_hbar = 0.0;
  int n_fixed = 0;  // used when grid_per_hbar == 0
  SpectralBox box;
  double tau_ref = 0.2, tau_check = 0.25;
  double c_gate = 1.0;
  int k_order = 8;

  int grid_n(double hbar) const;
  Grid1D grid(double hbar) const { return Grid1D{Geometry{L, grid_n(hbar)}}; }
};

Scenario scenario_from_config(const RunConfig& cfg);

// ---------------------------------------------------------------------------
// States on the grid (2N spinor vectors, spinor-major layout).
// ---------------------------------------------------------------------------
// Multiplies both spinor components by the plateau cutoff (1 inside |x|<=a,
// 0 outside |x|>=b) and normalizes to unit l2 norm.
VecX cutoff_state(const VecX& f, const Grid1D& g, double a, double b);

// Fraction (in norm) of the state supported where the absorber acts:
// sqrt( sum_{|x_j|>=r1} |f|^2 / sum |f|^2 ).
double cap_support_mass(const VecX& f, const Grid1D& g, const Cap& cap);

// ---------------------------------------------------------------------------
// Resonance identification for a scenario at one rung: eigenvalues of the
// scaled operator at tau_ref and tau_check, paired and filtered.
// When validate_window is true the window must be an admissible resonance
// window (above the gap edge, separated from the essential curve); quasimode
// searches disable it because their windows may dip into the spectral gap,
// where the same distortion-independence test identifies genuine point
// spectrum (bound states).
// ---------------------------------------------------------------------------
std::vector<Resonance> find_resonances(const Scenario& sc, double hbar,
                                       const SpectralBox& window,
                                       bool validate_window = true);

// CAP spectrum (J = H - iW on the periodic grid, or Dirichlet-restricted when
// dirichlet_R > 0) inside the window, with eigenvectors.
struct CapSpectrum {
  std::vector<cplx> values;
  MatX vectors;
  Grid1D grid;
  std::vector<int> nodes;  // grid nodes kept (Dirichlet case), else empty
};
CapSpectrum cap_spectrum(const Scenario& sc, double hbar,
                         const SpectralBox& window, double dirichlet_R = 0.0);

// ---------------------------------------------------------------------------
// Correspondence ladders.
// ---------------------------------------------------------------------------
struct RungResult {
  double hbar = 0.0;
  int n_grid = 0;
  cplx z0;             // tracked resonance (narrowest in window)
  cplx w0;             // matched damped-operator eigenvalue
  double dist = 0.0;   // |w0 - z0|
  bool gate = false;   // width gate for the direction being run
  double eps_law = 0.0;
  bool contained = false;    // partner found inside the predicted window
  double resid_const = 0.0;  // ||(H - w0) f|| / (sqrt(-Im w0) ||f||)
  double cap_mass = 0.0;     // absorber-support mass of the damped eigenstate
  int n_res = 0, n_cap = 0;
  double drift = 0.0;  // distortion-independence drift of z0
};

struct LadderReport {
  std::vector<RungResult> rungs;
};

// Resonance -> damped-spectrum direction: gate |Im z0| <= hbar^5/(C log(1/hbar)),
// law eps = hbar^{-5} |Im z0|, window [Re z0 -/+ eps log(1/hbar)] x [-eps, 0].
LadderReport run_resonance_to_cap(const Scenario& sc,
                                  const std::vector<double>& ladder);

// Damped-spectrum -> resonance direction: gate -Im w0 <= (hbar^4/(C log(1/hbar)))^2,
// law eps = hbar^{-4} sqrt(-Im w0), same window shape around Re w0.
LadderReport run_cap_to_resonance(const Scenario& sc,
                                  const std::vector<double>& ladder);

// Overlapping-absorber variant: requires a nontrapping verdict outside r1 in
// the window energies and a positive hyperbolicity margin (precondition_error
// otherwise), uses the weaker law eps = hbar^{-6} |Im z0| and carries a paired
// standard run for comparison.
struct IntersectReport {
  LadderReport inter;
  LadderReport standard;
  NontrappingReport nt;
  double hyperbolicity = 0.0;
};
IntersectReport run_intersecting(const Scenario& sc_inter,
                                 const Scenario& sc_standard,
                                 const std::vector<double>& ladder);

// ---------------------------------------------------------------------------
// Counting sweep: J(hbar) = number of damped eigenvalues (with multiplicity)
// in the window; exponent from the least-squares slope of log J against
// log(1/hbar); a refined pass (grid x1.5) re-estimates it.
// ---------------------------------------------------------------------------
struct CountRung {
  double hbar = 0.0;
  int n_grid = 0;
  int J = 0;
  int n_res = 0;
  int J_refined = 0;
};
struct CountReport {
  std::vector<CountRung> rungs;
  double exponent = 0.0;
  double exponent_refined = 0.0;
};
CountReport counting_sweep(const Scenario& sc, const std::vector<double>& ladder,
                           const SpectralBox& window);

// ---------------------------------------------------------------------------
// Quasimodes.
// ---------------------------------------------------------------------------
struct Quasimode {
  VecX u;          // unit-norm trial state on the full grid
  double e = 0.0;  // trial energy
  double rho = 0.0;  // ||(H - e) u||
  Grid1D grid;
};

// Dirichlet eigenpair on |x| < r_inner with energy in [e_lo, e_hi], extended
// by zero, then smoothly cut off over [cut_a, cut_b] (cut_b <= r_inner) and
// renormalized; rho is recomputed against the full periodic operator.
Quasimode dirichlet_quasimode(const Scenario& sc, double hbar, double r_inner,
                              double cut_a, double cut_b, double e_lo,
                              double e_hi);

// Existence window from the trial pair: b = max(C0 Bc Mc rho hbar^{-4-NN},
// exp(-Bc/hbar), hbar^K), window [e -/+ b log(1/hbar)] x [-b, tiny]; searches
// the scaled spectrum for an eigenvalue inside.
struct QuasimodeMatch {
  double b = 0.0;
  SpectralBox window;
  std::vector<Resonance> found;
};
QuasimodeMatch quasimode_to_resonance(const Scenario& sc, double hbar,
                                      const Quasimode& qm, double C0 = 1.0,
                                      double Bc = 1.0, double Mc = 1.0,
                                      int NN = 0);

}  // namespace capdirac
