#pragma once

#include <complex>
#include <string>

#include "capdirac/algebra.hpp"

namespace capdirac {

struct PhysParams {
  double hbar = 1.0;
  double m = 1.0;
  double c = 1.0;
  double mc2() const { return m * c * c; }
  void validate() const;
};

// ---------------------------------------------------------------------------
// Potentials.  All profiles are C-infinity bumps with compact support; the 1d
// matrix potential is V(x) = phi(x) I - c A(x) sigma_1, so an electromagnetic
// pair (phi, A) folds into the same Hermitian matrix-valued form used
// everywhere else.
// ---------------------------------------------------------------------------
enum class PotentialKind { none, scalar_well, double_barrier, em };

struct Potential1D {
  PotentialKind kind = PotentialKind::none;

  // scalar_well: phi(x) = -depth * bump(x/width)
  double well_depth = 0.0, well_width = 1.0;

  // double_barrier: phi(x) = height * [bump((x-sep)/width) + bump((x+sep)/width)]
  double bar_height = 0.0, bar_width = 1.0, bar_sep = 0.0;

  // em: phi(x) = phi0 * bump((x-phi_center)/phi_width),
  //     A(x)   = a0  * bump((x-a_center)/a_width)
  double phi0 = 0.0, phi_width = 1.0, phi_center = 0.0;
  double a0 = 0.0, a_width = 1.0, a_center = 0.0;

  double phi(double x) const;
  double phi_deriv(double x) const;
  double A(double x) const;
  double A_deriv(double x) const;
  Mat2 V(double x, const PhysParams& p) const;

  // Radius of the (closed) support of the full matrix potential.
  double support_radius() const;

  static Potential1D free_space() { return {}; }
  static Potential1D well(double depth, double width);
  static Potential1D barrier_pair(double height, double width, double sep);
  static Potential1D em_bumps(double phi0, double phi_width, double phi_center,
                              double a0, double a_width, double a_center);
};

// ---------------------------------------------------------------------------
// Complex absorbing potential.  Profile:
//   Re W(x) = delta0 * s((|x|-R1)/(R2-R1))   (0 inside R1, delta0 outside R2)
//   Im W(x) = im_scale * sqrt(Re W(x))       (optional, default 0)
// so Re W >= 0, supp W inside {|x| >= R1}, Re W >= delta0 for |x| > R2 and
// |Im W| <= |im_scale| sqrt(Re W) hold by construction; validate() re-checks
// them numerically on a scan.
// ---------------------------------------------------------------------------
struct Cap {
  double r1 = 0.0, r2 = 0.0, delta0 = 0.0;
  double im_scale = 0.0;

  std::complex<double> W(double x) const;
  double reW(double x) const;
  void validate() const;
};

// ---------------------------------------------------------------------------
// Exterior-scaling function g.  Requirements:
//   g == 0 on |x| <= R0, g(x) == x for |x| >= R0 + eta, C-infinity,
//   sup|g'| < sqrt(2) with margin 0.05.
// Construction: g' rises smoothly 0 -> h over the first fraction `rise` of the
// transition, holds the plateau h = (1 + R0/eta - rise/2)/(1 - rise), then
// settles smoothly h -> 1 over the last fraction; g is its integral.  The
// plateau height is the supremum of g', and the calibration makes
// g(R0+eta) = R0+eta exactly, so the identity branch glues smoothly.
// A requested eta that would push h past the bound is widened automatically
// (recorded in eta_effective vs eta_requested).
// ---------------------------------------------------------------------------
struct ScalingFn {
  double r0 = 0.0;
  double eta_requested = 0.0;
  double eta_effective = 0.0;
  double rise = 0.1;     // fraction of the transition spent rising/settling
  double plateau = 1.0;  // sup |g'|

  double g(double x) const;
  double gp(double x) const;   // g'
  double gpp(double x) const;  // g''

  double sup_gp() const { return plateau; }
  bool widened() const { return eta_effective != eta_requested; }
};

// Builds the scaling function, widening eta if needed so that
// sup|g'| <= sqrt(2) - margin.  Throws config_error if impossible (r0 < 0 etc).
ScalingFn make_scaling_g(double r0, double eta, double margin = 0.05);

// ---------------------------------------------------------------------------
// Distortion parameter theta.  Admissible set: Im theta >= 0,
// |theta| < eps/sqrt(1+eps^2), |arg(1+theta)| < arctan(eps), with eps in (0,1].
// ---------------------------------------------------------------------------
struct DistortionParam {
  std::complex<double> theta{0.0, 0.0};
  double eps = 1.0;
  void validate() const;
};

// ---------------------------------------------------------------------------
// Rectangular spectral window [l,r] x i[b,t].
// ---------------------------------------------------------------------------
struct SpectralBox {
  double l = 0.0, r = 0.0, b = 0.0, t = 0.0;
  bool contains(std::complex<double> z) const {
    return z.real() >= l && z.real() <= r && z.imag() >= b && z.imag() <= t;
  }
  void validate_shape() const;  // l < r, b <= t
  // Resonance-window admissibility: l > m c^2, b < 0 <= t.  (Separation from
  // the essential curve is checked in the spectra module, which owns the
  // curve.)
  void validate_resonance_window(const PhysParams& p) const;
};

// ---------------------------------------------------------------------------
// Geometry ladder tying everything together:
//   support(V) = R0' ;  CAP ramp [R1,R2] ;  scaling starts at R0 ;
//   computational box [-L,L], periodic grid.
// Standard placement needs R0' <= R1 < R2 < R0 and R0 + eta <= L.
// (R2 < R0 makes the absorbing profile constant wherever the scaling acts, so
// the scaled CAP needs no analytic continuation.)
// ---------------------------------------------------------------------------
struct Geometry {
  double L = 0.0;
  int N = 0;
  void validate() const;
};

void check_standard_placement(const Potential1D& V, const Cap& cap,
                              const ScalingFn& g, const Geometry& geo);
// The intersecting variant relaxes R1 >= R0' (the absorbing region overlaps
// the interaction region) but keeps the rest of the ladder.
void check_intersecting_placement(const Potential1D& V, const Cap& cap,
                                  const ScalingFn& g, const Geometry& geo);

}  // namespace capdirac
