#include "capdirac/model.hpp"

#include <cmath>
#include <sstream>

#include "capdirac/errors.hpp"
#include "capdirac/smooth.hpp"

namespace capdirac {

void PhysParams::validate() const {
  if (!(hbar > 0.0) || !(m > 0.0) || !(c > 0.0))
    throw config_error("physics: hbar, m, c must all be positive");
}

// ---- potentials ------------------------------------------------------------

double Potential1D::phi(double x) const {
  switch (kind) {
    case PotentialKind::none:
      return 0.0;
    case PotentialKind::scalar_well:
      return -well_depth * bump(x / well_width);
    case PotentialKind::double_barrier:
      return bar_height *
             (bump((x - bar_sep) / bar_width) + bump((x + bar_sep) / bar_width));
    case PotentialKind::em:
      return phi0 * bump((x - phi_center) / phi_width);
  }
  return 0.0;
}

double Potential1D::phi_deriv(double x) const {
  switch (kind) {
    case PotentialKind::none:
      return 0.0;
    case PotentialKind::scalar_well:
      return -well_depth * bump_deriv(x / well_width) / well_width;
    case PotentialKind::double_barrier:
      return bar_height * (bump_deriv((x - bar_sep) / bar_width) +
                           bump_deriv((x + bar_sep) / bar_width)) /
             bar_width;
    case PotentialKind::em:
      return phi0 * bump_deriv((x - phi_center) / phi_width) / phi_width;
  }
  return 0.0;
}

double Potential1D::A(double x) const {
  if (kind != PotentialKind::em) return 0.0;
  return a0 * bump((x - a_center) / a_width);
}

double Potential1D::A_deriv(double x) const {
  if (kind != PotentialKind::em) return 0.0;
  return a0 * bump_deriv((x - a_center) / a_width) / a_width;
}

Mat2 Potential1D::V(double x, const PhysParams& p) const {
  Mat2 v = phi(x) * Mat2::Identity();
  if (kind == PotentialKind::em) v -= p.c * A(x) * pauli(1);
  return v;
}

double Potential1D::support_radius() const {
  switch (kind) {
    case PotentialKind::none:
      return 0.0;
    case PotentialKind::scalar_well:
      return well_width;
    case PotentialKind::double_barrier:
      return bar_sep + bar_width;
    case PotentialKind::em: {
      const double rphi =
          (phi0 != 0.0) ? std::abs(phi_center) + phi_width : 0.0;
      const double ra = (a0 != 0.0) ? std::abs(a_center) + a_width : 0.0;
      return std::max(rphi, ra);
    }
  }
  return 0.0;
}

Potential1D Potential1D::well(double depth, double width) {
  Potential1D v;
  v.kind = PotentialKind::scalar_well;
  v.well_depth = depth;
  v.well_width = width;
  return v;
}

Potential1D Potential1D::barrier_pair(double height, double width, double sep) {
  Potential1D v;
  v.kind = PotentialKind::double_barrier;
  v.bar_height = height;
  v.bar_width = width;
  v.bar_sep = sep;
  return v;
}

Potential1D Potential1D::em_bumps(double phi0, double phi_width,
                                  double phi_center, double a0, double a_width,
                                  double a_center) {
  Potential1D v;
  v.kind = PotentialKind::em;
  v.phi0 = phi0;
  v.phi_width = phi_width;
  v.phi_center = phi_center;
  v.a0 = a0;
  v.a_width = a_width;
  v.a_center = a_center;
  return v;
}

// ---- CAP -------------------------------------------------------------------

double Cap::reW(double x) const {
  if (delta0 == 0.0) return 0.0;
  return delta0 * smoothstep((std::abs(x) - r1) / (r2 - r1));
}

std::complex<double> Cap::W(double x) const {
  const double re = reW(x);
  const double im = (im_scale != 0.0) ? im_scale * std::sqrt(re) : 0.0;
  return {re, im};
}

void Cap::validate() const {
  if (delta0 == 0.0 && im_scale == 0.0) return;  // trivial CAP is fine
  if (!(delta0 > 0.0)) throw config_error("cap: delta0 must be positive");
  if (!(r1 >= 0.0) || !(r2 > r1))
    throw config_error("cap: need 0 <= r1 < r2");
  // Numerical re-check of the damping properties on a scan of the ramp.
  const double cbound = std::abs(im_scale) + 1e-12;
  for (int i = 0; i <= 400; ++i) {
    const double x = r1 - 0.5 + i * (r2 - r1 + 1.0) / 400.0;
    const std::complex<double> w = W(x);
    if (w.real() < 0.0) throw config_error("cap: Re W must be nonnegative");
    if (std::abs(x) < r1 && std::abs(w) != 0.0)
      throw config_error("cap: support must avoid |x| < r1");
    if (std::abs(w.imag()) > cbound * std::sqrt(w.real()) + 1e-12)
      throw config_error("cap: |Im W| must be bounded by C sqrt(Re W)");
  }
  if (reW(r2 + 1e-9) < delta0 * (1.0 - 1e-9) - 1e-12)
    throw config_error("cap: Re W must reach delta0 beyond r2");
}

// ---- scaling function -------------------------------------------------------

namespace {
// g' profile over the scaled transition variable u in [0,1]:
//   u in [0, a]      : h * s(u/a)
//   u in [a, 1-a]    : h
//   u in [1-a, 1]    : h + (1-h) * s((u-(1-a))/a)
// Integral over [0,1] equals h(1-a) + a/2 (uses int s = 1/2 by symmetry).
double profile(double u, double h, double a) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  if (u < a) return h * smoothstep(u / a);
  if (u <= 1.0 - a) return h;
  return h + (1.0 - h) * smoothstep((u - (1.0 - a)) / a);
}

double profile_deriv(double u, double h, double a) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  if (u < a) return h * smoothstep_deriv(u / a) / a;
  if (u <= 1.0 - a) return 0.0;
  return (1.0 - h) * smoothstep_deriv((u - (1.0 - a)) / a) / a;
}

// Integral of the profile from 0 to u (exact per piece via smoothstep_integral).
double profile_integral(double u, double h, double a) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return h * (1.0 - a) + 0.5 * a + (u - 1.0);
  double acc = 0.0;
  // rising piece
  if (u < a) return h * a * smoothstep_integral(u / a);
  acc += h * a * 0.5;
  // plateau
  if (u <= 1.0 - a) return acc + h * (u - a);
  acc += h * (1.0 - 2.0 * a);
  // settling piece
  const double v = (u - (1.0 - a)) / a;
  acc += h * (u - (1.0 - a)) + (1.0 - h) * a * smoothstep_integral(v);
  return acc;
}
}  // namespace

double ScalingFn::g(double x) const {
  const double r = std::abs(x);
  if (r <= r0) return 0.0;
  if (r >= r0 + eta_effective) return x;
  const double u = (r - r0) / eta_effective;
  const double val = eta_effective * profile_integral(u, plateau, rise);
  return (x >= 0.0) ? val : -val;
}

double ScalingFn::gp(double x) const {
  const double r = std::abs(x);
  if (r <= r0) return 0.0;
  if (r >= r0 + eta_effective) return 1.0;
  return profile(((r - r0) / eta_effective), plateau, rise);
}

double ScalingFn::gpp(double x) const {
  const double r = std::abs(x);
  if (r <= r0 || r >= r0 + eta_effective) return 0.0;
  const double d = profile_deriv((r - r0) / eta_effective, plateau, rise) /
                   eta_effective;
  return (x >= 0.0) ? d : -d;  // g' is even, so g'' is odd
}

ScalingFn make_scaling_g(double r0, double eta, double margin) {
  if (!(r0 >= 0.0)) throw config_error("scaling: r0 must be nonnegative");
  if (!(eta > 0.0)) throw config_error("scaling: eta must be positive");
  const double bound = std::sqrt(2.0) - margin;
  const double a = 0.1;

  ScalingFn s;
  s.r0 = r0;
  s.eta_requested = eta;
  s.rise = a;

  // Plateau height needed so that int g' over [r0, r0+eta] = r0 + eta:
  //   h(1-a) + a/2 = 1 + r0/eta  =>  h = (1 + r0/eta - a/2)/(1-a).
  // Widen eta until h fits under the bound (at most 10 times, then exact).
  double e = eta;
  auto height = [&](double et) {
    return (1.0 + r0 / et - 0.5 * a) / (1.0 - a);
  };
  int widenings = 0;
  while (height(e) >= bound && widenings < 10) {
    e *= 1.5;
    ++widenings;
  }
  if (height(e) >= bound) {
    // Solve h(e) = bound - tiny for the minimal admissible eta instead of
    // failing: bound is reachable for every r0 since h -> (1-a/2)/(1-a) < bound.
    const double h_inf = (1.0 - 0.5 * a) / (1.0 - a);
    if (bound <= h_inf)
      throw config_error("scaling: slope bound unreachable for this profile");
    e = r0 / ((bound - 1e-6) * (1.0 - a) - 1.0 + 0.5 * a);
  }
  s.eta_effective = e;
  s.plateau = height(e);
  return s;
}

// ---- distortion ------------------------------------------------------------

void DistortionParam::validate() const {
  if (!(eps > 0.0) || eps > 1.0)
    throw config_error("distortion: eps must lie in (0,1]");
  if (theta.imag() < 0.0)
    throw config_error("distortion: Im theta must be nonnegative");
  const double reach = eps / std::sqrt(1.0 + eps * eps);
  if (!(std::abs(theta) < reach))
    throw config_error("distortion: |theta| must stay below eps/sqrt(1+eps^2)");
  if (!(std::abs(std::arg(1.0 + theta)) < std::atan(eps)))
    throw config_error("distortion: arg(1+theta) outside the admissible sector");
}

// ---- boxes & geometry --------------------------------------------------------

void SpectralBox::validate_shape() const {
  if (!(l < r) || !(b <= t)) throw config_error("box: need l < r and b <= t");
}

void SpectralBox::validate_resonance_window(const PhysParams& p) const {
  validate_shape();
  if (!(l > p.mc2()))
    throw config_error("box: resonance window must sit above the mass gap edge");
  if (!(b < 0.0) || !(t >= 0.0))
    throw config_error("box: resonance window must straddle the real axis from below");
}

void Geometry::validate() const {
  if (!(L > 0.0)) throw config_error("geometry: L must be positive");
  if (N < 8 || (N % 2) != 0)
    throw config_error("geometry: N must be an even integer >= 8");
}

namespace {
void check_common(const Cap& cap, const ScalingFn& g, const Geometry& geo) {
  if (cap.delta0 > 0.0 && !(cap.r2 < g.r0))
    throw config_error(
        "placement: absorbing ramp must finish before the scaling region "
        "(r2 < r0)");
  if (!(g.r0 + g.eta_effective <= geo.L * 0.999))
    throw config_error("placement: scaling transition must fit inside the box");
}
}  // namespace

void check_standard_placement(const Potential1D& V, const Cap& cap,
                              const ScalingFn& g, const Geometry& geo) {
  if (cap.delta0 > 0.0 && !(V.support_radius() <= cap.r1))
    throw config_error(
        "placement: potential support must end before the absorbing region "
        "(R0' <= r1)");
  if (!(V.support_radius() <= g.r0))
    throw config_error("placement: potential support must end before scaling");
  check_common(cap, g, geo);
}

void check_intersecting_placement(const Potential1D& V, const Cap& cap,
                                  const ScalingFn& g, const Geometry& geo) {
  if (!(cap.delta0 > 0.0) || !(cap.r1 < V.support_radius()))
    throw config_error(
        "placement: intersecting variant needs the absorbing region to start "
        "inside the potential support (r1 < R0')");
  if (!(V.support_radius() <= g.r0))
    throw config_error("placement: potential support must end before scaling");
  check_common(cap, g, geo);
}

}  // namespace capdirac
