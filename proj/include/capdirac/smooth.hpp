#pragma once

namespace capdirac {

// C-infinity smoothstep on [0,1] built from psi(t) = exp(-1/t):
//   s(u) = psi(u) / (psi(u) + psi(1-u)),   s(u) + s(1-u) = 1.
// s == 0 for u <= 0 and s == 1 for u >= 1; all derivatives vanish at the ends.
double smoothstep(double u);
double smoothstep_deriv(double u);

// Integral of the smoothstep from 0 to u (composite Gauss-Legendre; the
// symmetry s(u)+s(1-u)=1 gives the exact value 1/2 at u=1, which the
// quadrature reproduces to rounding).  Clamped linearly above u=1.
double smoothstep_integral(double u);

// C-infinity bump: exp(1 - 1/(1-v^2)) for |v|<1, 0 otherwise.  Peak value 1.
double bump(double v);
double bump_deriv(double v);

// Two-sided plateau cutoff: 1 for |x| <= a, 0 for |x| >= b, smooth between.
double plateau_cutoff(double x, double a, double b);
double plateau_cutoff_deriv(double x, double a, double b);

}  // namespace capdirac
