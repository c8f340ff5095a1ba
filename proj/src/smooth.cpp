#include "capdirac/smooth.hpp"

#include <array>
#include <cmath>

namespace capdirac {

namespace {
inline double psi(double t) { return (t > 0.0) ? std::exp(-1.0 / t) : 0.0; }
inline double psi_deriv(double t) {
  return (t > 0.0) ? std::exp(-1.0 / t) / (t * t) : 0.0;
}
}  // namespace

double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = psi(u), b = psi(1.0 - u);
  return a / (a + b);
}

double smoothstep_deriv(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double a = psi(u), b = psi(1.0 - u);
  const double ap = psi_deriv(u), bp = psi_deriv(1.0 - u);
  const double den = a + b;
  // d/du [a/(a+b)] with b = psi(1-u), so db/du = -bp.
  return (ap * b + a * bp) / (den * den);
}

double smoothstep_integral(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 0.5 + (u - 1.0);  // s == 1 past the end
  // 8-point Gauss-Legendre on [0,1], mapped to n panels over [0,u].
  static constexpr std::array<double, 8> gx = {
      -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
      -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
      0.7966664774136267,  0.9602898564975363};
  static constexpr std::array<double, 8> gw = {
      0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
      0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
      0.2223810344533745, 0.1012285362903763};
  const int panels = 24;
  const double h = u / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    double local = 0.0;
    for (int q = 0; q < 8; ++q) local += gw[q] * smoothstep(mid + 0.5 * h * gx[q]);
    acc += 0.5 * h * local;
  }
  return acc;
}

double bump(double v) {
  const double w = 1.0 - v * v;
  if (w <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / w);
}

double bump_deriv(double v) {
  const double w = 1.0 - v * v;
  if (w <= 0.0) return 0.0;
  return bump(v) * (-2.0 * v / (w * w));
}

double plateau_cutoff(double x, double a, double b) {
  return 1.0 - smoothstep((std::abs(x) - a) / (b - a));
}

double plateau_cutoff_deriv(double x, double a, double b) {
  const double sgn = (x >= 0.0) ? 1.0 : -1.0;
  return -sgn * smoothstep_deriv((std::abs(x) - a) / (b - a)) / (b - a);
}

}  // namespace capdirac
