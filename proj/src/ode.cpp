#include "capdirac/ode.hpp"

#include <cmath>

#include "capdirac/errors.hpp"

namespace capdirac {

// Dormand-Prince RK5(4)7M coefficients.
namespace {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// embedded 4th-order weights
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;
}  // namespace

OdeResult integrate_ode(const OdeRhs& f, Eigen::VectorXd y, double t0,
                        double t1, const OdeOptions& opt,
                        const OdeObserver& observe) {
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  double t = t0;
  double h = dir * std::min(std::abs(opt.h0), std::abs(t1 - t0));
  const Eigen::Index n = y.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n),
      y5(n), err(n);
  OdeResult res;
  f(t, y, k1);
  while (dir * (t1 - t) > 0.0) {
    // Clamp the final step and remember it: after acceptance t snaps to t1
    // exactly, so no sub-ulp residue of t1 - t can survive the accumulation
    // t += h (which may round to just short of t1 and would otherwise force
    // the next clamped step below h_min).
    bool last = false;
    if (dir * (t + h - t1) >= 0.0) {
      h = t1 - t;
      last = true;
    }
    ytmp = y + h * a21 * k1;
    f(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, ytmp, k6);
    y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + h, y5, k7);  // FSAL
    err = y5 - (y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 +
                         e7 * k7));
    double enorm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc =
          opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      enorm = std::max(enorm, std::abs(err[i]) / sc);
    }
    // A non-finite estimate (NaN/inf from the right-hand side) must reject
    // and shrink; std::max would otherwise let NaN poison the controller and
    // loop forever.
    if (!std::isfinite(enorm)) enorm = 1e10;
    if (enorm <= 1.0) {
      t = last ? t1 : t + h;
      y.swap(y5);
      k1.swap(k7);
      if (observe) observe(t, y);
      if (++res.steps > opt.max_steps)
        throw solver_error("integrate_ode: step budget exhausted");
    } else {
      ++res.rejected;
    }
    const double fac =
        std::clamp(0.9 * std::pow(std::max(enorm, 1e-10), -0.2), 0.2, 5.0);
    h *= fac;
    if (std::abs(h) < opt.h_min)
      throw solver_error("integrate_ode: step size underflow");
  }
  res.y = std::move(y);
  return res;
}

}  // namespace capdirac
