#pragma once

#include <Eigen/Dense>
#include <functional>

namespace capdirac {

// Adaptive Dormand-Prince 5(4) integrator.  The right-hand side writes into
// its third argument.  `observe`, when set, is called after every accepted
// step with (t, y).
struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h0 = 1e-3;
  double h_min = 1e-14;
  long max_steps = 2'000'000;
};

using OdeRhs =
    std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy)>;
using OdeObserver = std::function<void(double t, const Eigen::VectorXd& y)>;

struct OdeResult {
  Eigen::VectorXd y;
  long steps = 0;
  long rejected = 0;
};

OdeResult integrate_ode(const OdeRhs& f, Eigen::VectorXd y0, double t0,
                        double t1, const OdeOptions& opt = {},
                        const OdeObserver& observe = nullptr);

}  // namespace capdirac
