// Timing comparison of the serial reference kernels against their OpenMP
// counterparts.  The parallel paths write to disjoint slots, so outputs are
// bitwise identical; this tool reports wall times and verifies that equality
// on the fly.

#include <chrono>
#include <cstdio>

#include "capdirac/dynamics.hpp"
#include "capdirac/harness.hpp"
#include "capdirac/quantize.hpp"
#include "capdirac/smooth.hpp"

using namespace capdirac;
using clk = std::chrono::steady_clock;

namespace {
double seconds(clk::time_point a, clk::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <class F>
double timed(F&& f) {
  const auto t0 = clk::now();
  f();
  return seconds(t0, clk::now());
}
}  // namespace

int main() {
  PhysParams phys;
  phys.hbar = 0.05;
  const Potential1D pot = Potential1D::em_bumps(0.35, 1.2, 0.0, 0.2, 1.0, 0.4);
  const Grid1D grid{Geometry{8.0, 384}};
  SymbolModel mdl{phys, pot};

  std::printf("%-28s %10s %10s %9s  %s\n", "kernel", "serial[s]", "openmp[s]",
              "speedup", "bitwise");

  // Weyl quantization.
  const MatrixSymbol a0 = [](double x, double xi) {
    return Mat2((bump(x / 2.5) * bump(xi / 3.0)) * Mat2::Identity());
  };
  MatX w_ser, w_par;
  const double t_ws = timed([&] { w_ser = weyl_quantize(grid, phys, a0); });
  const double t_wp =
      timed([&] { w_par = weyl_quantize(grid, phys, a0, Exec::parallel); });
  std::printf("%-28s %10.3f %10.3f %8.2fx  %s\n", "weyl_quantize", t_ws, t_wp,
              t_ws / t_wp, (w_ser == w_par) ? "yes" : "NO");

  // Distorted assembly.
  const ScalingFn scal = make_scaling_g(3.0, 11.0);
  DistortionParam th;
  th.theta = cplx(0.0, 0.2);
  MatX d_ser, d_par;
  const double t_ds = timed(
      [&] { d_ser = assemble_distorted(grid, phys, pot, scal, th); });
  const double t_dp = timed([&] {
    d_par = assemble_distorted(grid, phys, pot, scal, th, false, {},
                               Exec::parallel);
  });
  std::printf("%-28s %10.3f %10.3f %8.2fx  %s\n", "assemble_distorted", t_ds,
              t_dp, t_ds / t_dp, (d_ser == d_par) ? "yes" : "NO");

  // Symbol evolution batch.
  std::vector<std::array<double, 2>> pts;
  for (int i = 0; i < 48; ++i)
    for (int j = 0; j < 24; ++j)
      pts.push_back({-2.0 + 4.0 * i / 47.0, -2.5 + 5.0 * j / 23.0});
  SymbolSupport supp;
  supp.x_rad = 2.5;
  std::vector<Mat2> e_ser, e_par;
  const double t_es =
      timed([&] { e_ser = evolve_symbol(mdl, a0, supp, 0.8, pts); });
  const double t_ep = timed([&] {
    e_par = evolve_symbol(mdl, a0, supp, 0.8, pts, {}, Exec::parallel);
  });
  bool same = e_ser.size() == e_par.size();
  for (size_t i = 0; same && i < e_ser.size(); ++i)
    same = (e_ser[i] == e_par[i]);
  std::printf("%-28s %10.3f %10.3f %8.2fx  %s\n", "evolve_symbol", t_es, t_ep,
              t_es / t_ep, same ? "yes" : "NO");

  // Escape-time sampler.
  NontrappingReport n_ser, n_par;
  const double t_ns = timed([&] {
    n_ser = nontrapping_verdict(mdl, +1, 0.5, 3.0, 1.2, 1.6, 4.0, 30.0, 48, 7);
  });
  const double t_np = timed([&] {
    n_par = nontrapping_verdict(mdl, +1, 0.5, 3.0, 1.2, 1.6, 4.0, 30.0, 48, 7,
                                Exec::parallel);
  });
  same = n_ser.nontrapping == n_par.nontrapping &&
         n_ser.trapped == n_par.trapped;
  std::printf("%-28s %10.3f %10.3f %8.2fx  %s\n", "nontrapping_verdict", t_ns,
              t_np, t_ns / t_np, same ? "yes" : "NO");

  std::printf("\nthreads available: %d\n", default_threads());
  return 0;
}
