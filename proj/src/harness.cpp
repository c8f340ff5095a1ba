#include "capdirac/harness.hpp"

#include <algorithm>
#include <cmath>

#include "capdirac/errors.hpp"
#include "capdirac/lapack_wrap.hpp"
#include "capdirac/smooth.hpp"

namespace capdirac {

int Scenario::grid_n(double hbar) const {
  if (grid_per_hbar > 0.0) {
    int n = static_cast<int>(std::ceil(grid_per_hbar / hbar));
    if (n % 2) ++n;
    return std::max(n, 16);
  }
  if (n_fixed > 0) return n_fixed;
  throw config_error("scenario: neither grid_per_hbar nor N configured");
}

Scenario scenario_from_config(const RunConfig& cfg) {
  Scenario sc;
  sc.phys = cfg.phys;
  sc.pot = cfg.pot;
  sc.cap = cfg.cap;
  sc.r0 = cfg.r0;
  sc.eta = cfg.eta;
  sc.L = cfg.geo.L;
  sc.grid_per_hbar = cfg.grid_per_hbar;
  sc.n_fixed = cfg.geo.N;
  sc.box = cfg.box;
  sc.tau_ref = cfg.tau;
  sc.tau_check = cfg.tau_check;
  sc.c_gate = cfg.c_gate;
  sc.k_order = cfg.k_order;
  return sc;
}

VecX cutoff_state(const VecX& f, const Grid1D& g, double a, double b) {
  const int N = g.N;
  if (f.size() != 2 * N) throw config_error("cutoff_state: size mismatch");
  VecX out(2 * N);
  for (int j = 0; j < N; ++j) {
    const double chi = plateau_cutoff(g.x(j), a, b);
    out[j] = chi * f[j];
    out[N + j] = chi * f[N + j];
  }
  const double nrm = out.norm();
  if (nrm == 0.0) throw config_error("cutoff_state: cutoff annihilated state");
  return out / nrm;
}

double cap_support_mass(const VecX& f, const Grid1D& g, const Cap& cap) {
  const int N = g.N;
  if (f.size() != 2 * N) throw config_error("cap_support_mass: size mismatch");
  double num = 0.0, den = 0.0;
  for (int j = 0; j < N; ++j) {
    const double a2 = std::norm(f[j]) + std::norm(f[N + j]);
    den += a2;
    if (std::abs(g.x(j)) >= cap.r1) num += a2;
  }
  if (den == 0.0) throw config_error("cap_support_mass: zero state");
  return std::sqrt(num / den);
}

namespace {
DistortionParam make_theta(double tau) {
  DistortionParam th;
  th.theta = cplx(0.0, tau);
  th.validate();
  return th;
}
}  // namespace

std::vector<Resonance> find_resonances(const Scenario& sc, double hbar,
                                       const SpectralBox& window,
                                       bool validate_window) {
  PhysParams p = sc.phys;
  p.hbar = hbar;
  const Grid1D g = sc.grid(hbar);
  const ScalingFn scal = make_scaling_g(sc.r0, sc.eta);
  const DistortionParam th_ref = make_theta(sc.tau_ref);
  const DistortionParam th_check = make_theta(sc.tau_check);
  if (validate_window) check_box_admissible(window, th_ref, p);
  Geometry geo{g.L, g.N};
  check_standard_placement(sc.pot, Cap{}, scal, geo);

  const MatX A_ref =
      assemble_distorted(g, p, sc.pot, scal, th_ref, false, {}, Exec::parallel);
  const MatX A_chk = assemble_distorted(g, p, sc.pot, scal, th_check, false, {},
                                        Exec::parallel);
  const std::vector<BoxEig> e_ref = eigs_in_box(A_ref, window);
  const std::vector<BoxEig> e_chk = eigs_in_box(A_chk, window);
  return identify_resonances(e_ref, e_chk, window, th_ref, p);
}

CapSpectrum cap_spectrum(const Scenario& sc, double hbar,
                         const SpectralBox& window, double dirichlet_R) {
  PhysParams p = sc.phys;
  p.hbar = hbar;
  const Grid1D g = sc.grid(hbar);
  const MatX J = assemble_cap(g, p, sc.pot, sc.cap);
  CapSpectrum out;
  out.grid = g;
  if (dirichlet_R > 0.0) {
    RestrictedOperator r = dirichlet_restrict(J, g, dirichlet_R);
    const BoxEigvecs be = eigs_in_box_with_vectors(r.mat, window);
    out.values = be.values;
    out.vectors = be.vectors;
    out.nodes = std::move(r.nodes);
  } else {
    const BoxEigvecs be = eigs_in_box_with_vectors(J, window);
    out.values = be.values;
    out.vectors = be.vectors;
  }
  return out;
}

namespace {
// Narrowest (smallest |Im|) resonance; ties by distance to window center.
const Resonance* pick_tracked(const std::vector<Resonance>& res) {
  const Resonance* best = nullptr;
  for (const Resonance& r : res)
    if (!best || std::abs(r.z.imag()) < std::abs(best->z.imag())) best = &r;
  return best;
}

int nearest_index(const std::vector<cplx>& vals, cplx z) {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < vals.size(); ++i) {
    const double d = std::abs(vals[i] - z);
    if (d < bd) {
      bd = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

double log_inv(double hbar) { return std::log(1.0 / hbar); }

// Residual of the damped eigenpair against the undamped operator, divided by
// sqrt(-Im w0): finite and rung-stable by the absorbed-flux identity.
double residual_constant(const Scenario& sc, double hbar, const Grid1D& g,
                         cplx w0, const VecX& f) {
  PhysParams p = sc.phys;
  p.hbar = hbar;
  const MatX H = assemble_perturbed(g, p, sc.pot);
  const double r = (H * f - w0 * f).norm() / f.norm();
  const double gamma = std::max(-w0.imag(), 1e-300);
  return r / std::sqrt(gamma);
}

enum class Direction { res_to_cap, cap_to_res, res_to_cap_weak };

LadderReport run_ladder(const Scenario& sc, const std::vector<double>& ladder,
                        Direction dir) {
  LadderReport rep;
  for (const double hbar : ladder) {
    RungResult rr;
    rr.hbar = hbar;
    rr.n_grid = sc.grid_n(hbar);
    const Grid1D g = sc.grid(hbar);

    const std::vector<Resonance> res = find_resonances(sc, hbar, sc.box);
    const CapSpectrum caps = cap_spectrum(sc, hbar, sc.box);
    rr.n_res = static_cast<int>(res.size());
    rr.n_cap = static_cast<int>(caps.values.size());
    const Resonance* z = pick_tracked(res);
    if (!z)
      throw solver_error("ladder: no resonance identified in the window");
    if (caps.values.empty())
      throw solver_error("ladder: no damped eigenvalue in the window");
    rr.z0 = z->z;
    rr.drift = z->drift;
    const int iw = nearest_index(caps.values, rr.z0);
    rr.w0 = caps.values[iw];
    rr.dist = std::abs(rr.w0 - rr.z0);
    const VecX f = caps.vectors.col(iw);
    rr.cap_mass = cap_support_mass(f, g, sc.cap);
    rr.resid_const = residual_constant(sc, hbar, g, rr.w0, f);

    const double li = log_inv(hbar);
    if (dir == Direction::res_to_cap || dir == Direction::res_to_cap_weak) {
      const double gamma = std::abs(rr.z0.imag());
      rr.gate = gamma <= std::pow(hbar, 5) / (sc.c_gate * li);
      const double pw = (dir == Direction::res_to_cap) ? -5.0 : -6.0;
      rr.eps_law = std::pow(hbar, pw) * gamma;
      if (rr.gate) {
        SpectralBox w;
        w.l = rr.z0.real() - rr.eps_law * li;
        w.r = rr.z0.real() + rr.eps_law * li;
        w.b = -rr.eps_law;
        w.t = 0.0;
        rr.contained = false;
        for (const cplx& v : caps.values)
          if (w.contains(v)) rr.contained = true;
      }
    } else {
      const double gamma = std::max(-rr.w0.imag(), 0.0);
      const double gate_rhs = std::pow(hbar, 4) / (sc.c_gate * li);
      rr.gate = gamma <= gate_rhs * gate_rhs;
      rr.eps_law = std::pow(hbar, -4) * std::sqrt(gamma);
      if (rr.gate) {
        SpectralBox w;
        w.l = rr.w0.real() - rr.eps_law * li;
        w.r = rr.w0.real() + rr.eps_law * li;
        w.b = -rr.eps_law;
        w.t = 0.0;
        rr.contained = false;
        for (const Resonance& rz : res)
          if (w.contains(rz.z)) rr.contained = true;
      }
    }
    rep.rungs.push_back(rr);
  }
  return rep;
}
}  // namespace

LadderReport run_resonance_to_cap(const Scenario& sc,
                                  const std::vector<double>& ladder) {
  return run_ladder(sc, ladder, Direction::res_to_cap);
}

LadderReport run_cap_to_resonance(const Scenario& sc,
                                  const std::vector<double>& ladder) {
  return run_ladder(sc, ladder, Direction::cap_to_res);
}

IntersectReport run_intersecting(const Scenario& sc_inter,
                                 const Scenario& sc_standard,
                                 const std::vector<double>& ladder) {
  // Preconditions: uniform band separation and no trapping outside r1 at
  // window energies.
  IntersectReport out;
  SymbolModel mdl{sc_inter.phys, sc_inter.pot};
  const double ximax = 3.0 * sc_inter.box.r / sc_inter.phys.c;
  out.hyperbolicity =
      hyperbolicity_margin(mdl, -sc_inter.L, sc_inter.L, -ximax, ximax);
  if (!(out.hyperbolicity > 0.05))
    throw precondition_error("intersecting: band separation margin too small");
  const ScalingFn scal = make_scaling_g(sc_inter.r0, sc_inter.eta);
  out.nt = nontrapping_verdict(mdl, +1, sc_inter.cap.r1, scal.r0,
                               sc_inter.box.l, sc_inter.box.r, scal.r0, 60.0,
                               48, 2024, Exec::parallel);
  if (!out.nt.nontrapping)
    throw precondition_error(
        "intersecting: trapped trajectory found outside the absorber start");
  // Placement sanity for both scenarios.
  {
    const Grid1D g = sc_inter.grid(ladder.front());
    check_intersecting_placement(sc_inter.pot, sc_inter.cap,
                                 make_scaling_g(sc_inter.r0, sc_inter.eta),
                                 Geometry{g.L, g.N});
    const Grid1D gs = sc_standard.grid(ladder.front());
    check_standard_placement(sc_standard.pot, sc_standard.cap,
                             make_scaling_g(sc_standard.r0, sc_standard.eta),
                             Geometry{gs.L, gs.N});
  }
  out.inter = run_ladder(sc_inter, ladder, Direction::res_to_cap_weak);
  out.standard = run_ladder(sc_standard, ladder, Direction::res_to_cap);
  return out;
}

namespace {
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}
}  // namespace

CountReport counting_sweep(const Scenario& sc, const std::vector<double>& ladder,
                           const SpectralBox& window) {
  CountReport rep;
  std::vector<double> lx, ly, ly_ref;
  for (const double hbar : ladder) {
    CountRung cr;
    cr.hbar = hbar;
    cr.n_grid = sc.grid_n(hbar);

    PhysParams p = sc.phys;
    p.hbar = hbar;
    const Grid1D g = sc.grid(hbar);
    const MatX J = assemble_cap(g, p, sc.pot, sc.cap);
    for (const BoxEig& be : eigs_in_box(J, window)) cr.J += be.multiplicity;

    for (const Resonance& r : find_resonances(sc, hbar, window, false))
      cr.n_res += r.multiplicity;

    // refined grid (x1.5)
    Scenario fine = sc;
    if (fine.grid_per_hbar > 0.0)
      fine.grid_per_hbar *= 1.5;
    else
      fine.n_fixed = (fine.n_fixed * 3 / 2 + 1) / 2 * 2;
    const Grid1D gf = fine.grid(hbar);
    const MatX Jf = assemble_cap(gf, p, sc.pot, sc.cap);
    for (const BoxEig& be : eigs_in_box(Jf, window)) cr.J_refined += be.multiplicity;

    rep.rungs.push_back(cr);
    lx.push_back(std::log(1.0 / hbar));
    ly.push_back(std::log(std::max(cr.J, 1)));
    ly_ref.push_back(std::log(std::max(cr.J_refined, 1)));
  }
  rep.exponent = ls_slope(lx, ly);
  rep.exponent_refined = ls_slope(lx, ly_ref);
  return rep;
}

Quasimode dirichlet_quasimode(const Scenario& sc, double hbar, double r_inner,
                              double cut_a, double cut_b, double e_lo,
                              double e_hi) {
  if (!(cut_a < cut_b) || !(cut_b <= r_inner))
    throw config_error("quasimode: need cut_a < cut_b <= r_inner");
  PhysParams p = sc.phys;
  p.hbar = hbar;
  const Grid1D g = sc.grid(hbar);
  const MatX H = assemble_perturbed(g, p, sc.pot);
  const RestrictedOperator r = dirichlet_restrict(H, g, r_inner);
  // The restriction of a Hermitian matrix is Hermitian; use the symmetric
  // solver and pick the eigenpair nearest the window center.
  auto [ev, vec] = eig_hermitian(r.mat);
  int pick = -1;
  double best = std::numeric_limits<double>::infinity();
  const double mid = 0.5 * (e_lo + e_hi);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < e_lo || ev[i] > e_hi) continue;
    if (std::abs(ev[i] - mid) < best) {
      best = std::abs(ev[i] - mid);
      pick = static_cast<int>(i);
    }
  }
  if (pick < 0)
    throw solver_error("quasimode: no Dirichlet level in the energy window");

  Quasimode qm;
  qm.grid = g;
  qm.e = ev[pick];
  const int M = static_cast<int>(r.nodes.size());
  VecX full = VecX::Zero(2 * g.N);
  for (int a = 0; a < M; ++a) {
    full[r.nodes[a]] = vec(a, pick);
    full[g.N + r.nodes[a]] = vec(M + a, pick);
  }
  qm.u = cutoff_state(full, g, cut_a, cut_b);
  qm.rho = (H * qm.u - qm.e * qm.u).norm();
  return qm;
}

QuasimodeMatch quasimode_to_resonance(const Scenario& sc, double hbar,
                                      const Quasimode& qm, double C0, double Bc,
                                      double Mc, int NN) {
  QuasimodeMatch out;
  const double li = log_inv(hbar);
  out.b = std::max({C0 * Bc * Mc * qm.rho * std::pow(hbar, -4.0 - NN),
                    std::exp(-Bc / hbar), std::pow(hbar, sc.k_order)});
  out.window.l = qm.e - out.b * li;
  out.window.r = qm.e + out.b * li;
  out.window.b = -out.b;
  out.window.t = 1e-10;  // numerical zero: admits bound states computed at
                         // rounding level above the axis
  out.found = find_resonances(sc, hbar, out.window, /*validate_window=*/false);
  return out;
}

}  // namespace capdirac
