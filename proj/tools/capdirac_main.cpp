// capdirac: resonances of one-dimensional semiclassical Dirac operators via
// exterior complex scaling, and their absorbing-potential (damped-operator)
// counterparts, plus the classical transport toolkit used to cross-check them.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "capdirac/config.hpp"
#include "capdirac/dynamics.hpp"
#include "capdirac/errors.hpp"
#include "capdirac/harness.hpp"
#include "capdirac/lapack_wrap.hpp"
#include "capdirac/records.hpp"
#include "capdirac/smooth.hpp"

using namespace capdirac;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string ladder_override;
  int threads = 0;
  std::uint64_t seed = 0;
  bool no_timestamp = false;
};

RunConfig load(const CommonOpts& o) {
  RunConfig cfg = parse_config_file(o.config_path);
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (!o.ladder_override.empty()) {
    cfg.ladder.clear();
    std::stringstream ss(o.ladder_override);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) cfg.ladder.push_back(std::stod(item));
    if (cfg.ladder.empty())
      throw config_error("--hbar-ladder: empty list");
  }
  if (cfg.ladder.empty()) cfg.ladder.push_back(cfg.phys.hbar);
  if (o.threads > 0) cfg.threads = o.threads;
  if (o.seed != 0) cfg.seed = o.seed;
  if (cfg.threads > 0) set_default_threads(cfg.threads);
  std::filesystem::create_directories(cfg.out_dir);
  return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "INI configuration file")
      ->required();
  cmd->add_option("--out", o.out_dir, "output directory (overrides [run] out)");
  cmd->add_option("--hbar-ladder", o.ladder_override,
                  "comma-separated hbar values overriding [run] ladder");
  cmd->add_option("--threads", o.threads, "worker threads for parallel kernels");
  cmd->add_option("--seed", o.seed, "sampler seed override");
  cmd->add_flag("--no-timestamp", o.no_timestamp,
                "omit the timestamp line from reports");
}

int cmd_spectrum(const CommonOpts& o) {
  const RunConfig cfg = load(o);
  Table t;
  t.cols = {"hbar", "index", "eigenvalue"};
  for (const double hbar : cfg.ladder) {
    PhysParams p = cfg.phys;
    p.hbar = hbar;
    const Grid1D g{Geometry{cfg.geo.L, cfg.grid_n(hbar)}};
    const VecXr ev = eigvals_hermitian(assemble_perturbed(g, p, cfg.pot));
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      t.rows.push_back({hbar, double(i), ev[i]});
  }
  write_table_csv(out_path(cfg, "spectrum.csv"), t, !o.no_timestamp);
  std::cout << "wrote " << out_path(cfg, "spectrum.csv") << "\n";
  return 0;
}

int cmd_resonances(const CommonOpts& o) {
  const RunConfig cfg = load(o);
  const Scenario sc = scenario_from_config(cfg);
  std::vector<ResonanceRecord> recs;
  for (const double hbar : cfg.ladder)
    for (const Resonance& r : find_resonances(sc, hbar, sc.box))
      recs.push_back({hbar, sc.tau_ref, r.z.real(), r.z.imag(), r.multiplicity,
                      r.drift});
  write_records_csv(out_path(cfg, "resonances.csv"), recs, !o.no_timestamp);
  std::cout << "wrote " << out_path(cfg, "resonances.csv") << " ("
            << recs.size() << " rows)\n";
  return 0;
}

int cmd_cap(const CommonOpts& o) {
  const RunConfig cfg = load(o);
  const Scenario sc = scenario_from_config(cfg);
  std::vector<ResonanceRecord> recs;
  for (const double hbar : cfg.ladder)
    for (const cplx& w : cap_spectrum(sc, hbar, sc.box).values)
      recs.push_back({hbar, 0.0, w.real(), w.imag(), 1, 0.0});
  write_records_csv(out_path(cfg, "cap.csv"), recs, !o.no_timestamp);
  std::cout << "wrote " << out_path(cfg, "cap.csv") << " (" << recs.size()
            << " rows)\n";
  return 0;
}

int cmd_compare(const CommonOpts& o) {
  const RunConfig cfg = load(o);
  const Scenario sc = scenario_from_config(cfg);
  const LadderReport fwd = run_resonance_to_cap(sc, cfg.ladder);
  const LadderReport rev = run_cap_to_resonance(sc, cfg.ladder);
  Table t;
  t.cols = {"hbar",      "re_z0",   "im_z0",     "re_w0",      "im_w0",
            "dist",      "fwd_gate", "fwd_eps",  "fwd_contained",
            "rev_gate",  "rev_eps", "rev_contained", "resid_const",
            "cap_mass",  "drift"};
  for (size_t i = 0; i < fwd.rungs.size(); ++i) {
    const RungResult& a = fwd.rungs[i];
    const RungResult& b = rev.rungs[i];
    t.rows.push_back({a.hbar, a.z0.real(), a.z0.imag(), a.w0.real(),
                      a.w0.imag(), a.dist, double(a.gate), a.eps_law,
                      double(a.contained), double(b.gate), b.eps_law,
                      double(b.contained), b.resid_const, b.cap_mass,
                      a.drift});
  }
  write_table_csv(out_path(cfg, "compare.csv"), t, !o.no_timestamp);
  std::cout << "wrote " << out_path(cfg, "compare.csv") << "\n";
  return 0;
}

int cmd_flow(const CommonOpts& o, double x0, double xi0, int band, double T) {
  const RunConfig cfg = load(o);
  SymbolModel mdl{cfg.phys, cfg.pot};
  const FlowPoint fp = integrate_flow(mdl, band, x0, xi0, T);
  Table t;
  t.cols = {"x0", "xi0", "band", "T", "x_end", "xi_end", "energy_drift",
            "nontrapping", "n_seeds", "n_trapped"};
  // Escape sampler over the configured window energies outside the absorber.
  const double e_lo = cfg.box.l, e_hi = cfg.box.r;
  const double r_lo = (cfg.cap.delta0 > 0) ? cfg.cap.r1 : 0.0;
  const double r_hi = (cfg.r0 > 0) ? cfg.r0 : cfg.geo.L * 0.5;
  const NontrappingReport nt =
      nontrapping_verdict(mdl, band, r_lo, r_hi, e_lo, e_hi, r_hi, 50.0, 64,
                          cfg.seed, Exec::parallel);
  t.rows.push_back({x0, xi0, double(band), T, fp.x, fp.xi, fp.energy_drift,
                    double(nt.nontrapping), double(nt.n_seeds),
                    double(nt.trapped.size())});
  write_table_csv(out_path(cfg, "flow.csv"), t, !o.no_timestamp);
  std::cout << "wrote " << out_path(cfg, "flow.csv") << " (nontrapping="
            << (nt.nontrapping ? "yes" : "no") << ")\n";
  return 0;
}

int cmd_egorov(const CommonOpts& o, double T) {
  const RunConfig cfg = load(o);
  SymbolModel mdl{cfg.phys, cfg.pot};
  // Canonical observable: scalar phase-space bump clear of the grid edges.
  const double xr = std::max(1.0, mdl.pot.support_radius() + 0.5);
  const double p_mid = 1.6 * cfg.phys.m * cfg.phys.c, p_w = 1.2 * p_mid;
  const MatrixSymbol a0 = [=](double x, double xi) {
    return Mat2((bump(x / xr) * bump((std::abs(xi) - p_mid) / p_w)) *
                Mat2::Identity());
  };
  SymbolSupport supp;
  supp.x_rad = xr;
  supp.p_lo = std::max(0.0, p_mid - p_w);
  supp.p_hi = p_mid + p_w;
  Table t;
  t.cols = {"hbar", "N", "defect", "b0_norm"};
  for (const double hbar : cfg.ladder) {
    PhysParams p = cfg.phys;
    p.hbar = hbar;
    SymbolModel m2{p, cfg.pot};
    const Grid1D g{Geometry{cfg.geo.L, cfg.grid_n(hbar)}};
    const EgorovReport er =
        egorov_defect(m2, g, a0, supp, T, {}, Exec::parallel);
    t.rows.push_back({hbar, double(g.N), er.defect, er.b0_norm});
  }
  write_table_csv(out_path(cfg, "egorov.csv"), t, !o.no_timestamp);
  std::cout << "wrote " << out_path(cfg, "egorov.csv") << "\n";
  return 0;
}

int cmd_count(const CommonOpts& o) {
  const RunConfig cfg = load(o);
  const Scenario sc = scenario_from_config(cfg);
  const CountReport cr = counting_sweep(sc, cfg.ladder, cfg.box);
  Table t;
  t.cols = {"hbar", "N", "J", "n_res", "J_refined", "exponent",
            "exponent_refined"};
  for (const CountRung& r : cr.rungs)
    t.rows.push_back({r.hbar, double(r.n_grid), double(r.J), double(r.n_res),
                      double(r.J_refined), cr.exponent, cr.exponent_refined});
  write_table_csv(out_path(cfg, "count.csv"), t, !o.no_timestamp);
  std::cout << "wrote " << out_path(cfg, "count.csv")
            << " (exponent=" << cr.exponent << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semiclassical Dirac resonances vs absorbing potentials"};
  app.require_subcommand(1);

  if (const char* env = std::getenv("CAPDIRAC_THREADS"))
    set_default_threads(std::atoi(env));

  CommonOpts o_spec, o_res, o_cap, o_cmp, o_flow, o_ego, o_cnt;
  double x0 = 0.0, xi0 = 1.0, T = 1.0, ego_T = 1.0;
  int band = 1;

  add_common(app.add_subcommand("spectrum", "undamped spectrum per rung"),
             o_spec);
  add_common(app.add_subcommand(
                 "resonances", "scaled-operator resonances in the window"),
             o_res);
  add_common(app.add_subcommand("cap", "damped-operator spectrum in the window"),
             o_cap);
  add_common(app.add_subcommand(
                 "compare", "two-direction resonance/damped correspondence"),
             o_cmp);
  CLI::App* flow = app.add_subcommand("flow", "band trajectory + escape check");
  add_common(flow, o_flow);
  flow->add_option("--x0", x0, "initial position");
  flow->add_option("--xi0", xi0, "initial momentum");
  flow->add_option("--band", band, "band (+1 or -1)");
  flow->add_option("--T", T, "integration time");
  CLI::App* ego = app.add_subcommand(
      "egorov", "transport vs quantum evolution defect per rung");
  add_common(ego, o_ego);
  ego->add_option("--T", ego_T, "evolution time");
  add_common(app.add_subcommand("count", "window eigenvalue counting sweep"),
             o_cnt);

  try {
    app.parse(argc, argv);
    if (app.got_subcommand("spectrum")) return cmd_spectrum(o_spec);
    if (app.got_subcommand("resonances")) return cmd_resonances(o_res);
    if (app.got_subcommand("cap")) return cmd_cap(o_cap);
    if (app.got_subcommand("compare")) return cmd_compare(o_cmp);
    if (app.got_subcommand("flow")) return cmd_flow(o_flow, x0, xi0, band, T);
    if (app.got_subcommand("egorov")) return cmd_egorov(o_ego, ego_T);
    if (app.got_subcommand("count")) return cmd_count(o_cnt);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::config);
  } catch (const precondition_error& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return static_cast<int>(ExitCode::precondition);
  } catch (const solver_error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::solver);
  }
  return 0;
}
