#pragma once

#include <string>
#include <vector>

#include "capdirac/model.hpp"

namespace capdirac {

// Full run configuration, parsed from an INI file.  Sections and keys:
//
//   [physics]    hbar m c
//   [potential]  type = none|well|double_barrier|em
//                depth width            (well)
//                height width sep       (double_barrier)
//                phi0 phi_width phi_center a0 a_width a_center   (em)
//   [cap]        r1 r2 delta0 im_scale
//   [distortion] r0 eta tau tau_check eps
//   [geometry]   L N
//   [box]        l r b t
//   [run]        ladder (comma list) grid_per_hbar seed threads out
//                c_gate k_order
//
// Unknown sections/keys and malformed numbers are config_errors carrying
// "<file>:<line>:".
struct RunConfig {
  PhysParams phys;
  Potential1D pot;
  Cap cap;
  double r0 = 0.0, eta = 0.0;  // scaling request (0 = no scaling configured)
  double tau = 0.2, tau_check = 0.25, eps = 1.0;
  Geometry geo;
  SpectralBox box;
  std::vector<double> ladder;
  double grid_per_hbar = 0.0;  // when set, N(hbar) = even ceil(grid_per_hbar/hbar)
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = library default
  std::string out_dir = ".";
  double c_gate = 1.0;
  int k_order = 8;

  ScalingFn scaling() const { return make_scaling_g(r0, eta); }
  int grid_n(double hbar) const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text,
                            const std::string& name = "<string>");

}  // namespace capdirac
