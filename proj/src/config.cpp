#include "capdirac/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "capdirac/errors.hpp"

namespace capdirac {

int RunConfig::grid_n(double hbar) const {
  if (grid_per_hbar > 0.0) {
    int n = static_cast<int>(std::ceil(grid_per_hbar / hbar));
    if (n % 2) ++n;
    return std::max(n, 16);
  }
  return geo.N;
}

namespace {
struct Line {
  int no;
  std::string text;
};

[[noreturn]] void die(const std::string& name, int line, const std::string& m) {
  throw config_error(name + ":" + std::to_string(line) + ": " + m);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double num(const std::string& name, int line, const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    die(name, line, "expected a number, got '" + v + "'");
  return d;
}

std::vector<double> num_list(const std::string& name, int line,
                             const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(num(name, line, item));
  }
  if (out.empty()) die(name, line, "expected a comma-separated list");
  return out;
}
}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& name) {
  RunConfig cfg;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool pot_type_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') die(name, line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "physics" && section != "potential" && section != "cap" &&
          section != "distortion" && section != "geometry" &&
          section != "box" && section != "run")
        die(name, line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) die(name, line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (section.empty()) die(name, line_no, "key outside any section");
    auto n = [&] { return num(name, line_no, val); };

    if (section == "physics") {
      if (key == "hbar") cfg.phys.hbar = n();
      else if (key == "m") cfg.phys.m = n();
      else if (key == "c") cfg.phys.c = n();
      else die(name, line_no, "unknown physics key '" + key + "'");
    } else if (section == "potential") {
      if (key == "type") {
        pot_type_seen = true;
        if (val == "none") cfg.pot.kind = PotentialKind::none;
        else if (val == "well") cfg.pot.kind = PotentialKind::scalar_well;
        else if (val == "double_barrier")
          cfg.pot.kind = PotentialKind::double_barrier;
        else if (val == "em") cfg.pot.kind = PotentialKind::em;
        else die(name, line_no, "unknown potential type '" + val + "'");
      } else if (key == "depth") cfg.pot.well_depth = n();
      else if (key == "width") {
        cfg.pot.well_width = cfg.pot.bar_width = n();
      } else if (key == "height") cfg.pot.bar_height = n();
      else if (key == "sep") cfg.pot.bar_sep = n();
      else if (key == "phi0") cfg.pot.phi0 = n();
      else if (key == "phi_width") cfg.pot.phi_width = n();
      else if (key == "phi_center") cfg.pot.phi_center = n();
      else if (key == "a0") cfg.pot.a0 = n();
      else if (key == "a_width") cfg.pot.a_width = n();
      else if (key == "a_center") cfg.pot.a_center = n();
      else die(name, line_no, "unknown potential key '" + key + "'");
    } else if (section == "cap") {
      if (key == "r1") cfg.cap.r1 = n();
      else if (key == "r2") cfg.cap.r2 = n();
      else if (key == "delta0") cfg.cap.delta0 = n();
      else if (key == "im_scale") cfg.cap.im_scale = n();
      else die(name, line_no, "unknown cap key '" + key + "'");
    } else if (section == "distortion") {
      if (key == "r0") cfg.r0 = n();
      else if (key == "eta") cfg.eta = n();
      else if (key == "tau") cfg.tau = n();
      else if (key == "tau_check") cfg.tau_check = n();
      else if (key == "eps") cfg.eps = n();
      else die(name, line_no, "unknown distortion key '" + key + "'");
    } else if (section == "geometry") {
      if (key == "L") cfg.geo.L = n();
      else if (key == "N") cfg.geo.N = static_cast<int>(n());
      else die(name, line_no, "unknown geometry key '" + key + "'");
    } else if (section == "box") {
      if (key == "l") cfg.box.l = n();
      else if (key == "r") cfg.box.r = n();
      else if (key == "b") cfg.box.b = n();
      else if (key == "t") cfg.box.t = n();
      else die(name, line_no, "unknown box key '" + key + "'");
    } else if (section == "run") {
      if (key == "ladder") cfg.ladder = num_list(name, line_no, val);
      else if (key == "grid_per_hbar") cfg.grid_per_hbar = n();
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(n());
      else if (key == "threads") cfg.threads = static_cast<int>(n());
      else if (key == "out") cfg.out_dir = val;
      else if (key == "c_gate") cfg.c_gate = n();
      else if (key == "k_order") cfg.k_order = static_cast<int>(n());
      else die(name, line_no, "unknown run key '" + key + "'");
    }
  }
  if (!pot_type_seen && cfg.pot.kind == PotentialKind::none) {
    // fine: free model by default
  }
  cfg.phys.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace capdirac
