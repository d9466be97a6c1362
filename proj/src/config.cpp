#include "vmfem/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace vmfem {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct BadValue {
  std::string what;
};

double to_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw BadValue{"expected a number, got '" + s + "'"};
  return v;
}

int to_int(const std::string& s) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw BadValue{"expected an integer, got '" + s + "'"};
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw BadValue{"expected true or false, got '" + s + "'"};
}

std::vector<double> to_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_double(trim(item)));
  if (out.empty()) throw BadValue{"expected a comma separated list"};
  return out;
}

CaseKind to_case(const std::string& s) {
  if (s == "mms") return CaseKind::Mms;
  if (s == "ap") return CaseKind::Ap;
  if (s == "custom") return CaseKind::Custom;
  throw BadValue{"unknown case '" + s + "'"};
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"run.case", [](RunConfig& c, const std::string& v) { c.kind = to_case(v); }},
      {"run.k", [](RunConfig& c, const std::string& v) { c.k = to_int(v); }},
      {"run.dt", [](RunConfig& c, const std::string& v) { c.dt = to_double(v); }},
      {"run.t_final", [](RunConfig& c, const std::string& v) { c.t_final = to_double(v); }},
      {"run.bdf_order", [](RunConfig& c, const std::string& v) { c.bdf_order = to_int(v); }},
      {"run.output", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},

      {"mesh.nx", [](RunConfig& c, const std::string& v) { c.nx = to_int(v); }},
      {"mesh.ny", [](RunConfig& c, const std::string& v) { c.ny = to_int(v); }},
      {"mesh.x0", [](RunConfig& c, const std::string& v) { c.domain.x0 = to_double(v); }},
      {"mesh.x1", [](RunConfig& c, const std::string& v) { c.domain.x1 = to_double(v); }},
      {"mesh.y0", [](RunConfig& c, const std::string& v) { c.domain.y0 = to_double(v); }},
      {"mesh.y1", [](RunConfig& c, const std::string& v) { c.domain.y1 = to_double(v); }},
      {"mesh.file", [](RunConfig& c, const std::string& v) { c.mesh_file = v; }},

      {"flux.zeta", [](RunConfig& c, const std::string& v) { c.flux.zeta = to_double(v); }},
      {"flux.delta", [](RunConfig& c, const std::string& v) { c.flux.delta = to_double(v); }},
      {"flux.eta",
       [](RunConfig& c, const std::string& v) {
         c.eta_auto = v == "auto";
         if (!c.eta_auto) c.flux.eta = to_double(v);
       }},
      {"flux.epsilon",
       [](RunConfig& c, const std::string& v) {
         c.epsilon_auto = v == "auto";
         if (!c.epsilon_auto) c.flux.epsilon = to_double(v);
       }},
      {"flux.c_mod", [](RunConfig& c, const std::string& v) { c.flux.c_mod = to_double(v); }},

      {"fluid.cv", [](RunConfig& c, const std::string& v) { c.fluid.cv = to_double(v); }},
      {"fluid.gas_constant", [](RunConfig& c, const std::string& v) { c.fluid.gas_constant = to_double(v); }},
      {"fluid.gamma", [](RunConfig& c, const std::string& v) { c.fluid.gamma = to_double(v); }},
      {"fluid.prandtl", [](RunConfig& c, const std::string& v) { c.fluid.prandtl = to_double(v); }},
      {"fluid.c_ref", [](RunConfig& c, const std::string& v) { c.fluid.c_ref = to_double(v); }},
      {"fluid.s_ref", [](RunConfig& c, const std::string& v) { c.fluid.s_ref = to_double(v); }},
      {"fluid.viscosity",
       [](RunConfig& c, const std::string& v) {
         try {
           c.fluid.model = viscosity_model_from_string(v);
         } catch (const InvalidArgument& e) {
           throw BadValue{e.what()};
         }
       }},
      {"fluid.mu", [](RunConfig& c, const std::string& v) { c.fluid.mu = to_double(v); }},
      {"fluid.nu", [](RunConfig& c, const std::string& v) { c.fluid.nu = to_double(v); }},
      {"fluid.kappa",
       [](RunConfig& c, const std::string& v) {
         if (v == "auto")
           c.fluid.kappa.reset();
         else
           c.fluid.kappa = to_double(v);
       }},

      {"newton.rtol", [](RunConfig& c, const std::string& v) { c.newton.rtol = to_double(v); }},
      {"newton.atol", [](RunConfig& c, const std::string& v) { c.newton.atol = to_double(v); }},
      {"newton.max_iter", [](RunConfig& c, const std::string& v) { c.newton.max_iter = to_int(v); }},
      {"newton.divergence_factor",
       [](RunConfig& c, const std::string& v) { c.newton.divergence_factor = to_double(v); }},
      {"newton.stol", [](RunConfig& c, const std::string& v) { c.newton.stol = to_double(v); }},
      {"newton.reuse_jacobian", [](RunConfig& c, const std::string& v) { c.newton.reuse_jacobian = to_bool(v); }},
      {"newton.reuse_ratio", [](RunConfig& c, const std::string& v) { c.newton.reuse_ratio = to_double(v); }},

      {"mms.levels", [](RunConfig& c, const std::string& v) { c.levels = to_int(v); }},
      {"mms.exact_history", [](RunConfig& c, const std::string& v) { c.exact_history = to_bool(v); }},

      {"ap.mach", [](RunConfig& c, const std::string& v) { c.mach = to_list(v); }},
      {"ap.rho_ref", [](RunConfig& c, const std::string& v) { c.rho_ref = to_double(v); }},

      {"custom.rho0", [](RunConfig& c, const std::string& v) { c.rho0 = to_double(v); }},
      {"custom.T0", [](RunConfig& c, const std::string& v) { c.T0 = to_double(v); }},
      {"custom.u0", [](RunConfig& c, const std::string& v) { c.u0 = to_double(v); }},
      {"custom.v0", [](RunConfig& c, const std::string& v) { c.v0 = to_double(v); }},
      {"custom.walls", [](RunConfig& c, const std::string& v) { c.walls = to_bool(v); }},
      {"custom.snapshot_every", [](RunConfig& c, const std::string& v) { c.snapshot_every = to_int(v); }},
  };
  return table;
}

bool known_section(const std::string& s) {
  return s == "run" || s == "mesh" || s == "flux" || s == "fluid" || s == "newton" || s == "mms" || s == "ap" ||
         s == "custom";
}

struct Line {
  int number;
  std::string section, key, value;
};

std::vector<Line> tokenize(const std::string& text, std::vector<std::pair<int, std::string>>& sections) {
  std::vector<Line> out;
  std::stringstream in(text);
  std::string raw, section;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const auto hash = raw.find_first_of("#;");
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError("malformed section header", n);
      section = trim(s.substr(1, s.size() - 2));
      if (!known_section(section)) throw ParseError("unknown section [" + section + "]", n);
      sections.emplace_back(n, section);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", n);
    if (section.empty()) throw ParseError("key outside of a section", n);
    const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", n);
    if (value.empty()) throw ParseError("missing value for '" + key + "'", n);
    out.push_back({n, section, key, value});
  }
  return out;
}

} // namespace

std::string to_string(CaseKind c) {
  switch (c) {
  case CaseKind::Mms:
    return "mms";
  case CaseKind::Ap:
    return "ap";
  case CaseKind::Custom:
    return "custom";
  }
  return "?";
}

RunConfig default_config(CaseKind kind) {
  RunConfig c;
  c.kind = kind;
  switch (kind) {
  case CaseKind::Mms: {
    const MmsParameters p;
    c.nx = c.ny = 4;
    c.domain = p.domain;
    c.k = 1;
    c.dt = p.dt;
    c.t_final = p.t_final;
    c.fluid.cv = p.cv;
    c.fluid.gas_constant = p.gas_constant;
    c.fluid.gamma = p.gamma;
    c.fluid.model = ViscosityModel::ConstantNu;
    c.fluid.nu = p.nu;
    c.fluid.kappa = p.kappa;
    c.newton = MmsRunOptions{}.newton;
    break;
  }
  case CaseKind::Ap: {
    const ApParameters p;
    c.nx = c.ny = p.n;
    c.domain = Rectangle{0.0, 1.0, 0.0, 1.0};
    c.k = p.k;
    c.dt = p.dt;
    c.t_final = p.t_final;
    c.fluid.cv = p.cv;
    c.fluid.gas_constant = p.gas_constant;
    c.fluid.gamma = p.gamma;
    c.fluid.prandtl = p.prandtl;
    c.fluid.model = ViscosityModel::ConstantMu;
    c.fluid.mu = p.mu;
    c.mach = p.mach;
    c.rho_ref = p.rho_ref;
    c.newton = p.newton;
    break;
  }
  case CaseKind::Custom:
    c.nx = c.ny = 8;
    c.domain = Rectangle{0.0, 1.0, 0.0, 1.0};
    c.k = 1;
    c.dt = 1e-3;
    c.t_final = 1e-2;
    break;
  }
  c.flux = FluxParams::defaults(c.k);
  return c;
}

void RunConfig::validate() const {
  if (k < 1 || k > 3) throw InvalidArgument("k must be 1, 2 or 3");
  if (nx < 1 || ny < 1) throw InvalidArgument("mesh sizes must be positive");
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) throw InvalidArgument("empty domain");
  if (!mesh_file.empty() && !std::filesystem::exists(mesh_file))
    throw InvalidArgument("mesh file '" + mesh_file + "' does not exist");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (!(t_final >= dt)) throw InvalidArgument("t_final must be at least dt");
  if (bdf_order < 1 || bdf_order > 5) throw InvalidArgument("BDF order must be in 1..5");
  if (output_dir.empty()) throw InvalidArgument("empty output directory");
  flux.validate();
  fluid.validate();
  newton.validate();
  if (levels < 1) throw InvalidArgument("levels must be positive");
  if (mach.empty()) throw InvalidArgument("empty Mach list");
  for (double m : mach)
    if (!(m > 0.0)) throw InvalidArgument("Mach numbers must be positive");
  if (!(rho_ref > 0.0) || !(rho0 > 0.0) || !(T0 > 0.0)) throw InvalidArgument("densities and temperatures must be positive");
  if (snapshot_every < 0) throw InvalidArgument("snapshot_every must be non-negative");
}

RunConfig parse_config(const std::string& text) {
  std::vector<std::pair<int, std::string>> sections;
  const std::vector<Line> lines = tokenize(text, sections);

  // The case decides the defaults, so find it first.
  std::optional<CaseKind> kind;
  for (const auto& l : lines)
    if (l.section == "run" && l.key == "case") {
      try {
        kind = to_case(l.value);
      } catch (const BadValue& e) {
        throw ParseError(e.what, l.number);
      }
    }
  if (!kind) {
    std::optional<CaseKind> found;
    for (const auto& [n, s] : sections) {
      std::optional<CaseKind> c;
      if (s == "mms") c = CaseKind::Mms;
      if (s == "ap") c = CaseKind::Ap;
      if (s == "custom") c = CaseKind::Custom;
      if (c && found && *c != *found) throw ParseError("several case sections and no case key", n);
      if (c) found = c;
    }
    if (!found) throw ParseError("missing required key 'case' in [run]", sections.empty() ? 1 : sections.front().first);
    kind = found;
  }

  RunConfig cfg = default_config(*kind);
  std::map<std::string, int> seen;
  for (const auto& l : lines) {
    const std::string full = l.section + "." + l.key;
    const auto it = setters().find(full);
    if (it == setters().end()) throw ParseError("unknown key '" + l.key + "' in [" + l.section + "]", l.number);
    if (seen.count(full)) throw ParseError("duplicate key '" + l.key + "'", l.number);
    seen[full] = l.number;
    try {
      it->second(cfg, l.value);
    } catch (const BadValue& e) {
      throw ParseError(e.what, l.number);
    }
  }
  const FluxParams auto_flux = FluxParams::defaults(cfg.k);
  if (cfg.eta_auto) cfg.flux.eta = auto_flux.eta;
  if (cfg.epsilon_auto) cfg.flux.epsilon = auto_flux.epsilon;

  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    // Point at the line that set the offending value when it is obvious.
    int line = 1;
    const std::string msg = e.what();
    for (const auto& [key, n] : seen) {
      const std::string name = key.substr(key.find('.') + 1);
      if (msg.find(name) != std::string::npos) line = n;
    }
    throw ParseError(msg, line);
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void write_config(std::ostream& out, const RunConfig& c) {
  out << "[run]\n"
      << "case = " << to_string(c.kind) << '\n'
      << "k = " << c.k << '\n'
      << "dt = " << fmt(c.dt) << '\n'
      << "t_final = " << fmt(c.t_final) << '\n'
      << "bdf_order = " << c.bdf_order << '\n'
      << "output = " << c.output_dir << '\n';
  out << "\n[mesh]\n"
      << "nx = " << c.nx << '\n'
      << "ny = " << c.ny << '\n'
      << "x0 = " << fmt(c.domain.x0) << '\n'
      << "x1 = " << fmt(c.domain.x1) << '\n'
      << "y0 = " << fmt(c.domain.y0) << '\n'
      << "y1 = " << fmt(c.domain.y1) << '\n';
  if (!c.mesh_file.empty()) out << "file = " << c.mesh_file << '\n';
  out << "\n[flux]\n"
      << "zeta = " << fmt(c.flux.zeta) << '\n'
      << "delta = " << fmt(c.flux.delta) << '\n'
      << "eta = " << (c.eta_auto ? "auto" : fmt(c.flux.eta)) << '\n'
      << "epsilon = " << (c.epsilon_auto ? "auto" : fmt(c.flux.epsilon)) << '\n'
      << "c_mod = " << fmt(c.flux.c_mod) << '\n';
  out << "\n[fluid]\n"
      << "cv = " << fmt(c.fluid.cv) << '\n'
      << "gas_constant = " << fmt(c.fluid.gas_constant) << '\n'
      << "gamma = " << fmt(c.fluid.gamma) << '\n'
      << "prandtl = " << fmt(c.fluid.prandtl) << '\n'
      << "c_ref = " << fmt(c.fluid.c_ref) << '\n'
      << "s_ref = " << fmt(c.fluid.s_ref) << '\n'
      << "viscosity = " << to_string(c.fluid.model) << '\n'
      << "mu = " << fmt(c.fluid.mu) << '\n'
      << "nu = " << fmt(c.fluid.nu) << '\n'
      << "kappa = " << (c.fluid.kappa ? fmt(*c.fluid.kappa) : std::string("auto")) << '\n';
  out << "\n[newton]\n"
      << "rtol = " << fmt(c.newton.rtol) << '\n'
      << "atol = " << fmt(c.newton.atol) << '\n'
      << "max_iter = " << c.newton.max_iter << '\n'
      << "divergence_factor = " << fmt(c.newton.divergence_factor) << '\n'
      << "stol = " << fmt(c.newton.stol) << '\n'
      << "reuse_jacobian = " << (c.newton.reuse_jacobian ? "true" : "false") << '\n'
      << "reuse_ratio = " << fmt(c.newton.reuse_ratio) << '\n';
  out << "\n[mms]\n"
      << "levels = " << c.levels << '\n'
      << "exact_history = " << (c.exact_history ? "true" : "false") << '\n';
  out << "\n[ap]\nmach = ";
  for (std::size_t i = 0; i < c.mach.size(); ++i) out << (i ? ", " : "") << fmt(c.mach[i]);
  out << "\nrho_ref = " << fmt(c.rho_ref) << '\n';
  out << "\n[custom]\n"
      << "rho0 = " << fmt(c.rho0) << '\n'
      << "T0 = " << fmt(c.T0) << '\n'
      << "u0 = " << fmt(c.u0) << '\n'
      << "v0 = " << fmt(c.v0) << '\n'
      << "walls = " << (c.walls ? "true" : "false") << '\n'
      << "snapshot_every = " << c.snapshot_every << '\n';
}

std::string config_to_string(const RunConfig& cfg) {
  std::ostringstream out;
  write_config(out, cfg);
  return out.str();
}

MmsRunOptions mms_options(const RunConfig& c) {
  if (c.fluid.model != ViscosityModel::ConstantNu || !c.fluid.kappa)
    throw InvalidArgument("the manufactured solution needs viscosity = constant-nu and a fixed kappa");
  MmsRunOptions o;
  o.params.cv = c.fluid.cv;
  o.params.gas_constant = c.fluid.gas_constant;
  o.params.gamma = c.fluid.gamma;
  o.params.nu = c.fluid.nu;
  o.params.kappa = *c.fluid.kappa;
  o.params.domain = c.domain;
  o.params.dt = c.dt;
  o.params.t_final = c.t_final;
  o.k = c.k;
  o.flux = c.flux;
  o.bdf_order = c.bdf_order;
  o.newton = c.newton;
  o.exact_history = c.exact_history;
  return o;
}

ApParameters ap_parameters(const RunConfig& c) {
  if (c.fluid.model != ViscosityModel::ConstantMu) throw InvalidArgument("the AP study uses viscosity = constant-mu");
  if (c.nx != c.ny) throw InvalidArgument("the AP study uses a square n x n mesh");
  ApParameters p;
  p.n = c.nx;
  p.k = c.k;
  p.mach = c.mach;
  p.t_final = c.t_final;
  p.dt = c.dt;
  p.rho_ref = c.rho_ref;
  p.mu = c.fluid.mu;
  p.cv = c.fluid.cv;
  p.gas_constant = c.fluid.gas_constant;
  p.gamma = c.fluid.gamma;
  p.prandtl = c.fluid.prandtl;
  p.flux = c.flux;
  p.bdf_order = c.bdf_order;
  p.newton = c.newton;
  return p;
}

} // namespace vmfem
