#include "qdotlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qdotlab/errors.hpp"

namespace qd {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(std::uint8_t(s[a]))) ++a;
  while (b > a && std::isspace(std::uint8_t(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
  bool in_quote = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_quote = !in_quote;
    if (line[i] == '#' && !in_quote) return line.substr(0, i);
  }
  return line;
}

double parse_number(const std::string& s, const std::string& key) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || trim(end).size())
    throw ConfigError("bad numeric value for '" + key + "': " + s);
  return v;
}

} // namespace

Config Config::parse_string(const std::string& text) {
  Config cfg;
  cfg.source_ = text;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("malformed table header at line " +
                          std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("empty key or value at line " + std::to_string(lineno));
    if (!section.empty()) key = section + "." + key;

    Value v;
    if (val.front() == '[') {
      if (val.back() != ']')
        throw ConfigError("malformed array at line " + std::to_string(lineno));
      std::string body = val.substr(1, val.size() - 2);
      std::vector<std::string> parts;
      std::string cur;
      bool in_quote = false;
      for (char ch : body) {
        if (ch == '"') in_quote = !in_quote;
        if (ch == ',' && !in_quote) {
          parts.push_back(cur);
          cur.clear();
        } else {
          cur += ch;
        }
      }
      if (!trim(cur).empty() || !parts.empty()) parts.push_back(cur);
      bool all_text = true;
      for (auto& p : parts)
        if (trim(p).empty() || trim(p).front() != '"') all_text = false;
      if (all_text && !parts.empty()) {
        v.kind = Value::Kind::text_array;
        for (auto& p : parts) {
          std::string t = trim(p);
          v.sarr.push_back(t.substr(1, t.size() - 2));
        }
      } else {
        v.kind = Value::Kind::array;
        for (auto& p : parts) {
          const std::string t = trim(p);
          if (t.empty()) continue;
          v.arr.push_back(parse_number(t, key));
        }
      }
    } else if (val.front() == '"') {
      if (val.size() < 2 || val.back() != '"')
        throw ConfigError("malformed string at line " + std::to_string(lineno));
      v.kind = Value::Kind::text;
      v.str = val.substr(1, val.size() - 2);
    } else if (val == "true" || val == "false") {
      v.kind = Value::Kind::boolean;
      v.b = val == "true";
    } else {
      v.kind = Value::Kind::number;
      v.num = parse_number(val, key);
    }
    cfg.kv_[key] = v;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

double Config::number(const std::string& key, double fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  if (it->second.kind != Value::Kind::number)
    throw ConfigError("'" + key + "' is not a number");
  return it->second.num;
}

double Config::require_number(const std::string& key) const {
  if (!has(key)) throw ConfigError("missing required key '" + key + "'");
  return number(key, 0.0);
}

std::string Config::text(const std::string& key, const std::string& fb) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fb;
  if (it->second.kind != Value::Kind::text)
    throw ConfigError("'" + key + "' is not a string");
  return it->second.str;
}

bool Config::flag(const std::string& key, bool fb) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fb;
  if (it->second.kind != Value::Kind::boolean)
    throw ConfigError("'" + key + "' is not a boolean");
  return it->second.b;
}

std::vector<double> Config::numbers(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return {};
  if (it->second.kind == Value::Kind::number) return {it->second.num};
  if (it->second.kind != Value::Kind::array)
    throw ConfigError("'" + key + "' is not a numeric array");
  return it->second.arr;
}

std::vector<std::string> Config::texts(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return {};
  if (it->second.kind == Value::Kind::text) return {it->second.str};
  if (it->second.kind != Value::Kind::text_array)
    throw ConfigError("'" + key + "' is not a string array");
  return it->second.sarr;
}

DeviceSpec device_from_config(const Config& cfg) {
  DeviceSpec d;
  auto dv = [&](const char* k, double fb) {
    return cfg.number(std::string("device.") + k, fb);
  };
  d.l_pg = dv("l_pg", d.l_pg);
  d.l_bg = dv("l_bg", d.l_bg);
  d.l_gap = dv("l_gap", d.l_gap);
  d.l_sp = dv("l_sp", d.l_sp);
  d.t_ox = dv("t_ox", d.t_ox);
  d.t_si = dv("t_si", d.t_si);
  d.v_pg = dv("v_pg", d.v_pg);
  d.v_bg = dv("v_bg", d.v_bg);
  d.v_d = dv("v_d", d.v_d);
  d.v_s = dv("v_s", d.v_s);
  d.temperature_k = dv("temperature_k", d.temperature_k);
  d.workfunction_offset_ev = dv("workfunction_offset", d.workfunction_offset_ev);
  d.n_sd_cm3 = dv("n_sd", d.n_sd_cm3);
  d.l_sd = dv("l_sd", d.l_sd);

  auto tv = [&](const char* k, double fb) {
    const std::string plain = std::string("trap.") + k;
    const std::string nested = std::string("device.trap.") + k;
    if (cfg.has(plain)) return cfg.number(plain, fb);
    return cfg.number(nested, fb);
  };
  d.trap.n_peak_cm2 = tv("n_peak", d.trap.n_peak_cm2);
  d.trap.sigma_nm = tv("sigma", d.trap.sigma_nm);
  d.trap.x0_nm = tv("x0", d.trap.x0_nm);
  const std::string state = cfg.text("trap.state", "acceptor_occupied");
  if (state == "neutral")
    d.trap.charge_state = TrapChargeState::neutral;
  else if (state == "acceptor_occupied")
    d.trap.charge_state = TrapChargeState::acceptor_occupied;
  else
    throw ConfigError("trap.state must be neutral or acceptor_occupied");
  return d;
}

SolverOptions solver_from_config(const Config& cfg) {
  SolverOptions o;
  o.mixing_alpha = cfg.number("solver.alpha", o.mixing_alpha);
  o.tol_sc = cfg.number("solver.tol_sc", o.tol_sc);
  o.max_iterations = int(cfg.number("solver.max_iterations", o.max_iterations));
  o.tol_poisson = cfg.number("solver.tol_poisson", o.tol_poisson);
  o.n_states = int(cfg.number("solver.n_states", o.n_states));
  o.mass_transport = cfg.number("solver.mass", o.mass_transport);
  o.mass_dos = cfg.number("solver.mass_dos", o.mass_dos);
  o.g_v = cfg.number("solver.g_v", o.g_v);
  o.interface_charge_scale =
      cfg.number("solver.interface_charge_scale", o.interface_charge_scale);
  o.split_fermi = cfg.flag("solver.split_fermi", o.split_fermi);
  o.spacing.fine = cfg.number("solver.spacing_fine", o.spacing.fine);
  o.spacing.lateral = cfg.number("solver.spacing_lateral", o.spacing.lateral);
  o.spacing.coarse = cfg.number("solver.spacing_coarse", o.spacing.coarse);
  return o;
}

SetParameters coulomb_from_config(const Config& cfg, const DeviceSpec& dev) {
  SetParameters p{};
  const double width_nm = cfg.number("coulomb.width_nm", 40.0);
  const double cg_default = gate_capacitance_from_device(dev) * width_nm * 1e-9;
  p.c_g = cfg.number("coulomb.c_g", cg_default);
  p.c_s = cfg.number("coulomb.c_s", 0.5 * p.c_g);
  p.c_d = cfg.number("coulomb.c_d", 0.5 * p.c_g);
  p.r_s = cfg.number("coulomb.r_s", 1e6);
  p.r_d = cfg.number("coulomb.r_d", 1e6);
  p.temperature_k = cfg.number("coulomb.temperature_k", dev.temperature_k);
  p.v_ds = cfg.number("coulomb.v_ds", 0.1 * p.charging_energy_ev());
  return p;
}

CoulombGrid coulomb_grid_from_config(const Config& cfg) {
  CoulombGrid g;
  g.vg_min = cfg.number("coulomb.vg_min", g.vg_min);
  g.vg_max = cfg.number("coulomb.vg_max", g.vg_max);
  g.points = int(cfg.number("coulomb.vg_points", g.points));
  if (g.points < 2 || !(g.vg_max > g.vg_min))
    throw ConfigError("bad coulomb gate-voltage grid");
  return g;
}

SweepVariable sweep_variable_from_name(const std::string& name) {
  if (name == "sigma") return SweepVariable::sigma;
  if (name == "l_pg") return SweepVariable::l_pg;
  if (name == "l_bg") return SweepVariable::l_bg;
  if (name == "l_sp") return SweepVariable::l_sp;
  if (name == "l_gap") return SweepVariable::l_gap;
  if (name == "t_ox") return SweepVariable::t_ox;
  if (name == "t_si") return SweepVariable::t_si;
  if (name == "v_d") return SweepVariable::v_d;
  if (name == "temperature_k" || name == "t") return SweepVariable::temperature;
  throw ConfigError("unknown sweep variable: " + name);
}

std::string sweep_variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::sigma: return "sigma";
    case SweepVariable::l_pg: return "l_pg";
    case SweepVariable::l_bg: return "l_bg";
    case SweepVariable::l_sp: return "l_sp";
    case SweepVariable::l_gap: return "l_gap";
    case SweepVariable::t_ox: return "t_ox";
    case SweepVariable::t_si: return "t_si";
    case SweepVariable::v_d: return "v_d";
    case SweepVariable::temperature: return "temperature_k";
  }
  return "?";
}

DeviceSpec apply_sweep_value(const DeviceSpec& base, SweepVariable var,
                             double value) {
  DeviceSpec d = base;
  switch (var) {
    case SweepVariable::sigma: d.trap.sigma_nm = value; break;
    case SweepVariable::l_pg: d.l_pg = value; break;
    case SweepVariable::l_bg: d.l_bg = value; break;
    case SweepVariable::l_sp: d.l_sp = value; break;
    case SweepVariable::l_gap: d.l_gap = value; break;
    case SweepVariable::t_ox: d.t_ox = value; break;
    case SweepVariable::t_si: d.t_si = value; break;
    case SweepVariable::v_d: d.v_d = value; break;
    case SweepVariable::temperature: d.temperature_k = value; break;
  }
  return d;
}

void SweepConfig::validate() const {
  if (values.empty()) throw ConfigError("sweep.values must not be empty");
  for (double v : values) {
    try {
      apply_sweep_value(base, variable, v).validate();
    } catch (const InvalidGeometry& e) {
      throw ConfigError("sweep value " + std::to_string(v) +
                        " yields an invalid device: " + e.what());
    }
  }
  const std::vector<std::string> known = {"band_profile", "spectrum", "coupling",
                                          "leakage",      "history",  "cb"};
  for (const auto& o : outputs)
    if (std::find(known.begin(), known.end(), o) == known.end())
      throw ConfigError("unknown sweep output: " + o);
}

SweepConfig sweep_from_config(const Config& cfg) {
  SweepConfig sc;
  sc.base = device_from_config(cfg);
  sc.solver = solver_from_config(cfg);
  sc.variable = sweep_variable_from_name(cfg.text("sweep.variable", "sigma"));
  sc.values = cfg.numbers("sweep.values");
  sc.outputs = cfg.texts("sweep.outputs");
  if (sc.outputs.empty())
    sc.outputs = {"band_profile", "spectrum", "coupling", "leakage", "history"};
  sc.output_dir = cfg.text("output.dir", sc.output_dir);
  sc.workers = int(cfg.number("sweep.workers", 0));
  sc.validate();
  return sc;
}

} // namespace qd
