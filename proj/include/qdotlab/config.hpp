#pragma once

#include <map>
#include <string>
#include <vector>

#include "qdotlab/coulomb.hpp"
#include "qdotlab/device.hpp"
#include "qdotlab/scloop.hpp"

namespace qd {

// Minimal key/value config: [section] tables, key = value lines, numbers,
// quoted strings, booleans, flat arrays, # comments. Dotted keys allowed.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  double require_number(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> texts(const std::string& key) const;

  const std::string& source() const { return source_; }

 private:
  struct Value {
    enum class Kind { number, text, boolean, array, text_array } kind;
    double num = 0.0;
    std::string str;
    bool b = false;
    std::vector<double> arr;
    std::vector<std::string> sarr;
  };
  std::map<std::string, Value> kv_;
  std::string source_;
};

DeviceSpec device_from_config(const Config& cfg);
SolverOptions solver_from_config(const Config& cfg);
SetParameters coulomb_from_config(const Config& cfg, const DeviceSpec& device);

struct CoulombGrid {
  double vg_min = 0.0, vg_max = 0.5;
  int points = 2000;
};
CoulombGrid coulomb_grid_from_config(const Config& cfg);

enum class SweepVariable {
  sigma,
  l_pg,
  l_bg,
  l_sp,
  l_gap,
  t_ox,
  t_si,
  v_d,
  temperature,
};
SweepVariable sweep_variable_from_name(const std::string& name);
std::string sweep_variable_name(SweepVariable v);
DeviceSpec apply_sweep_value(const DeviceSpec& base, SweepVariable var,
                             double value);

struct SweepConfig {
  DeviceSpec base;
  SolverOptions solver;
  SweepVariable variable = SweepVariable::sigma;
  std::vector<double> values;
  std::vector<std::string> outputs;  // band_profile, spectrum, coupling,
                                     // leakage, history, cb
  std::string output_dir = "out";
  int workers = 0;  // 0: decide from env/hardware
  void validate() const;
};
SweepConfig sweep_from_config(const Config& cfg);

} // namespace qd
