// Copyright 2026 The cavocp Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     https://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Flat key = value configuration with [section] headers. '#' and ';' start
// comments. Sections may repeat ([vehicle]); keys inside a section may not.
//
//   [instance]   t0 tm p0 pm v0
//   [limits]     u_min u_max v_min v_max   (accept inf / -inf)
//   [oracle]     grid
//   [output]     samples dir name
//   [geometry]   L S                        (scenario files)
//   [safety]     standstill headway samples (scenario files)
//   [vehicle]    id approach movement t0 v0 tm

#ifndef CAVOCP_CONFIG_HPP_
#define CAVOCP_CONFIG_HPP_

#include <charconv>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cavocp/core.hpp"
#include "cavocp/scenario.hpp"

namespace cavocp {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg
                                    : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ConfigEntry {
  std::string value;
  int line = 0;
};

struct ConfigSection {
  std::string name;
  int line = 0;
  std::map<std::string, ConfigEntry> entries;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

inline std::vector<ConfigSection> parse_config(std::string_view text) {
  std::vector<ConfigSection> sections;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++lineno;
    const auto hash = raw.find_first_of("#;");
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = detail::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError(lineno, "malformed section header");
      }
      sections.push_back({std::string(detail::trim(line.substr(1, line.size() - 2))),
                          lineno,
                          {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(lineno, "expected key = value");
    }
    if (sections.empty()) {
      throw ConfigError(lineno, "key outside of any section");
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(lineno, "empty key");
    auto& sec = sections.back();
    if (!sec.entries.emplace(key, ConfigEntry{value, lineno}).second) {
      throw ConfigError(lineno, "duplicate key '" + key + "'");
    }
  }
  return sections;
}

// Locale-independent; accepts inf / -inf.
inline double parse_double(const ConfigEntry& e, const std::string& key) {
  const std::string& s = e.value;
  double out = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ConfigError(e.line, "invalid number for '" + key + "': '" + s + "'");
  }
  return out;
}

inline long parse_int(const ConfigEntry& e, const std::string& key) {
  long out = 0;
  const auto [ptr, ec] =
      std::from_chars(e.value.data(), e.value.data() + e.value.size(), out);
  if (ec != std::errc() || ptr != e.value.data() + e.value.size() ||
      e.value.empty()) {
    throw ConfigError(e.line, "invalid integer for '" + key + "': '" + e.value + "'");
  }
  return out;
}

namespace detail {

class SectionReader {
 public:
  SectionReader(const ConfigSection& sec, std::set<std::string> allowed)
      : sec_(sec) {
    for (const auto& [k, e] : sec.entries) {
      if (!allowed.count(k)) {
        throw ConfigError(e.line, "unknown key '" + k + "' in [" + sec.name + "]");
      }
    }
  }

  std::optional<double> number(const std::string& key) const {
    const auto it = sec_.entries.find(key);
    if (it == sec_.entries.end()) return std::nullopt;
    return parse_double(it->second, key);
  }

  double required(const std::string& key) const {
    const auto v = number(key);
    if (!v) {
      throw ConfigError(sec_.line, "missing key '" + key + "' in [" + sec_.name + "]");
    }
    return *v;
  }

  std::optional<long> integer(const std::string& key) const {
    const auto it = sec_.entries.find(key);
    if (it == sec_.entries.end()) return std::nullopt;
    return parse_int(it->second, key);
  }

  std::optional<ConfigEntry> raw(const std::string& key) const {
    const auto it = sec_.entries.find(key);
    if (it == sec_.entries.end()) return std::nullopt;
    return it->second;
  }

  int line() const { return sec_.line; }

 private:
  const ConfigSection& sec_;
};

inline std::size_t positive_count(const SectionReader& r, const std::string& key,
                                  std::size_t fallback, std::size_t minimum) {
  const auto v = r.integer(key);
  if (!v) return fallback;
  if (*v < static_cast<long>(minimum)) {
    throw ConfigError(r.raw(key)->line,
                      "'" + key + "' must be >= " + std::to_string(minimum));
  }
  return static_cast<std::size_t>(*v);
}

}  // namespace detail

// Limits used when a config omits them.
inline Limits default_limits() { return {-6.0, 1.4, 0.0, 21.0}; }

struct OutputOptions {
  std::size_t samples = 1000;
  std::string dir = ".";
  std::string name = "trajectory";
};

struct InstanceConfig {
  BoundaryConditions bc;
  Limits limits = default_limits();
  std::size_t grid = 4000;
  OutputOptions output;
};

struct ScenarioConfig {
  Geometry geometry;
  SafetyParams safety;
  Limits limits = default_limits();
  OutputOptions output;
  std::vector<VehicleSpec> vehicles;
};

namespace detail {

inline void read_limits(const ConfigSection& sec, Limits& lim) {
  const SectionReader r(sec, {"u_min", "u_max", "v_min", "v_max"});
  if (auto v = r.number("u_min")) lim.u_min = *v;
  if (auto v = r.number("u_max")) lim.u_max = *v;
  if (auto v = r.number("v_min")) lim.v_min = *v;
  if (auto v = r.number("v_max")) lim.v_max = *v;
  try {
    lim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(sec.line, e.what());
  }
}

inline void read_output(const ConfigSection& sec, OutputOptions& out) {
  const SectionReader r(sec, {"samples", "dir", "name"});
  out.samples = positive_count(r, "samples", out.samples, 2);
  if (auto v = r.raw("dir")) out.dir = v->value;
  if (auto v = r.raw("name")) out.name = v->value;
}

inline Approach parse_approach(const ConfigEntry& e) {
  if (e.value == "N") return Approach::North;
  if (e.value == "S") return Approach::South;
  if (e.value == "E") return Approach::East;
  if (e.value == "W") return Approach::West;
  throw ConfigError(e.line, "approach must be one of N, S, E, W");
}

inline Movement parse_movement(const ConfigEntry& e) {
  if (e.value == "straight") return Movement::Straight;
  if (e.value == "left") return Movement::Left;
  if (e.value == "right") return Movement::Right;
  throw ConfigError(e.line, "movement must be one of straight, left, right");
}

}  // namespace detail

inline InstanceConfig load_instance_config(std::string_view text) {
  InstanceConfig cfg;
  bool have_instance = false;
  std::set<std::string> seen;
  int instance_line = 0;
  for (const auto& sec : parse_config(text)) {
    if (!seen.insert(sec.name).second) {
      throw ConfigError(sec.line, "duplicate section [" + sec.name + "]");
    }
    if (sec.name == "instance") {
      const detail::SectionReader r(sec, {"t0", "tm", "p0", "pm", "v0"});
      cfg.bc.t0 = r.number("t0").value_or(0.0);
      cfg.bc.p0 = r.number("p0").value_or(0.0);
      cfg.bc.tm = r.required("tm");
      cfg.bc.pm = r.required("pm");
      cfg.bc.v0 = r.required("v0");
      have_instance = true;
      instance_line = sec.line;
    } else if (sec.name == "limits") {
      detail::read_limits(sec, cfg.limits);
    } else if (sec.name == "oracle") {
      const detail::SectionReader r(sec, {"grid"});
      cfg.grid = detail::positive_count(r, "grid", cfg.grid, 100);
    } else if (sec.name == "output") {
      detail::read_output(sec, cfg.output);
    } else {
      throw ConfigError(sec.line, "unknown section [" + sec.name + "]");
    }
  }
  if (!have_instance) throw ConfigError(0, "missing [instance] section");
  try {
    cfg.bc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(instance_line, e.what());
  }
  return cfg;
}

inline ScenarioConfig load_scenario_config(std::string_view text) {
  ScenarioConfig cfg;
  cfg.output.name = "vehicle";
  bool have_geometry = false;
  std::set<std::string> seen;
  for (const auto& sec : parse_config(text)) {
    if (sec.name != "vehicle" && !seen.insert(sec.name).second) {
      throw ConfigError(sec.line, "duplicate section [" + sec.name + "]");
    }
    if (sec.name == "geometry") {
      const detail::SectionReader r(sec, {"L", "S"});
      cfg.geometry.L = r.required("L");
      cfg.geometry.S = r.required("S");
      try {
        cfg.geometry.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(sec.line, e.what());
      }
      have_geometry = true;
    } else if (sec.name == "safety") {
      const detail::SectionReader r(sec, {"standstill", "headway", "samples"});
      if (auto v = r.number("standstill")) cfg.safety.standstill = *v;
      if (auto v = r.number("headway")) cfg.safety.headway = *v;
      cfg.safety.samples = detail::positive_count(r, "samples", cfg.safety.samples, 2);
      if (!(cfg.safety.standstill >= 0.0) || !(cfg.safety.headway >= 0.0)) {
        throw ConfigError(sec.line, "standstill and headway must be >= 0");
      }
    } else if (sec.name == "limits") {
      detail::read_limits(sec, cfg.limits);
    } else if (sec.name == "output") {
      detail::read_output(sec, cfg.output);
    } else if (sec.name == "vehicle") {
      const detail::SectionReader r(
          sec, {"id", "approach", "movement", "t0", "v0", "tm"});
      VehicleSpec v;
      const auto id = r.integer("id");
      if (!id || *id <= 0) {
        throw ConfigError(sec.line, "vehicle needs a positive integer id");
      }
      v.id = static_cast<int>(*id);
      const auto approach = r.raw("approach");
      if (!approach) throw ConfigError(sec.line, "vehicle needs an approach");
      v.approach = detail::parse_approach(*approach);
      if (auto m = r.raw("movement")) v.movement = detail::parse_movement(*m);
      v.t0 = r.number("t0").value_or(0.0);
      v.v0 = r.required("v0");
      v.tm = r.required("tm");
      if (!(v.tm > v.t0)) throw ConfigError(sec.line, "vehicle requires tm > t0");
      if (!(v.v0 >= 0.0)) throw ConfigError(sec.line, "vehicle requires v0 >= 0");
      for (const auto& other : cfg.vehicles) {
        if (other.id == v.id) {
          throw ConfigError(sec.line, "duplicate vehicle id " + std::to_string(v.id));
        }
      }
      cfg.vehicles.push_back(v);
    } else {
      throw ConfigError(sec.line, "unknown section [" + sec.name + "]");
    }
  }
  if (!have_geometry) throw ConfigError(0, "missing [geometry] section");
  if (cfg.vehicles.empty()) throw ConfigError(0, "no [vehicle] sections");
  return cfg;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cavocp

#endif  // CAVOCP_CONFIG_HPP_
