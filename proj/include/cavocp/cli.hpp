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

// Command implementations behind the cav-ocp executable. Each command takes
// a config path plus overrides, writes human/machine-readable text to the
// given streams and returns the process exit code.

#ifndef CAVOCP_CLI_HPP_
#define CAVOCP_CLI_HPP_

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cavocp/activation.hpp"
#include "cavocp/config.hpp"
#include "cavocp/constrained.hpp"
#include "cavocp/core.hpp"
#include "cavocp/oracle.hpp"
#include "cavocp/scenario.hpp"

namespace cavocp {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitInfeasible = 2,
  kExitTolerance = 3,
  kExitSafety = 4,
};

struct CommandOptions {
  std::optional<std::string> out_dir;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> grid;
};

// 17 significant digits, '.' decimal separator regardless of locale.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& os, const Trajectory& traj,
                      std::size_t samples) {
  os << "t,p,v,u,arc_kind\n";
  for (double t : uniform_times(traj.bc().t0, traj.bc().tm, samples)) {
    const PolyArc& arc = traj.arc_at(t);
    const State s = arc.state(t);
    os << format_double(t) << ',' << format_double(s.p) << ','
       << format_double(s.v) << ',' << format_double(s.u) << ','
       << to_string(arc.kind) << '\n';
  }
}

struct CsvRow {
  double t = 0.0;
  double p = 0.0;
  double v = 0.0;
  double u = 0.0;
  std::string arc_kind;
};

inline std::vector<CsvRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "t,p,v,u,arc_kind") {
    throw std::runtime_error("unexpected CSV header");
  }
  std::vector<CsvRow> rows;
  auto num = [](std::string_view s) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw std::runtime_error("bad CSV number '" + std::string(s) + "'");
    }
    return x;
  };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      f.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    f.push_back(rest);
    if (f.size() != 5) throw std::runtime_error("CSV row needs 5 fields");
    rows.push_back({num(f[0]), num(f[1]), num(f[2]), num(f[3]), std::string(f[4])});
  }
  return rows;
}

namespace detail {

inline std::string opt_time(const std::optional<double>& t) {
  return t ? format_double(*t) : "none";
}

inline std::string arc_sequence(const Trajectory& traj) {
  std::string s;
  for (const auto& arc : traj.arcs()) {
    if (!s.empty()) s += ',';
    s += to_string(arc.kind);
  }
  return s;
}

inline std::string active_list(const ActivationPlan& p) {
  std::string s;
  auto add = [&](bool on, std::string_view name) {
    if (!on) return;
    if (!s.empty()) s += ',';
    s += name;
  };
  add(p.state_max_active, "v_max");
  add(p.state_min_active, "v_min");
  add(p.control_max_active, "u_max");
  add(p.control_min_active, "u_min");
  return s.empty() ? "none" : s;
}

inline std::filesystem::path output_dir(const OutputOptions& out,
                                        const CommandOptions& opts) {
  std::filesystem::path dir = opts.out_dir.value_or(out.dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << contents;
}

template <typename Load>
auto load_or_report(const std::string& path, std::ostream& err, Load load)
    -> std::optional<decltype(load(std::string_view{}))> {
  try {
    return load(read_file(path));
  } catch (const ConfigError& e) {
    err << "config error: " << path << ": " << e.what() << '\n';
  }
  return std::nullopt;
}

}  // namespace detail

inline std::string summary_text(const Solution& sol) {
  const Trajectory& traj = sol.trajectory;
  const auto report = verify(traj, kSolveVerifyTol);
  std::ostringstream os;
  std::optional<double> tau_c;
  std::optional<double> tau_s;
  for (const auto& arc : traj.arcs()) {
    if (is_accel_pinned(arc.kind)) tau_c = arc.t_end;
    if (is_speed_pinned(arc.kind)) tau_s = arc.t_start;
  }
  os << "direction=" << to_string(sol.plan.plan.direction) << '\n'
     << "case=" << to_string(sol.plan.plan.plan_case) << '\n'
     << "arcs=" << detail::arc_sequence(traj) << '\n'
     << "tau_c=" << detail::opt_time(tau_c) << '\n'
     << "tau_s=" << detail::opt_time(tau_s) << '\n'
     << "cost=" << format_double(cost(traj)) << '\n'
     << "v_final=" << format_double(eval(traj, traj.bc().tm).v) << '\n'
     << "residual_p0=" << format_double(report.residual_p0) << '\n'
     << "residual_v0=" << format_double(report.residual_v0) << '\n'
     << "residual_pm=" << format_double(report.residual_pm) << '\n'
     << "max_jump_p=" << format_double(report.max_jump_p) << '\n'
     << "max_jump_v=" << format_double(report.max_jump_v) << '\n'
     << "max_jump_u=" << format_double(report.max_jump_u) << '\n';
  for (const auto& d : sol.diagnostics) os << "note=" << d << '\n';
  return os.str();
}

inline int run_solve(const std::string& path, const CommandOptions& opts,
                     std::ostream& out, std::ostream& err) {
  auto cfg = detail::load_or_report(path, err, load_instance_config);
  if (!cfg) return kExitConfig;
  if (opts.samples) cfg->output.samples = *opts.samples;
  try {
    const Solution sol = solve(cfg->bc, cfg->limits);
    const std::string summary = summary_text(sol);
    const auto dir = detail::output_dir(cfg->output, opts);
    std::ostringstream csv;
    write_csv(csv, sol.trajectory, cfg->output.samples);
    detail::write_file(dir / (cfg->output.name + ".csv"), csv.str());
    detail::write_file(dir / (cfg->output.name + ".summary.txt"), summary);
    out << summary;
    return kExitOk;
  } catch (const InfeasibleError& e) {
    out << "status=infeasible\n";
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const DegenerateError& e) {
    out << "status=infeasible\n";
    err << "degenerate: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitTolerance;
  }
}

// Activation report. No trajectory is built; switch times are the
// closed-form estimates the planner itself uses.
inline void analyze_report(const BoundaryConditions& bc, const Limits& limits,
                           std::ostream& out) {
  const CasePlan cp = plan(bc, limits);
  const Direction dir = cp.plan.direction;
  out << "direction=" << to_string(dir) << '\n';
  const auto side = admissible_side(dir);
  if (!side) {
    out << "speed_bound: excluded\n"
        << "accel_bound: excluded\n"
        << "accel_after_speed: skipped\n"
        << "speed_after_accel: skipped\n";
  } else {
    const bool s_on = state_active(bc, limits);
    const bool c_on = control_active(bc, limits);
    out << "speed_bound: side=" << (*side == Side::Max ? "max" : "min")
        << " threshold=" << format_double(state_activation_threshold(bc, limits, *side))
        << " horizon=" << format_double(bc.horizon())
        << " active=" << (s_on ? "true" : "false") << '\n';
    const auto cth = control_activation_threshold(bc, limits, *side);
    out << "accel_bound: side=" << (*side == Side::Max ? "max" : "min")
        << " u0=" << format_double(solve_unconstrained(bc).b)
        << " bound=" << format_double(accel_bound(limits, *side));
    if (cth) out << " threshold=" << format_double(*cth);
    out << " active=" << (c_on ? "true" : "false") << '\n';

    if (s_on && !c_on && cp.tau_s_estimate) {
      const double tau_s = *cp.tau_s_estimate;
      out << "accel_after_speed: tau_s=" << format_double(tau_s);
      if (*side == Side::Max) {
        const auto rhs = secondary_control_threshold(bc, limits, tau_s);
        if (rhs) out << " threshold=" << format_double(bc.t0 + *rhs);
      }
      out << " active="
          << (secondary_control_after_state(bc, limits, tau_s) ? "true" : "false")
          << '\n';
    } else {
      out << "accel_after_speed: skipped\n";
    }
    if (c_on && !s_on && cp.tau_c_estimate) {
      const double tau_c = *cp.tau_c_estimate;
      const auto th = secondary_state_threshold(bc, limits, *side, tau_c);
      out << "speed_after_accel: tau_c=" << format_double(tau_c)
          << " threshold=" << (th ? format_double(*th) : "none") << " active="
          << (secondary_state_after_control(bc, limits, tau_c) ? "true" : "false")
          << '\n';
    } else {
      out << "speed_after_accel: skipped\n";
    }
  }
  for (const auto& r : cp.rationale) out << "# " << r << '\n';
  out << "direction=" << to_string(dir)
      << " case=" << to_string(cp.plan.plan_case) << '\n';
}

inline int run_analyze(const std::string& path, const CommandOptions&,
                       std::ostream& out, std::ostream& err) {
  const auto cfg = detail::load_or_report(path, err, load_instance_config);
  if (!cfg) return kExitConfig;
  analyze_report(cfg->bc, cfg->limits, out);
  return kExitOk;
}

inline int run_compare(const std::string& path, const CommandOptions& opts,
                       std::ostream& out, std::ostream& err) {
  auto cfg = detail::load_or_report(path, err, load_instance_config);
  if (!cfg) return kExitConfig;
  const std::size_t grid = opts.grid.value_or(cfg->grid);
  if (grid < kMinGrid) {
    err << "config error: grid must be >= " << kMinGrid << '\n';
    return kExitConfig;
  }

  std::optional<Solution> analytic;
  std::string analytic_error;
  try {
    analytic = solve(cfg->bc, cfg->limits);
  } catch (const InfeasibleError& e) {
    analytic_error = e.what();
  } catch (const DegenerateError& e) {
    analytic_error = e.what();
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitTolerance;
  }
  std::optional<GridSolution> oracle;
  std::string oracle_error;
  try {
    oracle = collocation_solve(cfg->bc, cfg->limits, grid);
  } catch (const InfeasibleError& e) {
    oracle_error = e.what();
  } catch (const std::runtime_error& e) {
    err << "oracle error: " << e.what() << '\n';
    return kExitTolerance;
  }

  out << "grid=" << grid << '\n';
  if (!analytic || !oracle) {
    out << "analytic=" << (analytic ? "feasible" : "infeasible") << '\n'
        << "oracle=" << (oracle ? "feasible" : "infeasible") << '\n';
    if (!analytic) err << "analytic: " << analytic_error << '\n';
    if (!oracle) err << "oracle: " << oracle_error << '\n';
    return analytic || oracle ? kExitTolerance : kExitInfeasible;
  }
  const ComparisonReport r = compare(analytic->trajectory, *oracle);
  out << "analytic_cost=" << format_double(r.analytic_cost) << '\n'
      << "oracle_cost=" << format_double(r.oracle_cost) << '\n'
      << "cost_gap=" << format_double(r.cost_gap) << '\n'
      << "max_dv=" << format_double(r.max_dv) << '\n'
      << "max_dp=" << format_double(r.max_dp) << '\n'
      << "analytic_active=" << detail::active_list(r.analytic_active) << '\n'
      << "oracle_active=" << detail::active_list(r.oracle_active) << '\n'
      << "active_set_agree=" << (r.active_set_agree ? "true" : "false") << '\n'
      << "oracle_iterations=" << oracle->iterations << '\n'
      << "oracle_kkt_residual=" << format_double(oracle->kkt_residual) << '\n';
  for (const auto& f : r.flags) out << "exceeded=" << f << '\n';
  out << "within_tolerance=" << (r.within_tolerance() ? "true" : "false") << '\n';
  return r.within_tolerance() ? kExitOk : kExitTolerance;
}

inline int run_scenario(const std::string& path, const CommandOptions& opts,
                        std::ostream& out, std::ostream& err) {
  auto cfg = detail::load_or_report(path, err, load_scenario_config);
  if (!cfg) return kExitConfig;
  if (opts.samples) cfg->output.samples = *opts.samples;

  const auto plans = plan_all(cfg->vehicles, cfg->geometry, cfg->limits);
  const auto dir = detail::output_dir(cfg->output, opts);
  bool planning_failed = false;
  for (const auto& p : plans) {
    if (!p.ok()) {
      planning_failed = true;
      out << "vehicle id=" << p.id << " status=failed error=" << p.error << '\n';
      continue;
    }
    std::ostringstream csv;
    write_csv(csv, *p.trajectory, cfg->output.samples);
    const std::string file = cfg->output.name + "_" + std::to_string(p.id) + ".csv";
    detail::write_file(dir / file, csv.str());
    out << "vehicle id=" << p.id << " case=" << to_string(p.plan->plan.plan_case)
        << " cost=" << format_double(cost(*p.trajectory)) << " v_tm="
        << format_double(eval(*p.trajectory, p.trajectory->bc().tm).v)
        << " csv=" << file << '\n';
  }

  SafetyReport report;
  try {
    report = verify_scenario(cfg->vehicles, plans, cfg->geometry, cfg->safety);
  } catch (const DegenerateError& e) {
    err << "degenerate: " << e.what() << '\n';
    return kExitInfeasible;
  }
  out << "occupancy_model=constant_speed\n";
  for (const auto& v : report.rear_end_violations) {
    out << "rear_end follower=" << v.follower << " leader=" << v.leader
        << " from=" << format_double(v.interval.lo)
        << " to=" << format_double(v.interval.hi)
        << " min_gap=" << format_double(v.min_gap)
        << " min_margin=" << format_double(v.min_margin) << '\n';
  }
  for (const auto& c : report.lateral_conflicts) {
    out << "lateral first=" << c.first << " second=" << c.second
        << " from=" << format_double(c.overlap.lo)
        << " to=" << format_double(c.overlap.hi) << '\n';
  }
  out << "safe=" << (report.safe() ? "true" : "false") << '\n';
  if (!report.safe()) return kExitSafety;
  return planning_failed ? kExitInfeasible : kExitOk;
}

}  // namespace cavocp

#endif  // CAVOCP_CLI_HPP_
