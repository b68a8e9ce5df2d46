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

#ifndef CAVOCP_CORE_HPP_
#define CAVOCP_CORE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cavocp {

// The problem data admits no trajectory of the requested structure (or none
// at all).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A closed-form expression hit a removable singularity (e.g. division by
// v_bound - v0 when the vehicle already rides the bound).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Boundary data of one vehicle's planning problem. The terminal speed is free.
struct BoundaryConditions {
  double t0 = 0.0;  // entry time [s]
  double tm = 0.0;  // assigned merging time [s]
  double p0 = 0.0;  // entry position [m]
  double pm = 0.0;  // merging-zone position [m]
  double v0 = 0.0;  // entry speed [m/s]

  double horizon() const { return tm - t0; }
  double distance() const { return pm - p0; }
  double average_speed() const { return distance() / horizon(); }

  void validate() const {
    if (!std::isfinite(t0) || !std::isfinite(tm) || !std::isfinite(p0) ||
        !std::isfinite(pm) || !std::isfinite(v0)) {
      throw std::invalid_argument("boundary conditions must be finite");
    }
    if (!(tm > t0)) throw std::invalid_argument("require tm > t0");
    if (!(pm > p0)) throw std::invalid_argument("require pm > p0");
    if (!(v0 >= 0.0)) throw std::invalid_argument("require v0 >= 0");
  }
};

// Box bounds on acceleration and speed. Bounds may be infinite (relaxed),
// except v_min which is floored at zero.
struct Limits {
  double u_min = -kInf;
  double u_max = kInf;
  double v_min = 0.0;
  double v_max = kInf;

  static Limits unbounded() { return {}; }

  void validate() const {
    if (std::isnan(u_min) || std::isnan(u_max) || std::isnan(v_min) ||
        std::isnan(v_max)) {
      throw std::invalid_argument("limits must not be NaN");
    }
    if (!(u_min < 0.0 && 0.0 < u_max)) {
      throw std::invalid_argument("require u_min < 0 < u_max");
    }
    if (!(0.0 <= v_min && v_min < v_max) || !std::isfinite(v_min)) {
      throw std::invalid_argument("require 0 <= v_min < v_max");
    }
  }
};

enum class Side { Max, Min };

enum class ArcKind {
  Unconstrained,
  SpeedPinnedMax,
  SpeedPinnedMin,
  AccelPinnedMax,
  AccelPinnedMin,
};

inline std::string_view to_string(ArcKind kind) {
  switch (kind) {
    case ArcKind::Unconstrained: return "Unconstrained";
    case ArcKind::SpeedPinnedMax: return "SpeedPinnedMax";
    case ArcKind::SpeedPinnedMin: return "SpeedPinnedMin";
    case ArcKind::AccelPinnedMax: return "AccelPinnedMax";
    case ArcKind::AccelPinnedMin: return "AccelPinnedMin";
  }
  return "?";
}

inline bool is_speed_pinned(ArcKind k) {
  return k == ArcKind::SpeedPinnedMax || k == ArcKind::SpeedPinnedMin;
}
inline bool is_accel_pinned(ArcKind k) {
  return k == ArcKind::AccelPinnedMax || k == ArcKind::AccelPinnedMin;
}

inline double speed_bound(const Limits& limits, Side side) {
  return side == Side::Max ? limits.v_max : limits.v_min;
}
inline double accel_bound(const Limits& limits, Side side) {
  return side == Side::Max ? limits.u_max : limits.u_min;
}

struct State {
  double p = 0.0;
  double v = 0.0;
  double u = 0.0;
};

// One polynomial segment of a trajectory:
//   u = a*s + b,  v = a*s^2/2 + b*s + c,  p = a*s^3/6 + b*s^2/2 + c*s + d
// with s = t - origin. Pinned arcs use the degenerate forms (a = 0 and
// b = 0 or b = u_bound).
struct PolyArc {
  ArcKind kind = ArcKind::Unconstrained;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
  double origin = 0.0;

  double u(double t) const {
    const double s = t - origin;
    return a * s + b;
  }
  double v(double t) const {
    const double s = t - origin;
    return (0.5 * a * s + b) * s + c;
  }
  double p(double t) const {
    const double s = t - origin;
    return ((a * s / 6.0 + 0.5 * b) * s + c) * s + d;
  }
  State state(double t) const { return {p(t), v(t), u(t)}; }

  // Exact integral of u^2/2 over [t_start, t_end].
  double energy() const {
    const double len = t_end - t_start;
    const double u1 = a * (t_start - origin) + b;
    return 0.5 * len * (u1 * u1 + u1 * a * len + a * a * len * len / 3.0);
  }
};

// Ordered arcs tiling [bc.t0, bc.tm]. A junction time belongs to the arc that
// starts there.
class Trajectory {
 public:
  Trajectory(std::vector<PolyArc> arcs, BoundaryConditions bc, Limits limits,
             std::vector<double> switch_times = {})
      : arcs_(std::move(arcs)),
        bc_(bc),
        limits_(limits),
        switch_times_(std::move(switch_times)) {
    if (arcs_.empty()) throw std::invalid_argument("trajectory has no arcs");
    if (arcs_.front().t_start != bc_.t0 || arcs_.back().t_end != bc_.tm) {
      throw std::invalid_argument("arcs must span [t0, tm]");
    }
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      if (!(arcs_[i].t_start < arcs_[i].t_end)) {
        throw std::invalid_argument("arc with empty interval");
      }
      if (i > 0 && arcs_[i].t_start != arcs_[i - 1].t_end) {
        throw std::invalid_argument("arcs leave a gap or overlap");
      }
    }
  }

  const std::vector<PolyArc>& arcs() const { return arcs_; }
  const BoundaryConditions& bc() const { return bc_; }
  const Limits& limits() const { return limits_; }
  const std::vector<double>& switch_times() const { return switch_times_; }

  std::size_t arc_index(double t) const {
    if (!(t >= bc_.t0 && t <= bc_.tm)) {
      throw std::domain_error("time outside trajectory horizon");
    }
    auto it = std::upper_bound(
        arcs_.begin(), arcs_.end(), t,
        [](double x, const PolyArc& arc) { return x < arc.t_start; });
    return static_cast<std::size_t>(std::distance(arcs_.begin(), it)) - 1;
  }

  const PolyArc& arc_at(double t) const { return arcs_[arc_index(t)]; }

 private:
  std::vector<PolyArc> arcs_;
  BoundaryConditions bc_;
  Limits limits_;
  std::vector<double> switch_times_;
};

inline State eval(const Trajectory& traj, double t) {
  return traj.arc_at(t).state(t);
}

inline double cost(const Trajectory& traj) {
  double total = 0.0;
  for (const auto& arc : traj.arcs()) total += arc.energy();
  return total;
}

// Uniform grid over [t0, tm] with both endpoints, n >= 2 points.
inline std::vector<double> uniform_times(double t0, double tm, std::size_t n) {
  std::vector<double> ts(n);
  const double dt = (tm - t0) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) ts[k] = t0 + dt * static_cast<double>(k);
  ts.back() = tm;
  return ts;
}

struct VerificationReport {
  double max_jump_p = 0.0;
  double max_jump_v = 0.0;
  double max_jump_u = 0.0;
  double max_speed_violation = 0.0;    // max(v - v_max, v_min - v, 0)
  double max_control_violation = 0.0;  // max(u - u_max, u_min - u, 0)
  double residual_p0 = 0.0;
  double residual_v0 = 0.0;
  double residual_pm = 0.0;
  std::vector<std::string> flags;

  bool ok() const { return flags.empty(); }
};

inline constexpr std::size_t kVerifyGridSize = 10000;

inline VerificationReport verify(const Trajectory& traj, double tol) {
  VerificationReport r;
  const auto& arcs = traj.arcs();
  for (std::size_t i = 1; i < arcs.size(); ++i) {
    const double t = arcs[i].t_start;
    r.max_jump_p = std::max(r.max_jump_p, std::abs(arcs[i].p(t) - arcs[i - 1].p(t)));
    r.max_jump_v = std::max(r.max_jump_v, std::abs(arcs[i].v(t) - arcs[i - 1].v(t)));
    r.max_jump_u = std::max(r.max_jump_u, std::abs(arcs[i].u(t) - arcs[i - 1].u(t)));
  }

  const auto& lim = traj.limits();
  auto check_point = [&](const PolyArc& arc, double t) {
    const State s = arc.state(t);
    r.max_speed_violation =
        std::max({r.max_speed_violation, s.v - lim.v_max, lim.v_min - s.v});
    r.max_control_violation =
        std::max({r.max_control_violation, s.u - lim.u_max, lim.u_min - s.u});
  };
  for (double t : uniform_times(traj.bc().t0, traj.bc().tm, kVerifyGridSize)) {
    check_point(traj.arc_at(t), t);
  }
  for (const auto& arc : arcs) {
    check_point(arc, arc.t_start);
    check_point(arc, arc.t_end);
  }

  const auto& bc = traj.bc();
  r.residual_p0 = arcs.front().p(bc.t0) - bc.p0;
  r.residual_v0 = arcs.front().v(bc.t0) - bc.v0;
  r.residual_pm = arcs.back().p(bc.tm) - bc.pm;

  auto flag = [&](const char* name, double value) {
    if (std::abs(value) > tol) {
      r.flags.push_back(std::string(name) + "=" + std::to_string(value));
    }
  };
  flag("jump_p", r.max_jump_p);
  flag("jump_v", r.max_jump_v);
  flag("jump_u", r.max_jump_u);
  flag("speed_violation", r.max_speed_violation);
  flag("control_violation", r.max_control_violation);
  flag("residual_p0", r.residual_p0);
  flag("residual_v0", r.residual_v0);
  flag("residual_pm", r.residual_pm);
  return r;
}

}  // namespace cavocp

#endif  // CAVOCP_CORE_HPP_
