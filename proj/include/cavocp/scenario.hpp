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

// Post-hoc safety checks for a set of vehicles crossing a four-way merging
// zone. Each vehicle is planned independently over its control zone
// [0, L]; rear-end gaps and merging-zone occupancy are then verified, never
// enforced.

#ifndef CAVOCP_SCENARIO_HPP_
#define CAVOCP_SCENARIO_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cavocp/constrained.hpp"
#include "cavocp/core.hpp"

namespace cavocp {

struct Geometry {
  double L = 0.0;  // control-zone length
  double S = 0.0;  // merging-zone side

  void validate() const {
    if (!(L > 0.0) || !(S > 0.0)) {
      throw std::invalid_argument("geometry requires L > 0 and S > 0");
    }
  }
};

enum class Approach { North, South, East, West };
enum class Movement { Straight, Left, Right };

inline std::string_view to_string(Approach a) {
  switch (a) {
    case Approach::North: return "N";
    case Approach::South: return "S";
    case Approach::East: return "E";
    case Approach::West: return "W";
  }
  return "?";
}

inline std::string_view to_string(Movement m) {
  switch (m) {
    case Movement::Straight: return "straight";
    case Movement::Left: return "left";
    case Movement::Right: return "right";
  }
  return "?";
}

struct VehicleSpec {
  int id = 0;
  Approach approach = Approach::North;
  Movement movement = Movement::Straight;
  double t0 = 0.0;
  double v0 = 0.0;
  double tm = 0.0;
};

inline bool opposite(Approach a, Approach b) {
  auto axis = [](Approach x) {
    return x == Approach::North || x == Approach::South ? 0 : 1;
  };
  return a != b && axis(a) == axis(b);
}

// Vehicles from the same approach share a lane and are handled by the
// rear-end check. Across approaches only two pairings keep disjoint paths
// inside the zone: two opposing straight movements, and two right turns.
inline bool paths_conflict(const VehicleSpec& a, const VehicleSpec& b) {
  if (a.approach == b.approach) return false;
  if (opposite(a.approach, b.approach) && a.movement == Movement::Straight &&
      b.movement == Movement::Straight) {
    return false;
  }
  if (a.movement == Movement::Right && b.movement == Movement::Right) {
    return false;
  }
  return true;
}

struct VehiclePlan {
  int id = 0;
  std::optional<Trajectory> trajectory;
  std::optional<CasePlan> plan;
  std::string error;

  bool ok() const { return trajectory.has_value(); }
};

inline BoundaryConditions vehicle_boundary(const VehicleSpec& spec,
                                           const Geometry& geometry) {
  return {spec.t0, spec.tm, 0.0, geometry.L, spec.v0};
}

// Per-vehicle failures are recorded, not thrown. Duplicate ids throw.
inline std::vector<VehiclePlan> plan_all(const std::vector<VehicleSpec>& specs,
                                         const Geometry& geometry,
                                         const Limits& limits) {
  geometry.validate();
  std::set<int> seen;
  for (const auto& s : specs) {
    if (s.id <= 0) throw std::invalid_argument("vehicle ids must be positive");
    if (!seen.insert(s.id).second) {
      throw std::invalid_argument("duplicate vehicle id " + std::to_string(s.id));
    }
  }
  std::vector<VehiclePlan> out;
  out.reserve(specs.size());
  for (const auto& s : specs) {
    VehiclePlan vp;
    vp.id = s.id;
    try {
      Solution sol = solve(vehicle_boundary(s, geometry), limits);
      vp.trajectory = std::move(sol.trajectory);
      vp.plan = std::move(sol.plan);
    } catch (const std::exception& e) {
      vp.error = e.what();
    }
    out.push_back(std::move(vp));
  }
  return out;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct RearEndViolation {
  int follower = 0;
  int leader = 0;
  Interval interval;
  double min_margin = 0.0;  // min of gap - delta over the interval, < 0
  double min_gap = 0.0;     // min of the raw gap over the interval
};

struct LateralConflict {
  int first = 0;
  int second = 0;
  Interval overlap;
};

struct SafetyParams {
  double standstill = 5.0;  // m
  double headway = 0.5;     // s
  std::size_t samples = 1000;
};

inline constexpr std::size_t kRearEndSamples = 1000;

// Samples gap(t) = p_leader - p_follower against standstill + headway *
// v_follower over the common horizon and returns maximal runs of grid
// points where the gap falls short. Ids are left zero.
inline std::vector<RearEndViolation> check_rear_end(
    const Trajectory& leader, const Trajectory& follower, double standstill,
    double headway, std::size_t samples = kRearEndSamples) {
  std::vector<RearEndViolation> out;
  const double lo = std::max(leader.bc().t0, follower.bc().t0);
  const double hi = std::min(leader.bc().tm, follower.bc().tm);
  if (!(hi > lo) || samples < 2) return out;
  const auto times = uniform_times(lo, hi, samples);
  std::optional<RearEndViolation> open;
  for (double t : times) {
    const State l = eval(leader, t);
    const State f = eval(follower, t);
    const double gap = l.p - f.p;
    const double margin = gap - (standstill + headway * f.v);
    if (margin < 0.0) {
      if (!open) {
        open = RearEndViolation{0, 0, {t, t}, margin, gap};
      }
      open->interval.hi = t;
      open->min_margin = std::min(open->min_margin, margin);
      open->min_gap = std::min(open->min_gap, gap);
    } else if (open) {
      out.push_back(*open);
      open.reset();
    }
  }
  if (open) out.push_back(*open);
  return out;
}

// Merging-zone occupancy [tm, tm + S / v(tm)], constant speed inside.
inline Interval occupancy(const Trajectory& traj, const Geometry& geometry) {
  const double v = eval(traj, traj.bc().tm).v;
  if (!(v > 0.0)) {
    throw DegenerateError("non-positive speed at the merging-zone entry");
  }
  return {traj.bc().tm, traj.bc().tm + geometry.S / v};
}

// specs and trajectories are parallel; entries without a trajectory are
// skipped. Overlap is strict: touching intervals do not conflict.
inline std::vector<LateralConflict> check_lateral(
    const std::vector<VehicleSpec>& specs,
    const std::vector<std::optional<Trajectory>>& trajectories,
    const Geometry& geometry) {
  if (specs.size() != trajectories.size()) {
    throw std::invalid_argument("specs and trajectories differ in length");
  }
  std::vector<std::optional<Interval>> gamma(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (trajectories[i]) gamma[i] = occupancy(*trajectories[i], geometry);
  }
  std::vector<LateralConflict> out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    for (std::size_t j = i + 1; j < specs.size(); ++j) {
      if (!gamma[i] || !gamma[j] || !paths_conflict(specs[i], specs[j])) continue;
      const double lo = std::max(gamma[i]->lo, gamma[j]->lo);
      const double hi = std::min(gamma[i]->hi, gamma[j]->hi);
      if (lo < hi) {
        out.push_back({std::min(specs[i].id, specs[j].id),
                       std::max(specs[i].id, specs[j].id), {lo, hi}});
      }
    }
  }
  return out;
}

struct SafetyReport {
  std::vector<RearEndViolation> rear_end_violations;
  std::vector<LateralConflict> lateral_conflicts;

  bool safe() const {
    return rear_end_violations.empty() && lateral_conflicts.empty();
  }
};

// Rear-end checks run between consecutive planned vehicles of each approach,
// ordered by entry time.
inline SafetyReport verify_scenario(const std::vector<VehicleSpec>& specs,
                                    const std::vector<VehiclePlan>& plans,
                                    const Geometry& geometry,
                                    const SafetyParams& params = {}) {
  if (specs.size() != plans.size()) {
    throw std::invalid_argument("specs and plans differ in length");
  }
  SafetyReport report;
  for (Approach a : {Approach::North, Approach::South, Approach::East,
                     Approach::West}) {
    std::vector<std::size_t> lane;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (specs[i].approach == a && plans[i].ok()) lane.push_back(i);
    }
    std::stable_sort(lane.begin(), lane.end(), [&](std::size_t x, std::size_t y) {
      return specs[x].t0 < specs[y].t0;
    });
    for (std::size_t k = 1; k < lane.size(); ++k) {
      const auto& lead = plans[lane[k - 1]];
      const auto& follow = plans[lane[k]];
      auto v = check_rear_end(*lead.trajectory, *follow.trajectory,
                              params.standstill, params.headway, params.samples);
      for (auto& r : v) {
        r.leader = lead.id;
        r.follower = follow.id;
        report.rear_end_violations.push_back(r);
      }
    }
  }
  std::vector<std::optional<Trajectory>> trajs;
  trajs.reserve(plans.size());
  for (const auto& p : plans) trajs.push_back(p.trajectory);
  report.lateral_conflicts = check_lateral(specs, trajs, geometry);
  return report;
}

}  // namespace cavocp

#endif  // CAVOCP_SCENARIO_HPP_
