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

#ifndef CAVOCP_CONSTRAINED_HPP_
#define CAVOCP_CONSTRAINED_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cavocp/activation.hpp"
#include "cavocp/core.hpp"
#include "cavocp/stitch.hpp"
#include "cavocp/switch_times.hpp"
#include "cavocp/unconstrained.hpp"

namespace cavocp {

inline ArcKind speed_arc(Side side) {
  return side == Side::Max ? ArcKind::SpeedPinnedMax : ArcKind::SpeedPinnedMin;
}
inline ArcKind accel_arc(Side side) {
  return side == Side::Max ? ArcKind::AccelPinnedMax : ArcKind::AccelPinnedMin;
}

// Unconstrained arc entering the speed bound tangentially, then riding it.
inline Trajectory solve_state_constrained(const BoundaryConditions& bc,
                                          const Limits& limits, Side side) {
  const double tau_s = state_switch_time(bc, limits, side);
  if (!(tau_s > bc.t0 && tau_s < bc.tm)) {
    throw InfeasibleError("speed-pinned switch time " + detail::fmt(tau_s) +
                          " outside (t0, tm)");
  }
  const StitchSystem sys({ArcKind::Unconstrained, speed_arc(side)}, bc, limits);
  const double times[1] = {tau_s};
  return sys.assemble(times);
}

// Control pinned at its bound from t0, then released linearly to zero at tm.
inline Trajectory solve_control_constrained(const BoundaryConditions& bc,
                                            const Limits& limits, Side side) {
  const auto tau_c = control_switch_time(bc, limits, side);
  if (!tau_c) {
    throw InfeasibleError("distance unreachable with pinned control");
  }
  const double tol = 1e-9 * bc.horizon();
  if (std::abs(*tau_c - bc.t0) <= tol) {
    return unconstrained_trajectory(bc, limits);
  }
  if (!(*tau_c > bc.t0 && *tau_c < bc.tm)) {
    throw InfeasibleError("control-pinned switch time " + detail::fmt(*tau_c) +
                          " outside (t0, tm)");
  }
  const StitchSystem sys({accel_arc(side), ArcKind::Unconstrained}, bc, limits);
  const double times[1] = {*tau_c};
  return sys.assemble(times);
}

// Pinned control, linear release, then pinned speed until tm.
inline Trajectory solve_both_constrained(const BoundaryConditions& bc,
                                         const Limits& limits, Side side) {
  const auto times = both_switch_times(bc, limits, side);
  if (!times) {
    throw InfeasibleError(
        "no admissible switch-time pair: bound-riding profile cannot cover "
        "the distance");
  }
  if (!(times->tau_c > bc.t0 && times->tau_s < bc.tm)) {
    throw InfeasibleError("switch times (" + detail::fmt(times->tau_c) + ", " +
                          detail::fmt(times->tau_s) + ") outside (t0, tm)");
  }
  const StitchSystem sys(
      {accel_arc(side), ArcKind::Unconstrained, speed_arc(side)}, bc, limits);
  const double t[2] = {times->tau_c, times->tau_s};
  return sys.assemble(t);
}

struct Solution {
  Trajectory trajectory;
  CasePlan plan;
  std::vector<std::string> diagnostics;
};

inline constexpr double kSolveVerifyTol = 1e-6;

inline Solution solve(const BoundaryConditions& bc, const Limits& limits) {
  bc.validate();
  limits.validate();
  if (bc.v0 > limits.v_max || bc.v0 < limits.v_min) {
    throw InfeasibleError("entry speed outside [v_min, v_max]");
  }
  CasePlan cp = plan(bc, limits);
  std::vector<std::string> diagnostics;
  const auto side = admissible_side(cp.plan.direction);

  auto run = [&](PlanCase c) -> Trajectory {
    switch (c) {
      case PlanCase::Unconstrained:
        return unconstrained_trajectory(bc, limits);
      case PlanCase::StateOnly:
        return solve_state_constrained(bc, limits, *side);
      case PlanCase::ControlOnly:
        return solve_control_constrained(bc, limits, *side);
      case PlanCase::Both:
        return solve_both_constrained(bc, limits, *side);
    }
    throw std::logic_error("unknown plan case");
  };

  PlanCase chosen = cp.plan.plan_case;
  if (chosen == PlanCase::Both) {
    // Boundary-of-activation numerics: fall back to the single-bound case.
    const auto times = both_switch_times(bc, limits, *side);
    if (times && times->tau_c <= bc.t0) {
      chosen = PlanCase::StateOnly;
    } else if (times && times->tau_s >= bc.tm) {
      chosen = PlanCase::ControlOnly;
    }
    if (chosen != PlanCase::Both) {
      diagnostics.push_back(std::string("demoted Both to ") +
                            std::string(to_string(chosen)));
      auto& p = cp.plan;
      p.plan_case = chosen;
      const bool keep_state = chosen == PlanCase::StateOnly;
      if (*side == Side::Max) {
        p.state_max_active = keep_state;
        p.control_max_active = !keep_state;
      } else {
        p.state_min_active = keep_state;
        p.control_min_active = !keep_state;
      }
    }
  }

  Trajectory traj = run(chosen);
  const auto report = verify(traj, kSolveVerifyTol);
  if (!report.ok()) {
    std::string msg = "solution failed verification:";
    for (const auto& f : report.flags) msg += " " + f;
    throw std::runtime_error(msg);
  }
  return Solution{std::move(traj), std::move(cp), std::move(diagnostics)};
}

// Costates of the governing unconstrained arc: lambda_p = a and
// lambda_v(t) = -(a s + b).
struct Costates {
  double lambda_p = 0.0;
  double lambda_v = 0.0;
};

inline Costates unconstrained_costates(const PolyArc& arc, double t) {
  return {arc.a, -arc.u(t)};
}

struct MultiplierCheck {
  std::size_t arc = 0;
  ArcKind kind = ArcKind::Unconstrained;
  double min_value = 0.0;  // must be >= 0
};

// Path-constraint multipliers on each pinned arc, reconstructed from the
// costates of the unconstrained arc of the same trajectory.
inline std::vector<MultiplierCheck> kkt_multipliers(const Trajectory& traj) {
  const auto& arcs = traj.arcs();
  const auto free_arc = std::find_if(arcs.begin(), arcs.end(), [](const auto& a) {
    return a.kind == ArcKind::Unconstrained;
  });
  std::vector<MultiplierCheck> out;
  if (free_arc == arcs.end()) return out;
  const auto& lim = traj.limits();
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const PolyArc& arc = arcs[i];
    double m = 0.0;
    switch (arc.kind) {
      case ArcKind::Unconstrained:
        continue;
      case ArcKind::SpeedPinnedMax:
        m = -unconstrained_costates(*free_arc, arc.t_start).lambda_p;
        break;
      case ArcKind::SpeedPinnedMin:
        m = unconstrained_costates(*free_arc, arc.t_start).lambda_p;
        break;
      case ArcKind::AccelPinnedMax: {
        // u + lambda_v + mu_a = 0 with u = u_max; linear in t.
        auto mu = [&](double t) {
          return -lim.u_max - unconstrained_costates(*free_arc, t).lambda_v;
        };
        m = std::min(mu(arc.t_start), mu(arc.t_end));
        break;
      }
      case ArcKind::AccelPinnedMin: {
        auto mu = [&](double t) {
          return lim.u_min + unconstrained_costates(*free_arc, t).lambda_v;
        };
        m = std::min(mu(arc.t_start), mu(arc.t_end));
        break;
      }
    }
    out.push_back({i, arc.kind, m});
  }
  return out;
}

// Bounds the trajectory actually rides, read off its arc kinds.
inline ActivationPlan active_set(const Trajectory& traj) {
  ActivationPlan p;
  p.direction = classify(traj.bc());
  for (const auto& arc : traj.arcs()) {
    switch (arc.kind) {
      case ArcKind::SpeedPinnedMax: p.state_max_active = true; break;
      case ArcKind::SpeedPinnedMin: p.state_min_active = true; break;
      case ArcKind::AccelPinnedMax: p.control_max_active = true; break;
      case ArcKind::AccelPinnedMin: p.control_min_active = true; break;
      case ArcKind::Unconstrained: break;
    }
  }
  const bool s = p.state_max_active || p.state_min_active;
  const bool c = p.control_max_active || p.control_min_active;
  p.plan_case = s && c ? PlanCase::Both
                : s    ? PlanCase::StateOnly
                : c    ? PlanCase::ControlOnly
                       : PlanCase::Unconstrained;
  return p;
}

}  // namespace cavocp

#endif  // CAVOCP_CONSTRAINED_HPP_
