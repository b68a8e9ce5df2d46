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

// A-priori decision of which speed / acceleration bounds the constrained
// optimum rides, from boundary data alone.
//
// The sign of the unconstrained slope rules out one side of the box entirely
// (a decreasing control starts at its maximum and ends at zero, so speed is
// increasing and bounded below by v0). The remaining side is tested with
// closed-form horizon inequalities, and a single activation is followed by
// a check on the reduced horizon of the tentative two-arc solution.

#ifndef CAVOCP_ACTIVATION_HPP_
#define CAVOCP_ACTIVATION_HPP_

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cavocp/core.hpp"
#include "cavocp/switch_times.hpp"
#include "cavocp/unconstrained.hpp"

namespace cavocp {

enum class ConstraintKind { StateMax, StateMin, ControlMax, ControlMin };

inline std::string_view to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::StateMax: return "state_max";
    case ConstraintKind::StateMin: return "state_min";
    case ConstraintKind::ControlMax: return "control_max";
    case ConstraintKind::ControlMin: return "control_min";
  }
  return "?";
}

enum class PlanCase { Unconstrained, StateOnly, ControlOnly, Both };

inline std::string_view to_string(PlanCase c) {
  switch (c) {
    case PlanCase::Unconstrained: return "Unconstrained";
    case PlanCase::StateOnly: return "StateOnly";
    case PlanCase::ControlOnly: return "ControlOnly";
    case PlanCase::Both: return "Both";
  }
  return "?";
}

struct ActivationPlan {
  Direction direction = Direction::Cruise;
  bool state_max_active = false;
  bool state_min_active = false;
  bool control_max_active = false;
  bool control_min_active = false;
  PlanCase plan_case = PlanCase::Unconstrained;

  bool any_max() const { return state_max_active || control_max_active; }
  bool any_min() const { return state_min_active || control_min_active; }

  // Max-side and min-side activations never coexist, and the direction
  // decides which side is admissible.
  bool consistent() const {
    if (any_max() && any_min()) return false;
    if (direction == Direction::Decreasing && any_min()) return false;
    if (direction == Direction::Increasing && any_max()) return false;
    if (direction == Direction::Cruise && (any_max() || any_min())) return false;
    return true;
  }
};

struct CasePlan {
  ActivationPlan plan;
  std::optional<double> tau_s_estimate;
  std::optional<double> tau_c_estimate;
  std::vector<std::string> rationale;
};

// Side of the box that can still activate. Empty for cruise.
inline std::optional<Side> admissible_side(Direction d) {
  switch (d) {
    case Direction::Decreasing: return Side::Max;
    case Direction::Increasing: return Side::Min;
    case Direction::Cruise: return std::nullopt;
  }
  return std::nullopt;
}

inline std::vector<ConstraintKind> excluded_side(Direction d) {
  switch (d) {
    case Direction::Decreasing:
      return {ConstraintKind::StateMin, ConstraintKind::ControlMin};
    case Direction::Increasing:
      return {ConstraintKind::StateMax, ConstraintKind::ControlMax};
    case Direction::Cruise:
      return {ConstraintKind::StateMax, ConstraintKind::StateMin,
              ConstraintKind::ControlMax, ConstraintKind::ControlMin};
  }
  return {};
}

// Horizon threshold 3 (pm - p0) / (v0 + 2 v_bound). The speed bound on the
// admissible side is crossed when the horizon is below it (max side) or
// above it (min side).
inline double state_activation_threshold(const BoundaryConditions& bc,
                                         const Limits& limits, Side side) {
  return 3.0 * bc.distance() / (bc.v0 + 2.0 * speed_bound(limits, side));
}

inline bool state_active(const BoundaryConditions& bc, const Limits& limits) {
  const auto side = admissible_side(classify(bc));
  if (!side) return false;
  const double threshold = state_activation_threshold(bc, limits, *side);
  return *side == Side::Max ? bc.horizon() < threshold
                            : bc.horizon() > threshold;
}

// Horizon threshold for the max-side acceleration bound,
// (-3 v0 + sqrt(9 v0^2 + 12 u_max D)) / (2 u_max). The min-side analogue is
// not a single threshold (the quadratic is concave), so it is not reported.
inline std::optional<double> control_activation_threshold(
    const BoundaryConditions& bc, const Limits& limits, Side side) {
  if (side == Side::Min || !std::isfinite(limits.u_max)) return std::nullopt;
  const double v0 = bc.v0;
  const double u = limits.u_max;
  return (-3.0 * v0 + std::sqrt(9.0 * v0 * v0 + 12.0 * u * bc.distance())) /
         (2.0 * u);
}

// The unconstrained control is extremal at t0 (it decays linearly to zero),
// so the bound is active iff u(t0) lies beyond it.
inline bool control_active(const BoundaryConditions& bc, const Limits& limits) {
  const auto side = admissible_side(classify(bc));
  if (!side) return false;
  const double u0 = solve_unconstrained(bc).b;
  return *side == Side::Max ? u0 > limits.u_max : u0 < limits.u_min;
}

// Earlier time at which an unconstrained arc reaches v_bound. Throws
// std::domain_error when the arc never reaches it inside its interval.
inline double unconstrained_crossing_time(const PolyArc& arc, double v_bound) {
  if (arc.a == 0.0) {
    throw std::domain_error("cruise arc has constant speed");
  }
  const double a = arc.a;
  const double b = arc.b;
  const double v0 = arc.v(arc.origin);
  const double vertex = -b / a;
  double disc = 4.0 * b * b - 8.0 * a * (v0 - v_bound);
  const double scale = 4.0 * b * b + std::abs(8.0 * a * (v0 - v_bound));
  if (disc < 0.0) {
    if (disc < -1e-12 * scale) {
      throw std::domain_error("speed bound is never reached");
    }
    disc = 0.0;
  }
  const double tau = arc.origin + vertex - std::sqrt(disc / (4.0 * a * a));
  if (tau < arc.t_start || tau > arc.t_end) {
    throw std::domain_error("crossing lies outside the arc");
  }
  return tau;
}

// RHS of the max-side check for a control activation induced by the
// speed-pinned solution: the acceleration threshold re-evaluated on the
// reduced horizon [t0, tau_s]. Returned in shifted time.
inline std::optional<double> secondary_control_threshold(
    const BoundaryConditions& bc, const Limits& limits, double tau_s) {
  if (!std::isfinite(limits.u_max) || !std::isfinite(limits.v_max)) {
    return std::nullopt;
  }
  const double v0 = bc.v0;
  const double u = limits.u_max;
  const double reach =
      state_switch_position(bc, limits, Side::Max, tau_s) - bc.p0;
  return (-3.0 * v0 + std::sqrt(9.0 * v0 * v0 + 12.0 * u * reach)) / (2.0 * u);
}

inline bool secondary_control_after_state(const BoundaryConditions& bc,
                                          const Limits& limits, double tau_s) {
  const auto side = admissible_side(classify(bc));
  if (!side) return false;
  const double s = tau_s - bc.t0;
  if (*side == Side::Max) {
    const auto rhs = secondary_control_threshold(bc, limits, tau_s);
    return rhs && s < *rhs;
  }
  // Min side: the first arc starts at u = 2 (v_min - v0) / tau_s.
  if (!std::isfinite(limits.u_min)) return false;
  return 2.0 * (limits.v_min - bc.v0) / s < limits.u_min;
}

// tau_c + 3 (pm - p(tau_c)) / (v(tau_c) + 2 v_bound): the speed threshold
// re-evaluated on the reduced horizon [tau_c, tm]. Absolute time. Empty when
// the denominator is non-positive.
inline std::optional<double> secondary_state_threshold(
    const BoundaryConditions& bc, const Limits& limits, Side side,
    double tau_c) {
  const double vb = speed_bound(limits, side);
  const State at = control_switch_state(bc, limits, side, tau_c);
  const double denom = at.v + 2.0 * vb;
  if (!(denom > 0.0)) return std::nullopt;
  return tau_c + 3.0 * (bc.pm - at.p) / denom;
}

inline bool secondary_state_after_control(const BoundaryConditions& bc,
                                          const Limits& limits, double tau_c) {
  const auto side = admissible_side(classify(bc));
  if (!side) return false;
  const auto threshold = secondary_state_threshold(bc, limits, *side, tau_c);
  if (*side == Side::Max) return threshold && bc.tm < *threshold;
  // v(tau_c) + 2 v_min <= 0 means the pinned head already dropped below v_min.
  return !threshold || bc.tm > *threshold;
}

namespace detail {
inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}
}  // namespace detail

inline CasePlan plan(const BoundaryConditions& bc, const Limits& limits) {
  CasePlan out;
  auto& p = out.plan;
  p.direction = classify(bc);
  out.rationale.push_back(std::string("direction=") +
                          std::string(to_string(p.direction)));
  const auto side = admissible_side(p.direction);
  if (!side) {
    out.rationale.push_back("cruise: all bounds excluded");
    p.plan_case = PlanCase::Unconstrained;
    return out;
  }
  out.rationale.push_back(*side == Side::Max
                              ? "exclusion: min-side bounds cannot activate"
                              : "exclusion: max-side bounds cannot activate");

  const bool state = state_active(bc, limits);
  const bool control = control_active(bc, limits);
  out.rationale.push_back(std::string("state bound: ") +
                          (state ? "active" : "inactive"));
  out.rationale.push_back(std::string("control bound: ") +
                          (control ? "active" : "inactive"));

  bool use_state = state;
  bool use_control = control;
  if (state && !control) {
    try {
      const double tau_s = state_switch_time(bc, limits, *side);
      out.tau_s_estimate = tau_s;
      if (tau_s > bc.t0 && tau_s < bc.tm &&
          secondary_control_after_state(bc, limits, tau_s)) {
        use_control = true;
        out.rationale.push_back("speed-pinned solution activates control at "
                                "tau_s=" + detail::fmt(tau_s));
      }
    } catch (const DegenerateError& e) {
      out.rationale.push_back(std::string("tau_s unavailable: ") + e.what());
    }
  } else if (control && !state) {
    const auto tau_c = control_switch_time(bc, limits, *side);
    if (tau_c) {
      out.tau_c_estimate = *tau_c;
      if (*tau_c > bc.t0 && *tau_c < bc.tm &&
          secondary_state_after_control(bc, limits, *tau_c)) {
        use_state = true;
        out.rationale.push_back("control-pinned solution activates speed at "
                                "tau_c=" + detail::fmt(*tau_c));
      }
    } else {
      out.rationale.push_back("tau_c unavailable: distance unreachable");
    }
  }

  if (*side == Side::Max) {
    p.state_max_active = use_state;
    p.control_max_active = use_control;
  } else {
    p.state_min_active = use_state;
    p.control_min_active = use_control;
  }
  if (use_state && use_control) {
    p.plan_case = PlanCase::Both;
  } else if (use_state) {
    p.plan_case = PlanCase::StateOnly;
  } else if (use_control) {
    p.plan_case = PlanCase::ControlOnly;
  } else {
    p.plan_case = PlanCase::Unconstrained;
  }
  return out;
}

}  // namespace cavocp

#endif  // CAVOCP_ACTIVATION_HPP_
