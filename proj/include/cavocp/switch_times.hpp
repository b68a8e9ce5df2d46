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

// Closed-form junction times of the stitched constrained solutions.
//
// All three follow from the stitching conditions in shifted time (t0 = 0),
// T = tm - t0, D = pm - p0, with v_b / u_b the active speed / acceleration
// bound:
//
//   speed-pinned tail:  unconstrained arc with u(tau_s) = 0, v(tau_s) = v_b,
//                       then v = v_b.  p(tau_s) = tau_s (v0 + 2 v_b) / 3 gives
//                       tau_s = 3 (v_b T - D) / (v_b - v0).
//
//   accel-pinned head:  u = u_b on [0, tau_c], then linear to u(T) = 0.
//                       With s = T - tau_c,  D = v0 T + u_b (T^2/2 - s^2/6),
//                       so s^2 = 3 T^2 + 6 (v0 T - D) / u_b.
//
//   both:               u = u_b, linear ramp to 0, then v = v_b.  With
//                       K = (v_b - v0) / u_b and w = tau_s - tau_c,
//                       D = v_b T - u_b (K^2/2 + w^2/24), tau_c = K - w/2,
//                       tau_s = K + w/2.
//
// The values returned here are raw: callers decide whether they fall inside
// (t0, tm).

#ifndef CAVOCP_SWITCH_TIMES_HPP_
#define CAVOCP_SWITCH_TIMES_HPP_

#include <cmath>
#include <optional>

#include "cavocp/core.hpp"

namespace cavocp {

inline double state_switch_time(const BoundaryConditions& bc,
                                const Limits& limits, Side side) {
  const double vb = speed_bound(limits, side);
  if (!std::isfinite(vb)) {
    throw DegenerateError("speed bound is not finite");
  }
  if (vb == bc.v0) {
    throw DegenerateError("entry speed equals the speed bound");
  }
  return bc.t0 + 3.0 * (vb * bc.horizon() - bc.distance()) / (vb - bc.v0);
}

// Empty when even a fully pinned control cannot cover the distance.
inline std::optional<double> control_switch_time(const BoundaryConditions& bc,
                                                 const Limits& limits,
                                                 Side side) {
  const double ub = accel_bound(limits, side);
  if (!std::isfinite(ub)) return std::nullopt;
  const double T = bc.horizon();
  const double s2 = 3.0 * T * T + 6.0 * (bc.v0 * T - bc.distance()) / ub;
  if (!(s2 > 0.0)) return std::nullopt;
  return bc.tm - std::sqrt(s2);
}

struct BothSwitchTimes {
  double tau_c = 0.0;
  double tau_s = 0.0;
};

// Empty when the accelerate-to-bound-then-ride profile cannot cover the
// distance (or exactly saturates it).
inline std::optional<BothSwitchTimes> both_switch_times(
    const BoundaryConditions& bc, const Limits& limits, Side side) {
  const double vb = speed_bound(limits, side);
  const double ub = accel_bound(limits, side);
  if (!std::isfinite(vb) || !std::isfinite(ub)) return std::nullopt;
  const double K = (vb - bc.v0) / ub;
  const double w2 =
      24.0 * ((vb * bc.horizon() - bc.distance()) / ub - 0.5 * K * K);
  if (!(w2 > 0.0)) return std::nullopt;
  const double w = std::sqrt(w2);
  return BothSwitchTimes{bc.t0 + K - 0.5 * w, bc.t0 + K + 0.5 * w};
}

// Position reached at tau_s by the first arc of the speed-pinned solution.
inline double state_switch_position(const BoundaryConditions& bc,
                                    const Limits& limits, Side side,
                                    double tau_s) {
  const double vb = speed_bound(limits, side);
  return bc.p0 + (tau_s - bc.t0) * (bc.v0 + 2.0 * vb) / 3.0;
}

// State reached at tau_c by the pinned-control head.
inline State control_switch_state(const BoundaryConditions& bc,
                                  const Limits& limits, Side side,
                                  double tau_c) {
  const double ub = accel_bound(limits, side);
  const double s = tau_c - bc.t0;
  return {bc.p0 + bc.v0 * s + 0.5 * ub * s * s, bc.v0 + ub * s, ub};
}

}  // namespace cavocp

#endif  // CAVOCP_SWITCH_TIMES_HPP_
