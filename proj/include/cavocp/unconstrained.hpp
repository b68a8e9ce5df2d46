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

#ifndef CAVOCP_UNCONSTRAINED_HPP_
#define CAVOCP_UNCONSTRAINED_HPP_

#include <cmath>
#include <optional>
#include <string_view>

#include "cavocp/core.hpp"

namespace cavocp {

enum class Direction { Decreasing, Increasing, Cruise };

inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Decreasing: return "Decreasing";
    case Direction::Increasing: return "Increasing";
    case Direction::Cruise: return "Cruise";
  }
  return "?";
}

inline constexpr double kCruiseRelTol = 1e-12;

// Sign of the unconstrained control slope. Decreasing when the vehicle must
// average more than its entry speed.
inline Direction classify(const BoundaryConditions& bc) {
  const double planned = bc.v0 * bc.horizon();
  const double needed = bc.distance();
  if (std::abs(planned - needed) <=
      kCruiseRelTol * std::max(std::abs(planned), std::abs(needed))) {
    return Direction::Cruise;
  }
  return planned < needed ? Direction::Decreasing : Direction::Increasing;
}

// Minimum-energy arc with free terminal speed: u(tm) = 0 and
// a = 3 (v0 T - (pm - p0)) / T^3 in shifted time.
inline PolyArc solve_unconstrained(const BoundaryConditions& bc) {
  const double T = bc.horizon();
  PolyArc arc;
  arc.kind = ArcKind::Unconstrained;
  arc.origin = bc.t0;
  arc.t_start = bc.t0;
  arc.t_end = bc.tm;
  arc.a = classify(bc) == Direction::Cruise
              ? 0.0
              : 3.0 * (bc.v0 * T - bc.distance()) / (T * T * T);
  arc.b = -arc.a * T;
  arc.c = bc.v0;
  arc.d = bc.p0;
  return arc;
}

inline Trajectory unconstrained_trajectory(const BoundaryConditions& bc,
                                           const Limits& limits) {
  return Trajectory({solve_unconstrained(bc)}, bc, limits);
}

// Slope and offset of an unconstrained arc have opposite signs. Empty for a
// cruise arc, where the property does not apply.
inline std::optional<bool> opposite_signs_check(const PolyArc& arc) {
  if (arc.a == 0.0) return std::nullopt;
  return arc.a * arc.b < 0.0;
}

}  // namespace cavocp

#endif  // CAVOCP_UNCONSTRAINED_HPP_
