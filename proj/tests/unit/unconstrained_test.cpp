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

#include "cavocp/unconstrained.hpp"

#include <gtest/gtest.h>

#include "cavocp/activation.hpp"
#include "support/instances.hpp"

namespace cavocp {
namespace {

using testing::reference_bc;

TEST(UnconstrainedTest, ShortHorizonAccelerates) {
  const auto bc = reference_bc(10.0);
  EXPECT_EQ(classify(bc), Direction::Decreasing);
  const Trajectory traj = unconstrained_trajectory(bc, Limits::unbounded());
  const PolyArc& arc = traj.arcs().front();
  EXPECT_NEAR(arc.a, -0.198, 1e-15);
  EXPECT_NEAR(arc.u(0.0), 1.98, 1e-14);
  EXPECT_NEAR(arc.u(10.0), 0.0, 1e-14);
  EXPECT_NEAR(eval(traj, 10.0).v, 23.3, 1e-13);
  EXPECT_NEAR(eval(traj, 10.0).p, 200.0, 1e-12);
  EXPECT_NEAR(cost(traj), 6.534, 1e-12);
}

TEST(UnconstrainedTest, LongHorizonDecelerates) {
  const auto bc = reference_bc(20.0);
  EXPECT_EQ(classify(bc), Direction::Increasing);
  const PolyArc arc = solve_unconstrained(bc);
  EXPECT_NEAR(arc.a, 0.0255, 1e-15);
  EXPECT_NEAR(arc.b, -0.51, 1e-14);
  EXPECT_NEAR(arc.energy(), 0.867, 1e-12);
  EXPECT_NEAR(arc.p(20.0), 200.0, 1e-12);
}

TEST(UnconstrainedTest, CruiseHasZeroControl) {
  const BoundaryConditions bc{0.0, 10.0, 0.0, 134.0, 13.4};
  EXPECT_EQ(classify(bc), Direction::Cruise);
  const PolyArc arc = solve_unconstrained(bc);
  EXPECT_EQ(arc.a, 0.0);
  EXPECT_EQ(arc.b, 0.0);
  EXPECT_EQ(arc.energy(), 0.0);
  EXPECT_FALSE(opposite_signs_check(arc).has_value());
}

TEST(UnconstrainedTest, ShiftedOriginMatchesZeroOrigin) {
  const BoundaryConditions moved{7.0, 17.0, -30.0, 170.0, 13.4};
  const auto ref = solve_unconstrained(reference_bc(10.0));
  const auto arc = solve_unconstrained(moved);
  for (double s : {0.0, 2.5, 7.0, 10.0}) {
    EXPECT_NEAR(arc.u(7.0 + s), ref.u(s), 1e-13);
    EXPECT_NEAR(arc.v(7.0 + s), ref.v(s), 1e-13);
    EXPECT_NEAR(arc.p(7.0 + s), ref.p(s) - 30.0, 1e-12);
  }
}

TEST(UnconstrainedTest, FirstCrossingOfSpeedLimit) {
  const PolyArc arc = solve_unconstrained(reference_bc(10.0));
  EXPECT_NEAR(unconstrained_crossing_time(arc, 21.0), 5.18000796345852613, 1e-12);
  EXPECT_THROW(unconstrained_crossing_time(arc, 30.0), std::domain_error);
}

TEST(UnconstrainedTest, SlopeAndOffsetHaveOppositeSigns) {
  testing::InstanceGenerator gen(11);
  for (int i = 0; i < 2000; ++i) {
    const auto in = gen.any();
    const PolyArc arc = solve_unconstrained(in.bc);
    const auto check = opposite_signs_check(arc);
    ASSERT_TRUE(check.has_value());
    EXPECT_TRUE(*check);
    EXPECT_NEAR(arc.p(in.bc.tm), in.bc.pm, 1e-9 * std::abs(in.bc.pm) + 1e-9);
    EXPECT_NEAR(arc.u(in.bc.tm), 0.0, 1e-12);
  }
}

}  // namespace
}  // namespace cavocp
