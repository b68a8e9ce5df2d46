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

#include "cavocp/constrained.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "cavocp/oracle.hpp"
#include "support/instances.hpp"

namespace cavocp {
namespace {

using testing::reference_bc;

TEST(SpeedPinnedTest, Reference) {
  const Limits lim{-kInf, 5.0, 0.0, 21.0};
  const Solution sol = solve(reference_bc(10), lim);
  EXPECT_EQ(sol.plan.plan.plan_case, PlanCase::StateOnly);
  const auto& arcs = sol.trajectory.arcs();
  ASSERT_EQ(arcs.size(), 2u);
  EXPECT_EQ(arcs[1].kind, ArcKind::SpeedPinnedMax);
  EXPECT_NEAR(arcs[0].t_end, 3.94736842105263158, 1e-13);
  EXPECT_NEAR(arcs[0].a, -0.975502222222222, 1e-12);
  EXPECT_NEAR(arcs[0].b, 3.85066666666667, 1e-12);
  EXPECT_NEAR(cost(sol.trajectory), 9.75502222222222, 1e-11);
  EXPECT_NEAR(eval(sol.trajectory, arcs[0].t_end).p, 72.8947368421053, 1e-11);
  EXPECT_NEAR(eval(sol.trajectory, 10.0).v, 21.0, 1e-12);
  EXPECT_NEAR(eval(sol.trajectory, 10.0).p, 200.0, 1e-10);
}

TEST(ControlPinnedTest, Reference) {
  const Limits lim{-kInf, 1.4, 0.0, 30.0};
  const Solution sol = solve(reference_bc(10), lim);
  EXPECT_EQ(sol.plan.plan.plan_case, PlanCase::ControlOnly);
  const auto& arcs = sol.trajectory.arcs();
  ASSERT_EQ(arcs.size(), 2u);
  EXPECT_EQ(arcs[0].kind, ArcKind::AccelPinnedMax);
  EXPECT_NEAR(arcs[0].t_end, 5.85960664394587, 1e-12);
  EXPECT_NEAR(cost(sol.trajectory), 7.09494300737797, 1e-11);
  EXPECT_NEAR(eval(sol.trajectory, 10.0).v, 24.5017246507621, 1e-11);
  EXPECT_NEAR(eval(sol.trajectory, 10.0).u, 0.0, 1e-12);
  // u is continuous at the release.
  EXPECT_NEAR(arcs[1].u(arcs[1].t_start), 1.4, 1e-12);
}

TEST(BothTest, Reference) {
  const BoundaryConditions bc{0, 10, 0, 185, 13.4};
  const Solution sol = solve(bc, Limits{-6, 1.4, 0, 21});
  EXPECT_EQ(sol.plan.plan.plan_case, PlanCase::Both);
  const auto& arcs = sol.trajectory.arcs();
  ASSERT_EQ(arcs.size(), 3u);
  EXPECT_NEAR(arcs[0].t_end, 1.10021216927340, 1e-12);
  EXPECT_NEAR(arcs[1].t_end, 9.75693068786946, 1e-12);
  EXPECT_NEAR(cost(sol.trajectory), 3.90606930862931, 1e-11);
  EXPECT_NEAR(arcs[1].u(arcs[1].t_end), 0.0, 1e-12);
  EXPECT_NEAR(arcs[1].v(arcs[1].t_end), 21.0, 1e-12);
}

TEST(BothTest, ReferenceLimitsCannotCover200m) {
  // Accelerating at 1.4 m/s^2 to 21 m/s and riding it covers at most
  // 189.37 m in 10 s.
  EXPECT_THROW(solve(reference_bc(10), Limits{-6, 1.4, 0, 21}), InfeasibleError);
}

TEST(SolveTest, EntrySpeedOutsideBoxIsInfeasible) {
  EXPECT_THROW(solve(reference_bc(10), Limits{-6, 1.4, 0, 13.0}), InfeasibleError);
  EXPECT_THROW(solve(reference_bc(20), Limits{-6, 1.4, 14.0, 21.0}), InfeasibleError);
}

TEST(SolveTest, InvalidInputThrows) {
  EXPECT_THROW(solve(BoundaryConditions{0, 10, 200, 0, 13.4}, Limits{-6, 1.4, 0, 21}),
               std::invalid_argument);
  EXPECT_THROW(solve(reference_bc(10), Limits{0.5, 1.4, 0, 21}), std::invalid_argument);
}

TEST(MinSideTest, SpeedPinnedMatchesOracle) {
  const auto bc = reference_bc(20);
  const Limits lim{-6.0, 1.4, 9.0, 21.0};
  const Solution sol = solve(bc, lim);
  ASSERT_EQ(sol.trajectory.arcs().back().kind, ArcKind::SpeedPinnedMin);
  const auto grid = collocation_solve(bc, lim, 4000);
  const auto r = compare(sol.trajectory, grid);
  EXPECT_TRUE(r.within_tolerance());
  EXPECT_LT(std::abs(r.cost_gap), 1e-4);
}

TEST(MinSideTest, ControlPinnedMatchesOracle) {
  const auto bc = reference_bc(20);
  const Limits lim{-0.45, 1.4, 0.0, 21.0};
  const Solution sol = solve(bc, lim);
  ASSERT_EQ(sol.plan.plan.plan_case, PlanCase::ControlOnly);
  EXPECT_EQ(sol.trajectory.arcs().front().kind, ArcKind::AccelPinnedMin);
  const auto r = compare(sol.trajectory, collocation_solve(bc, lim, 4000));
  EXPECT_TRUE(r.within_tolerance());
}

TEST(MinSideTest, BothMatchesOracle) {
  const auto bc = reference_bc(20);
  const Limits lim{-0.6, 1.4, 9.0, 21.0};
  const Solution sol = solve(bc, lim);
  ASSERT_EQ(sol.plan.plan.plan_case, PlanCase::Both);
  const auto r = compare(sol.trajectory, collocation_solve(bc, lim, 4000));
  EXPECT_TRUE(r.within_tolerance()) << r.cost_gap << " " << r.max_dv;
}

TEST(KktTest, MultipliersNonNegative) {
  const Limits lim{-kInf, 5.0, 0.0, 21.0};
  for (const Solution& sol :
       {solve(reference_bc(10), lim), solve(reference_bc(10), Limits{-kInf, 1.4, 0, 30}),
        solve(BoundaryConditions{0, 10, 0, 185, 13.4}, Limits{-6, 1.4, 0, 21})}) {
    const auto checks = kkt_multipliers(sol.trajectory);
    EXPECT_FALSE(checks.empty());
    for (const auto& c : checks) EXPECT_GE(c.min_value, -1e-12) << to_string(c.kind);
  }
}

TEST(KktTest, SpeedMultiplierValue) {
  // mu = -lambda_p = -a on the speed-pinned tail.
  const Solution sol = solve(reference_bc(10), Limits{-kInf, 5.0, 0.0, 21.0});
  const auto checks = kkt_multipliers(sol.trajectory);
  ASSERT_EQ(checks.size(), 1u);
  EXPECT_NEAR(checks[0].min_value, 0.975502222222222, 1e-12);
}

TEST(ActiveSetTest, ReadsArcKinds) {
  const auto act = active_set(
      solve(BoundaryConditions{0, 10, 0, 185, 13.4}, Limits{-6, 1.4, 0, 21}).trajectory);
  EXPECT_TRUE(act.state_max_active);
  EXPECT_TRUE(act.control_max_active);
  EXPECT_EQ(act.plan_case, PlanCase::Both);
}

TEST(SolveTest, RandomInstancesVerify) {
  testing::InstanceGenerator gen(17);
  int solved = 0;
  for (int i = 0; i < 3000; ++i) {
    const auto in = gen.any();
    try {
      const Solution sol = solve(in.bc, in.limits);
      EXPECT_TRUE(verify(sol.trajectory, 1e-8).ok());
      EXPECT_EQ(active_set(sol.trajectory).plan_case, sol.plan.plan.plan_case);
      ++solved;
    } catch (const InfeasibleError&) {
    }
  }
  EXPECT_GT(solved, 1000);
}

}  // namespace
}  // namespace cavocp
