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

#include "cavocp/oracle.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "support/instances.hpp"

namespace cavocp {
namespace {

using testing::reference_bc;

TEST(OracleTest, UnconstrainedReference) {
  const auto g = collocation_solve(reference_bc(10), Limits::unbounded(), 4000);
  EXPECT_NEAR(g.cost, 6.534, 1e-3 * 6.534);
  // The grid problem restricts the continuous one.
  EXPECT_GE(g.cost, 6.534 - 1e-9);
  EXPECT_NEAR(g.v.back(), 23.3, 1e-3);
  EXPECT_NEAR(g.p.back(), 200.0, 1e-9);
  EXPECT_NEAR(g.u.front(), 1.98, 1e-3);
  EXPECT_LE(g.kkt_residual, 1e-8);
}

TEST(OracleTest, LongHorizonReference) {
  const auto g = collocation_solve(reference_bc(20), Limits{-6, 1.4, 0, 21}, 4000);
  EXPECT_NEAR(g.cost, 0.867, 1e-3 * 0.867);
  EXPECT_NEAR(g.u.front(), -0.51, 1e-3);
}

TEST(OracleTest, ConstrainedReferences) {
  const auto s = collocation_solve(reference_bc(10), Limits{-kInf, 5, 0, 21}, 4000);
  EXPECT_NEAR(s.cost, 9.75502222222222, 1e-3 * 9.755);
  const auto c = collocation_solve(reference_bc(10), Limits{-kInf, 1.4, 0, kInf}, 4000);
  EXPECT_NEAR(c.cost, 7.09494300737797, 1e-3 * 7.095);
  const auto b = collocation_solve(BoundaryConditions{0, 10, 0, 185, 13.4},
                                   Limits{-6, 1.4, 0, 21}, 4000);
  EXPECT_NEAR(b.cost, 3.90606930862931, 1e-3 * 3.906);
}

TEST(OracleTest, RespectsBox) {
  const Limits lim{-6, 1.4, 0, 21};
  const auto g = collocation_solve(BoundaryConditions{0, 10, 0, 185, 13.4}, lim, 2000);
  for (double v : g.v) {
    EXPECT_LE(v, lim.v_max + 1e-9);
    EXPECT_GE(v, lim.v_min - 1e-9);
  }
  for (double u : g.u) {
    EXPECT_LE(u, lim.u_max + 1e-7);
    EXPECT_GE(u, lim.u_min - 1e-7);
  }
  const auto act = oracle_active_set(g);
  EXPECT_TRUE(act.state_max_active);
  EXPECT_TRUE(act.control_max_active);
  EXPECT_FALSE(act.any_min());
}

TEST(OracleTest, DetectsInfeasibility) {
  EXPECT_THROW(collocation_solve(reference_bc(10), Limits{-6, 1.4, 0, 21}, 4000),
               InfeasibleError);
  EXPECT_THROW(collocation_solve(reference_bc(10), Limits{-6, 1.4, 0, 13}, 4000),
               InfeasibleError);
}

TEST(OracleTest, RejectsSmallGrid) {
  EXPECT_THROW(collocation_solve(reference_bc(10), Limits{}, 99), std::invalid_argument);
}

TEST(OracleTest, MeshRefinementShrinksGap) {
  const BoundaryConditions bc{0, 10, 0, 185, 13.4};
  const Limits lim{-6, 1.4, 0, 21};
  const Trajectory traj = solve(bc, lim).trajectory;
  const auto coarse = compare(traj, collocation_solve(bc, lim, 100));
  const auto fine = compare(traj, collocation_solve(bc, lim, 4000));
  EXPECT_GT(coarse.cost_gap, fine.cost_gap);
  EXPECT_GT(coarse.max_dv, fine.max_dv);
  EXPECT_TRUE(fine.within_tolerance());
}

TEST(CompareTest, SelfComparisonIsExact) {
  const Trajectory traj = solve(BoundaryConditions{0, 10, 0, 185, 13.4},
                                Limits{-6, 1.4, 0, 21})
                              .trajectory;
  const auto r = compare(traj, sample_on_grid(traj, 1000));
  EXPECT_EQ(r.max_dv, 0.0);
  EXPECT_EQ(r.max_dp, 0.0);
  EXPECT_EQ(r.cost_gap, 0.0);
}

TEST(CompareTest, FlagsDisagreement) {
  const auto bc = reference_bc(10);
  const Trajectory wrong = unconstrained_trajectory(bc, Limits{-kInf, 5, 0, 21});
  const auto r = compare(wrong, collocation_solve(bc, Limits{-kInf, 5, 0, 21}, 1000));
  EXPECT_FALSE(r.within_tolerance());
  EXPECT_FALSE(r.active_set_agree);
}

TEST(OracleTest, Deterministic) {
  const BoundaryConditions bc{0, 10, 0, 185, 13.4};
  const auto a = collocation_solve(bc, Limits{-6, 1.4, 0, 21}, 1500);
  const auto b = collocation_solve(bc, Limits{-6, 1.4, 0, 21}, 1500);
  EXPECT_EQ(a.v, b.v);
  EXPECT_EQ(a.iterations, b.iterations);
}

}  // namespace
}  // namespace cavocp
