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

#include "cavocp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "support/instances.hpp"

namespace cavocp {
namespace {

const Limits kDefault{-6.0, 1.4, 0.0, 21.0};
const Geometry kGeom{200.0, 30.0};

VehicleSpec vehicle(int id, Approach a, Movement m, double t0, double tm,
                    double v0 = 13.4) {
  return {id, a, m, t0, v0, tm};
}

// p(t) of the unconstrained 200 m / 13.4 m/s / 20 s profile, entered at t0.
double reference_position(double t, double t0) {
  const double s = t - t0;
  return 13.4 * s - 0.255 * s * s + 0.00425 * s * s * s;
}

TEST(PlanAllTest, SingleVehicleMatchesSolve) {
  const auto plans =
      plan_all({vehicle(1, Approach::North, Movement::Straight, 0, 20)}, kGeom, kDefault);
  ASSERT_EQ(plans.size(), 1u);
  ASSERT_TRUE(plans[0].ok());
  const Trajectory ref = solve(testing::reference_bc(20), kDefault).trajectory;
  for (double t : uniform_times(0, 20, 101)) {
    EXPECT_EQ(eval(*plans[0].trajectory, t).p, eval(ref, t).p);
  }
}

TEST(PlanAllTest, FailuresArePerVehicle) {
  const auto plans = plan_all({vehicle(1, Approach::North, Movement::Straight, 0, 20),
                               vehicle(2, Approach::North, Movement::Straight, 3, 13)},
                              kGeom, kDefault);
  ASSERT_EQ(plans.size(), 2u);
  EXPECT_TRUE(plans[0].ok());
  EXPECT_FALSE(plans[1].ok());
  EXPECT_FALSE(plans[1].error.empty());
}

TEST(PlanAllTest, DuplicateIdsThrow) {
  EXPECT_THROW(plan_all({vehicle(1, Approach::North, Movement::Straight, 0, 20),
                         vehicle(1, Approach::East, Movement::Left, 0, 20)},
                        kGeom, kDefault),
               std::invalid_argument);
}

TEST(PlanAllTest, PermutationInvariant) {
  std::vector<VehicleSpec> specs = {vehicle(1, Approach::North, Movement::Straight, 0, 20),
                                    vehicle(2, Approach::East, Movement::Left, 1, 19),
                                    vehicle(3, Approach::West, Movement::Right, 2, 24)};
  const auto a = plan_all(specs, kGeom, kDefault);
  std::reverse(specs.begin(), specs.end());
  const auto b = plan_all(specs, kGeom, kDefault);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& x = a[i];
    const auto& y = b[2 - i];
    ASSERT_EQ(x.id, y.id);
    EXPECT_EQ(cost(*x.trajectory), cost(*y.trajectory));
  }
}

TEST(RearEndTest, ConstantOffsetIsSafe) {
  const Trajectory lead = solve({0, 20, 0, 200, 13.4}, kDefault).trajectory;
  const Trajectory follow = solve({0, 20, -50, 150, 13.4}, kDefault).trajectory;
  EXPECT_TRUE(check_rear_end(lead, follow, 5.0, 0.5).empty());
}

TEST(RearEndTest, OvertakeIsReported) {
  const Trajectory lead = solve({0, 20, 0, 200, 13.4}, kDefault).trajectory;
  const Trajectory follow = solve({0, 12, -10, 200, 17.0}, kDefault).trajectory;
  const auto v = check_rear_end(lead, follow, 5.0, 0.5);
  ASSERT_FALSE(v.empty());
  EXPECT_LT(v.back().min_gap, 0.0);
  EXPECT_NEAR(v.back().interval.hi, 12.0, 1e-12);
}

TEST(RearEndTest, StaggeredReferencePairMatchesClosedForm) {
  const auto plans = plan_all({vehicle(1, Approach::South, Movement::Straight, 0, 20),
                               vehicle(2, Approach::South, Movement::Straight, 3, 23)},
                              kGeom, kDefault);
  const Trajectory& lead = *plans[0].trajectory;
  const Trajectory& follow = *plans[1].trajectory;
  for (double headway : {0.5, 3.0}) {
    double min_margin = kInf;
    for (double t : uniform_times(3.0, 20.0, 1000)) {
      const double gap = reference_position(t, 0.0) - reference_position(t, 3.0);
      const double s = t - 3.0;
      const double v = 13.4 - 0.51 * s + 0.01275 * s * s;
      min_margin = std::min(min_margin, gap - (5.0 + headway * v));
    }
    const auto viol = check_rear_end(lead, follow, 5.0, headway);
    EXPECT_EQ(viol.empty(), min_margin >= 0.0) << headway;
    if (!viol.empty()) {
      double got = kInf;
      for (const auto& r : viol) got = std::min(got, r.min_margin);
      EXPECT_NEAR(got, min_margin, 1e-9);
    }
  }
  EXPECT_TRUE(check_rear_end(lead, follow, 5.0, 0.5).empty());
  EXPECT_FALSE(check_rear_end(lead, follow, 5.0, 3.0).empty());
}

TEST(RearEndTest, FinerGridAgrees) {
  const auto plans = plan_all({vehicle(1, Approach::South, Movement::Straight, 0, 20),
                               vehicle(2, Approach::South, Movement::Straight, 3, 23)},
                              kGeom, kDefault);
  const Trajectory& lead = *plans[0].trajectory;
  const Trajectory& follow = *plans[1].trajectory;
  for (double headway : {0.5, 2.0, 3.0}) {
    const auto coarse = check_rear_end(lead, follow, 5.0, headway, 1000);
    const auto fine = check_rear_end(lead, follow, 5.0, headway, 10000);
    ASSERT_EQ(coarse.size(), fine.size()) << headway;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      EXPECT_NEAR(coarse[i].interval.lo, fine[i].interval.lo, 2 * 17.0 / 999);
      EXPECT_NEAR(coarse[i].interval.hi, fine[i].interval.hi, 2 * 17.0 / 999);
    }
  }
}

TEST(LateralTest, EqualMergingTimesOnCrossingPathsConflict) {
  const std::vector<VehicleSpec> specs = {
      vehicle(1, Approach::North, Movement::Straight, 0, 20),
      vehicle(2, Approach::East, Movement::Straight, 0, 20)};
  const auto plans = plan_all(specs, kGeom, kDefault);
  const auto report = verify_scenario(specs, plans, kGeom);
  ASSERT_EQ(report.lateral_conflicts.size(), 1u);
  EXPECT_EQ(report.lateral_conflicts[0].first, 1);
  EXPECT_EQ(report.lateral_conflicts[0].second, 2);
  EXPECT_FALSE(report.safe());
}

TEST(LateralTest, Symmetric) {
  std::vector<VehicleSpec> specs = {vehicle(4, Approach::West, Movement::Left, 0, 20),
                                    vehicle(2, Approach::South, Movement::Straight, 0.5, 20.5)};
  auto plans = plan_all(specs, kGeom, kDefault);
  const auto a = verify_scenario(specs, plans, kGeom);
  std::swap(specs[0], specs[1]);
  std::swap(plans[0], plans[1]);
  const auto b = verify_scenario(specs, plans, kGeom);
  ASSERT_EQ(a.lateral_conflicts.size(), 1u);
  ASSERT_EQ(b.lateral_conflicts.size(), 1u);
  EXPECT_EQ(a.lateral_conflicts[0].first, b.lateral_conflicts[0].first);
  EXPECT_EQ(a.lateral_conflicts[0].overlap.lo, b.lateral_conflicts[0].overlap.lo);
  EXPECT_EQ(a.lateral_conflicts[0].overlap.hi, b.lateral_conflicts[0].overlap.hi);
}

TEST(LateralTest, NonConflictingMovements) {
  const std::vector<VehicleSpec> specs = {
      vehicle(1, Approach::North, Movement::Straight, 0, 20),
      vehicle(2, Approach::South, Movement::Straight, 0, 20),
      vehicle(3, Approach::East, Movement::Right, 0, 20),
      vehicle(4, Approach::West, Movement::Right, 0, 20)};
  EXPECT_FALSE(paths_conflict(specs[0], specs[1]));
  EXPECT_FALSE(paths_conflict(specs[2], specs[3]));
  EXPECT_TRUE(paths_conflict(specs[0], specs[2]));
  const auto plans = plan_all({specs[0], specs[1]}, kGeom, kDefault);
  EXPECT_TRUE(verify_scenario({specs[0], specs[1]}, plans, kGeom).safe());
}

TEST(LateralTest, OccupancyAtSpeedLimit) {
  // 185 m in 10 s ends on the 21 m/s limit: occupancy 30 / 21 s.
  const Geometry g{185.0, 30.0};
  const double occ = 30.0 / 21.0;
  EXPECT_NEAR(occ, 1.43, 5e-3);
  for (double gap : {occ - 0.01, occ + 0.01}) {
    const std::vector<VehicleSpec> specs = {
        vehicle(1, Approach::North, Movement::Left, 0, 10),
        vehicle(2, Approach::East, Movement::Straight, gap, 10 + gap)};
    const auto plans = plan_all(specs, g, kDefault);
    ASSERT_TRUE(plans[0].ok() && plans[1].ok());
    EXPECT_NEAR(occupancy(*plans[0].trajectory, g).hi - 10.0, occ, 1e-12);
    const auto conflicts = check_lateral(
        specs, {plans[0].trajectory, plans[1].trajectory}, g);
    EXPECT_EQ(conflicts.size(), gap < occ ? 1u : 0u) << gap;
  }
}

TEST(LateralTest, StoppedVehicleIsDegenerate) {
  PolyArc arc;
  arc.t_start = 0;
  arc.t_end = 10;
  const Trajectory parked({arc}, BoundaryConditions{0, 10, 0, 1, 0}, Limits{});
  EXPECT_THROW(occupancy(parked, kGeom), DegenerateError);
}

TEST(VerifyScenarioTest, RearEndOnlyWithinLane) {
  const std::vector<VehicleSpec> specs = {
      vehicle(1, Approach::North, Movement::Straight, 0, 20),
      vehicle(2, Approach::North, Movement::Straight, 0.2, 20.2),
      vehicle(3, Approach::South, Movement::Straight, 0.1, 20.1)};
  const auto report = verify_scenario(specs, plan_all(specs, kGeom, kDefault), kGeom);
  ASSERT_FALSE(report.rear_end_violations.empty());
  for (const auto& v : report.rear_end_violations) {
    EXPECT_EQ(v.leader, 1);
    EXPECT_EQ(v.follower, 2);
  }
  EXPECT_TRUE(report.lateral_conflicts.empty());
}

}  // namespace
}  // namespace cavocp
