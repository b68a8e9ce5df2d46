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

// Direct-transcription reference solver.
//
// The horizon is split into N equal steps with piecewise-constant
// acceleration u_k, so speed is piecewise linear and the trapezoidal position
// update is exact. The decision variables are the node speeds v_1..v_N (v_0 is
// fixed), which turns the problem into
//
//   min  sum_k (v_{k+1} - v_k)^2 / (2 dt)
//   s.t. v_min <= v_k <= v_max,  u_min <= (v_{k+1} - v_k) / dt <= u_max,
//        dt (v_0/2 + v_1 + ... + v_{N-1} + v_N/2) = pm - p0
//
// with free v_N. The Hessian and every inequality row touch at most two
// neighbouring nodes, so each interior-point Newton step is a tridiagonal
// solve bordered by the single equality row.

#ifndef CAVOCP_ORACLE_HPP_
#define CAVOCP_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "cavocp/activation.hpp"
#include "cavocp/constrained.hpp"
#include "cavocp/core.hpp"

namespace cavocp {

struct GridSolution {
  BoundaryConditions bc;
  Limits limits;
  std::size_t n = 0;
  double dt = 0.0;
  std::vector<double> u;  // n entries, constant on [t_k, t_k+1)
  std::vector<double> v;  // n + 1 node speeds
  std::vector<double> p;  // n + 1 node positions
  double cost = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;

  double time(std::size_t k) const {
    return k == n ? bc.tm : bc.t0 + dt * static_cast<double>(k);
  }
};

struct OracleOptions {
  int max_iterations = 200;
  double tolerance = 1e-8;
  // Mean complementarity target. Rows pinned only briefly carry tiny
  // multipliers, so their slack is mu / z and needs a much smaller mu.
  double complementarity = 1e-13;
};

inline constexpr std::size_t kMinGrid = 100;

namespace detail {

// Inequality row  ci * x[i] + cj * x[j] <= h  (j < 0 for single-variable rows).
struct IneqRow {
  std::size_t i = 0;
  long j = -1;
  double ci = 0.0;
  double cj = 0.0;
  double h = 0.0;
};

// Distance covered by the greedy extreme profile on the grid. It bounds every
// admissible discrete profile because speed is pointwise extremal.
inline double greedy_distance(double v0, double dt, std::size_t n, double u,
                              double v_bound, bool upper) {
  double v = v0;
  double dist = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double next = std::isfinite(u) ? v + u * dt : v_bound;
    next = upper ? std::min(next, v_bound) : std::max(next, v_bound);
    dist += 0.5 * dt * (v + next);
    v = next;
  }
  return dist;
}

}  // namespace detail

inline GridSolution collocation_solve(const BoundaryConditions& bc,
                                      const Limits& limits, std::size_t n,
                                      OracleOptions opts = {}) {
  bc.validate();
  limits.validate();
  if (n < kMinGrid) throw std::invalid_argument("grid size must be >= 100");
  const double T = bc.horizon();
  const double D = bc.distance();
  const double dt = T / static_cast<double>(n);
  const double v0 = bc.v0;

  if (v0 > limits.v_max || v0 < limits.v_min) {
    throw InfeasibleError("entry speed outside [v_min, v_max]");
  }
  const double reach_max =
      detail::greedy_distance(v0, dt, n, limits.u_max, limits.v_max, true);
  const double reach_min =
      detail::greedy_distance(v0, dt, n, limits.u_min, limits.v_min, false);
  if (!(reach_min < D && D < reach_max)) {
    throw InfeasibleError("grid problem infeasible: reachable distance [" +
                          detail::fmt(reach_min) + ", " +
                          detail::fmt(reach_max) + "]");
  }

  // Scaling: the objective is divided by dt and acceleration rows are
  // written as speed increments, so that multipliers of active rows stay
  // O(1) as the grid is refined. Otherwise a small complementarity gap still
  // leaves visible slack on rows that should be tight.
  std::vector<detail::IneqRow> rows;
  const double inv_dt = 1.0 / dt;
  const double inv_dt2 = inv_dt * inv_dt;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::isfinite(limits.v_max)) rows.push_back({k, -1, 1.0, 0.0, limits.v_max});
    rows.push_back({k, -1, -1.0, 0.0, -limits.v_min});
    const long prev = k == 0 ? -1 : static_cast<long>(k) - 1;
    const double carry = k == 0 ? v0 : 0.0;
    if (std::isfinite(limits.u_max)) {
      rows.push_back({k, prev, 1.0, prev < 0 ? 0.0 : -1.0, limits.u_max * dt + carry});
    }
    if (std::isfinite(limits.u_min)) {
      rows.push_back({k, prev, -1.0, prev < 0 ? 0.0 : 1.0, -limits.u_min * dt - carry});
    }
  }
  const std::size_t m = rows.size();

  // Equality row scaled by 1/T.
  Eigen::VectorXd e = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n),
                                                1.0 / static_cast<double>(n));
  e(static_cast<Eigen::Index>(n) - 1) *= 0.5;
  const double beta = (D - 0.5 * dt * v0) / T;

  auto hess_times = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd out(x.size());
    const Eigen::Index N = x.size();
    for (Eigen::Index k = 0; k < N; ++k) {
      double diag = (k + 1 < N ? 2.0 : 1.0) * x(k);
      if (k > 0) diag -= x(k - 1);
      if (k + 1 < N) diag -= x(k + 1);
      out(k) = diag * inv_dt2;
    }
    return out;
  };
  auto g_times = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    for (std::size_t r = 0; r < m; ++r) {
      const auto& row = rows[r];
      double val = row.ci * x(static_cast<Eigen::Index>(row.i));
      if (row.j >= 0) val += row.cj * x(row.j);
      out(static_cast<Eigen::Index>(r)) = val;
    }
  };
  auto gt_times = [&](const Eigen::VectorXd& y, Eigen::VectorXd& out) {
    out.setZero();
    for (std::size_t r = 0; r < m; ++r) {
      const auto& row = rows[r];
      const double yr = y(static_cast<Eigen::Index>(r));
      out(static_cast<Eigen::Index>(row.i)) += row.ci * yr;
      if (row.j >= 0) out(row.j) += row.cj * yr;
    }
  };

  const auto N = static_cast<Eigen::Index>(n);
  const auto M = static_cast<Eigen::Index>(m);
  Eigen::VectorXd h(M);
  for (std::size_t r = 0; r < m; ++r) h(static_cast<Eigen::Index>(r)) = rows[r].h;
  Eigen::VectorXd grad0 = Eigen::VectorXd::Zero(N);
  grad0(0) = -v0 * inv_dt2;

  double start = std::clamp(D / T, limits.v_min, limits.v_max);
  if (!std::isfinite(start)) start = v0;
  Eigen::VectorXd x = Eigen::VectorXd::Constant(N, start);
  Eigen::VectorXd gx(M);
  g_times(x, gx);
  Eigen::VectorXd s = (h - gx).cwiseMax(1.0);
  Eigen::VectorXd z = Eigen::VectorXd::Ones(M);
  double y = 0.0;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::SparseMatrix<double> K(N, N);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(3 * N));
  bool analyzed = false;

  Eigen::VectorXd rd(N), ri(M), tmp_n(N), tmp_m(M);
  double rp = 0.0;
  double kkt = std::numeric_limits<double>::infinity();
  int iter = 0;
  const double primal_tol = 1e-2 * opts.tolerance;

  for (; iter < opts.max_iterations; ++iter) {
    gt_times(z, tmp_n);
    rd = hess_times(x) + grad0 + e * y + tmp_n;
    rp = e.dot(x) - beta;
    g_times(x, gx);
    ri = gx + s - h;
    const double mu = s.dot(z) / static_cast<double>(m);
    // Dual residual reported in unscaled units.
    kkt = std::max({dt * rd.lpNorm<Eigen::Infinity>(), mu});
    const double primal = std::max(std::abs(rp), ri.lpNorm<Eigen::Infinity>());
    if (kkt <= opts.tolerance && mu <= opts.complementarity && primal <= primal_tol) break;

    const Eigen::VectorXd w = z.cwiseQuotient(s);
    std::vector<double> diag(n, 0.0), off(n, 0.0);  // off[k] couples k, k-1
    for (std::size_t k = 0; k < n; ++k) {
      diag[k] = (k + 1 < n ? 2.0 : 1.0) * inv_dt2;
      if (k > 0) off[k] = -inv_dt2;
    }
    for (std::size_t r = 0; r < m; ++r) {
      const auto& row = rows[r];
      const double wr = w(static_cast<Eigen::Index>(r));
      diag[row.i] += wr * row.ci * row.ci;
      if (row.j >= 0) {
        diag[static_cast<std::size_t>(row.j)] += wr * row.cj * row.cj;
        off[row.i] += wr * row.ci * row.cj;  // j == i - 1
      }
    }
    trips.clear();
    for (std::size_t k = 0; k < n; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      trips.emplace_back(kk, kk, diag[k]);
      if (k > 0) {
        trips.emplace_back(kk, kk - 1, off[k]);
        trips.emplace_back(kk - 1, kk, off[k]);
      }
    }
    K.setFromTriplets(trips.begin(), trips.end());
    if (!analyzed) {
      ldlt.analyzePattern(K);
      analyzed = true;
    }
    ldlt.factorize(K);
    if (ldlt.info() != Eigen::Success) {
      throw std::runtime_error("oracle Newton matrix factorization failed");
    }
    const Eigen::VectorXd q = ldlt.solve(e);
    const double eq = e.dot(q);

    auto newton = [&](const Eigen::VectorXd& rsz, Eigen::VectorXd& dx,
                      double& dy, Eigen::VectorXd& ds, Eigen::VectorXd& dz) {
      tmp_m = (-rsz + z.cwiseProduct(ri)).cwiseQuotient(s);
      gt_times(tmp_m, tmp_n);
      const Eigen::VectorXd pv = ldlt.solve(-rd - tmp_n);
      dy = (e.dot(pv) + rp) / eq;
      dx = pv - q * dy;
      g_times(dx, tmp_m);
      ds = -ri - tmp_m;
      dz = (-rsz - z.cwiseProduct(ds)).cwiseQuotient(s);
    };
    auto max_step = [&](const Eigen::VectorXd& ds, const Eigen::VectorXd& dz) {
      double a = 1.0;
      for (Eigen::Index r = 0; r < M; ++r) {
        if (ds(r) < 0.0) a = std::min(a, -s(r) / ds(r));
        if (dz(r) < 0.0) a = std::min(a, -z(r) / dz(r));
      }
      return a;
    };

    Eigen::VectorXd dx_a(N), ds_a(M), dz_a(M);
    double dy_a = 0.0;
    newton(s.cwiseProduct(z), dx_a, dy_a, ds_a, dz_a);
    const double alpha_a = max_step(ds_a, dz_a);
    const double mu_a =
        (s + alpha_a * ds_a).dot(z + alpha_a * dz_a) / static_cast<double>(m);
    const double sigma = std::pow(mu_a / mu, 3.0);

    Eigen::VectorXd dx(N), ds(M), dz(M);
    double dy = 0.0;
    const Eigen::VectorXd rsz = s.cwiseProduct(z) + ds_a.cwiseProduct(dz_a) -
                                Eigen::VectorXd::Constant(M, sigma * mu);
    newton(rsz, dx, dy, ds, dz);
    const double alpha = std::min(1.0, 0.99 * max_step(ds, dz));
    x += alpha * dx;
    y += alpha * dy;
    s += alpha * ds;
    z += alpha * dz;
  }
  if (iter >= opts.max_iterations) {
    throw std::runtime_error("oracle did not converge (kkt residual " +
                             detail::fmt(kkt) + ")");
  }

  GridSolution sol;
  sol.bc = bc;
  sol.limits = limits;
  sol.n = n;
  sol.dt = dt;
  sol.kkt_residual = kkt;
  sol.iterations = iter;
  sol.v.resize(n + 1);
  sol.p.resize(n + 1);
  sol.u.resize(n);
  sol.v[0] = v0;
  for (std::size_t k = 0; k < n; ++k) sol.v[k + 1] = x(static_cast<Eigen::Index>(k));
  sol.p[0] = bc.p0;
  for (std::size_t k = 0; k < n; ++k) {
    sol.u[k] = (sol.v[k + 1] - sol.v[k]) * inv_dt;
    sol.p[k + 1] = sol.p[k] + 0.5 * dt * (sol.v[k] + sol.v[k + 1]);
    sol.cost += 0.5 * sol.u[k] * sol.u[k] * dt;
  }
  return sol;
}

// The analytic trajectory sampled on the oracle's grid; u_k is the interval
// average, the cost is the exact analytic energy.
inline GridSolution sample_on_grid(const Trajectory& traj, std::size_t n) {
  GridSolution g;
  g.bc = traj.bc();
  g.limits = traj.limits();
  g.n = n;
  g.dt = g.bc.horizon() / static_cast<double>(n);
  g.v.resize(n + 1);
  g.p.resize(n + 1);
  g.u.resize(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const State st = eval(traj, g.time(k));
    g.v[k] = st.v;
    g.p[k] = st.p;
  }
  for (std::size_t k = 0; k < n; ++k) g.u[k] = (g.v[k + 1] - g.v[k]) / g.dt;
  g.cost = cost(traj);
  return g;
}

inline constexpr double kSaturationTol = 1e-4;

// Bounds the grid solution touches within tol.
inline ActivationPlan oracle_active_set(const GridSolution& sol,
                                        double tol = kSaturationTol) {
  ActivationPlan p;
  p.direction = classify(sol.bc);
  const auto& lim = sol.limits;
  for (std::size_t k = 1; k < sol.v.size(); ++k) {
    if (sol.v[k] >= lim.v_max - tol) p.state_max_active = true;
    if (sol.v[k] <= lim.v_min + tol) p.state_min_active = true;
  }
  for (double u : sol.u) {
    if (u >= lim.u_max - tol) p.control_max_active = true;
    if (u <= lim.u_min + tol) p.control_min_active = true;
  }
  const bool st = p.state_max_active || p.state_min_active;
  const bool ct = p.control_max_active || p.control_min_active;
  p.plan_case = st && ct ? PlanCase::Both
                : st     ? PlanCase::StateOnly
                : ct     ? PlanCase::ControlOnly
                         : PlanCase::Unconstrained;
  return p;
}

inline bool same_active_set(const ActivationPlan& a, const ActivationPlan& b) {
  return a.state_max_active == b.state_max_active &&
         a.state_min_active == b.state_min_active &&
         a.control_max_active == b.control_max_active &&
         a.control_min_active == b.control_min_active;
}

struct ComparisonTolerances {
  double cost_gap = 5e-3;  // relative
  double max_dv = 2e-2;    // m/s
  double saturation = kSaturationTol;
};

struct ComparisonReport {
  double max_dv = 0.0;
  double max_dp = 0.0;
  double analytic_cost = 0.0;
  double oracle_cost = 0.0;
  // (oracle - analytic) / analytic; absolute difference when the analytic
  // cost vanishes.
  double cost_gap = 0.0;
  ActivationPlan analytic_active;
  ActivationPlan oracle_active;
  bool active_set_agree = false;
  std::vector<std::string> flags;

  bool within_tolerance() const { return flags.empty(); }
};

inline ComparisonReport compare(const Trajectory& traj, const GridSolution& sol,
                                const ComparisonTolerances& tol = {}) {
  ComparisonReport r;
  for (std::size_t k = 0; k <= sol.n; ++k) {
    const State st = eval(traj, sol.time(k));
    r.max_dv = std::max(r.max_dv, std::abs(st.v - sol.v[k]));
    r.max_dp = std::max(r.max_dp, std::abs(st.p - sol.p[k]));
  }
  r.analytic_cost = cost(traj);
  r.oracle_cost = sol.cost;
  r.cost_gap = r.analytic_cost > 1e-12
                   ? (r.oracle_cost - r.analytic_cost) / r.analytic_cost
                   : r.oracle_cost - r.analytic_cost;
  r.analytic_active = active_set(traj);
  r.oracle_active = oracle_active_set(sol, tol.saturation);
  r.active_set_agree = same_active_set(r.analytic_active, r.oracle_active);

  if (std::abs(r.cost_gap) > tol.cost_gap) {
    r.flags.push_back("cost_gap=" + detail::fmt(r.cost_gap));
  }
  if (r.max_dv > tol.max_dv) r.flags.push_back("max_dv=" + detail::fmt(r.max_dv));
  if (!r.active_set_agree) r.flags.push_back("active_set_mismatch");
  return r;
}

}  // namespace cavocp

#endif  // CAVOCP_ORACLE_HPP_
