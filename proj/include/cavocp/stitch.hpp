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

// Algebraic stitching of unconstrained and pinned arcs.
//
// Unknowns are four polynomial coefficients per arc plus one switch time per
// junction. Equations, in canonical order:
//
//   1. initial position and speed on the first arc
//   2. arc-kind identities (a = 0, b = 0 or b = u_bound on pinned arcs)
//   3. position / speed continuity at each junction
//   4. junction control conditions: u = 0 on entry to a speed-pinned arc
//      (costates stay continuous, no jump), u = u_bound on exit from an
//      acceleration-pinned arc
//   5. u(tm) = 0 when the last arc is unconstrained (free terminal speed)
//   6. v = v_bound on entry to each speed-pinned arc
//   7. terminal position
//
// For fixed switch times the first 4 * arcs equations form a square linear
// system in the coefficients. The remaining (arcs - 1) equations are the
// closing residuals that pin down the switch times themselves.

#ifndef CAVOCP_STITCH_HPP_
#define CAVOCP_STITCH_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "cavocp/core.hpp"

namespace cavocp {

class StitchSystem {
 public:
  struct Equation {
    std::string label;
    Eigen::RowVectorXd row;
    double rhs = 0.0;
  };

  StitchSystem(std::vector<ArcKind> kinds, BoundaryConditions bc,
               Limits limits)
      : kinds_(std::move(kinds)), bc_(bc), limits_(limits) {
    if (kinds_.empty()) throw std::invalid_argument("no arcs to stitch");
    if (is_speed_pinned(kinds_.front())) {
      throw std::invalid_argument("first arc cannot ride the speed bound");
    }
    std::vector<double> probe(switch_count());
    for (std::size_t j = 0; j < probe.size(); ++j) {
      probe[j] = bc_.t0 + bc_.horizon() * static_cast<double>(j + 1) /
                              static_cast<double>(kinds_.size());
    }
    if (equations(probe).size() != unknown_count()) {
      throw std::invalid_argument("arc sequence is not a well-posed stitch");
    }
  }

  std::size_t arc_count() const { return kinds_.size(); }
  std::size_t switch_count() const { return kinds_.size() - 1; }
  std::size_t coefficient_count() const { return 4 * kinds_.size(); }
  std::size_t unknown_count() const {
    return coefficient_count() + switch_count();
  }
  const std::vector<ArcKind>& kinds() const { return kinds_; }

  std::vector<Equation> equations(std::span<const double> switch_times) const {
    check_times(switch_times);
    const std::size_t n = kinds_.size();
    const double T = bc_.horizon();
    auto local = [&](std::size_t j) { return switch_times[j] - bc_.t0; };

    std::vector<Equation> eqs;
    auto add = [&](std::string label, std::size_t arc,
                   std::array<double, 4> coef, double rhs) {
      Equation e{std::move(label), Eigen::RowVectorXd::Zero(coefficient_count()),
                 rhs};
      for (int i = 0; i < 4; ++i) e.row(4 * arc + i) = coef[i];
      eqs.push_back(std::move(e));
    };
    auto add_diff = [&](std::string label, std::size_t arc,
                        std::array<double, 4> coef) {
      add(std::move(label), arc, coef, 0.0);
      for (int i = 0; i < 4; ++i) eqs.back().row(4 * (arc + 1) + i) = -coef[i];
    };

    add("p(t0)", 0, p_row(0.0), bc_.p0);
    add("v(t0)", 0, v_row(0.0), bc_.v0);

    for (std::size_t k = 0; k < n; ++k) {
      if (is_speed_pinned(kinds_[k])) {
        add("a=0", k, {1, 0, 0, 0}, 0.0);
        add("b=0", k, {0, 1, 0, 0}, 0.0);
      } else if (is_accel_pinned(kinds_[k])) {
        add("a=0", k, {1, 0, 0, 0}, 0.0);
        add("b=u_bound", k, {0, 1, 0, 0}, control_bound(kinds_[k]));
      }
    }

    for (std::size_t j = 0; j + 1 < n; ++j) {
      add_diff("p continuity", j, p_row(local(j)));
      add_diff("v continuity", j, v_row(local(j)));
    }

    for (std::size_t j = 0; j + 1 < n; ++j) {
      const ArcKind before = kinds_[j];
      const ArcKind after = kinds_[j + 1];
      if (before == ArcKind::Unconstrained && is_speed_pinned(after)) {
        add("u=0 at speed entry", j, u_row(local(j)), 0.0);
      }
      if (is_accel_pinned(before) && after == ArcKind::Unconstrained) {
        add("u=u_bound at control exit", j + 1, u_row(local(j)),
            control_bound(before));
      }
    }

    if (kinds_.back() == ArcKind::Unconstrained) {
      add("u(tm)=0", n - 1, u_row(T), 0.0);
    }

    for (std::size_t j = 0; j + 1 < n; ++j) {
      if (is_speed_pinned(kinds_[j + 1])) {
        add("v=v_bound at speed entry", j, v_row(local(j)),
            pinned_speed(kinds_[j + 1]));
      }
    }

    add("p(tm)", n - 1, p_row(T), bc_.pm);
    return eqs;
  }

  // Coefficients from the square structural subsystem.
  std::vector<PolyArc> solve_coefficients(
      std::span<const double> switch_times) const {
    const auto eqs = equations(switch_times);
    const auto m = static_cast<Eigen::Index>(coefficient_count());
    Eigen::MatrixXd A(m, m);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      A.row(i) = eqs[static_cast<std::size_t>(i)].row;
      rhs(i) = eqs[static_cast<std::size_t>(i)].rhs;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) {
      throw DegenerateError("stitch subsystem is singular");
    }
    const Eigen::VectorXd x = lu.solve(rhs);

    std::vector<PolyArc> arcs(kinds_.size());
    for (std::size_t k = 0; k < kinds_.size(); ++k) {
      PolyArc& arc = arcs[k];
      arc.kind = kinds_[k];
      arc.origin = bc_.t0;
      arc.t_start = k == 0 ? bc_.t0 : switch_times[k - 1];
      arc.t_end = k + 1 == kinds_.size() ? bc_.tm : switch_times[k];
      const auto base = static_cast<Eigen::Index>(4 * k);
      arc.a = x(base);
      arc.b = x(base + 1);
      arc.c = x(base + 2);
      arc.d = x(base + 3);
      if (is_speed_pinned(arc.kind)) {
        arc.a = 0.0;
        arc.b = 0.0;
      } else if (is_accel_pinned(arc.kind)) {
        arc.a = 0.0;
        arc.b = control_bound(arc.kind);
      }
    }
    return arcs;
  }

  // Values of the closing equations (lhs - rhs) at the solved coefficients.
  std::vector<double> closing_residuals(
      std::span<const double> switch_times) const {
    const auto eqs = equations(switch_times);
    const auto arcs = solve_coefficients(switch_times);
    Eigen::VectorXd x(static_cast<Eigen::Index>(coefficient_count()));
    for (std::size_t k = 0; k < arcs.size(); ++k) {
      const auto base = static_cast<Eigen::Index>(4 * k);
      x(base) = arcs[k].a;
      x(base + 1) = arcs[k].b;
      x(base + 2) = arcs[k].c;
      x(base + 3) = arcs[k].d;
    }
    std::vector<double> out;
    for (std::size_t i = coefficient_count(); i < eqs.size(); ++i) {
      out.push_back(eqs[i].row.dot(x) - eqs[i].rhs);
    }
    return out;
  }

  Trajectory assemble(std::span<const double> switch_times) const {
    return Trajectory(solve_coefficients(switch_times), bc_, limits_,
                      std::vector<double>(switch_times.begin(),
                                          switch_times.end()));
  }

  // Switch times from the closing residuals by bracketed root finding, with
  // no use of the closed forms. One or two junctions only.
  std::vector<double> solve_switch_times_numerically(
      double time_tol = 1e-12) const {
    const double margin = 1e-7 * bc_.horizon();
    const double lo = bc_.t0 + margin;
    const double hi = bc_.tm - margin;
    // Residuals are undefined where the structural subsystem degenerates
    // (junctions pressed together).
    auto closing = [&](std::span<const double> t) -> std::optional<std::vector<double>> {
      try {
        return closing_residuals(t);
      } catch (const DegenerateError&) {
        return std::nullopt;
      } catch (const std::invalid_argument&) {
        return std::nullopt;
      }
    };
    if (switch_count() == 0) return {};
    if (switch_count() == 1) {
      auto f = [&](double tau) -> std::optional<double> {
        const double t[1] = {tau};
        const auto r = closing(t);
        if (!r) return std::nullopt;
        return r->back();
      };
      return {bracketed_root(f, lo, hi, time_tol, 400)};
    }
    if (switch_count() == 2 && is_accel_pinned(kinds_[0]) &&
        kinds_[1] == ArcKind::Unconstrained && is_speed_pinned(kinds_[2])) {
      // Inner: tau_s closing the speed equation for a given tau_c.
      auto inner = [&](double tau_c) -> std::optional<double> {
        auto g = [&](double tau_s) -> std::optional<double> {
          const double t[2] = {tau_c, tau_s};
          const auto r = closing(t);
          if (!r) return std::nullopt;
          return r->front();
        };
        if (!(tau_c + margin < hi)) return std::nullopt;
        try {
          return bracketed_root(g, tau_c + margin, hi, time_tol, 100);
        } catch (const InfeasibleError&) {
          return std::nullopt;
        }
      };
      auto outer = [&](double tau_c) -> std::optional<double> {
        const auto tau_s = inner(tau_c);
        if (!tau_s) return std::nullopt;
        const double t[2] = {tau_c, *tau_s};
        const auto r = closing(t);
        if (!r) return std::nullopt;
        return r->back();
      };
      const double tau_c = bracketed_root(outer, lo, hi, time_tol, 400);
      return {tau_c, *inner(tau_c)};
    }
    throw std::invalid_argument("numeric switch solve supports <= 2 junctions");
  }

 private:
  static std::array<double, 4> p_row(double s) {
    return {s * s * s / 6.0, 0.5 * s * s, s, 1.0};
  }
  static std::array<double, 4> v_row(double s) {
    return {0.5 * s * s, s, 1.0, 0.0};
  }
  static std::array<double, 4> u_row(double s) { return {s, 1.0, 0.0, 0.0}; }

  double control_bound(ArcKind k) const {
    return k == ArcKind::AccelPinnedMax ? limits_.u_max : limits_.u_min;
  }
  double pinned_speed(ArcKind k) const {
    return k == ArcKind::SpeedPinnedMax ? limits_.v_max : limits_.v_min;
  }

  void check_times(std::span<const double> ts) const {
    if (ts.size() != switch_count()) {
      throw std::invalid_argument("wrong number of switch times");
    }
    double prev = bc_.t0;
    for (double t : ts) {
      if (!(t > prev)) throw std::invalid_argument("switch times not increasing");
      prev = t;
    }
    if (!(bc_.tm > prev)) throw std::invalid_argument("switch time past tm");
  }

  template <class F>
  static double toms748(F&& f, double lo, double hi, double flo, double fhi,
                        double tol) {
    boost::uintmax_t iters = 200;
    auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
    const auto r =
        boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
    return 0.5 * (r.first + r.second);
  }

  // Scans [lo, hi] on a uniform grid for the first sign change between
  // adjacent points where f is defined, then refines.
  template <class F>
  static double bracketed_root(F&& f, double lo, double hi, double tol,
                               int scan) {
    bool have_prev = false;
    double prev_x = lo;
    double prev_f = 0.0;
    for (int i = 0; i <= scan; ++i) {
      const double x = lo + (hi - lo) * i / scan;
      const auto fx = f(x);
      if (fx && *fx == 0.0) return x;
      if (fx && have_prev && prev_f * (*fx) < 0.0) {
        auto g = [&](double t) {
          const auto v = f(t);
          if (!v) throw InfeasibleError("residual undefined inside bracket");
          return *v;
        };
        return toms748(g, prev_x, x, prev_f, *fx, tol);
      }
      have_prev = fx.has_value();
      if (fx) {
        prev_x = x;
        prev_f = *fx;
      }
    }
    throw InfeasibleError("no switch time in horizon");
  }

  std::vector<ArcKind> kinds_;
  BoundaryConditions bc_;
  Limits limits_;
};

}  // namespace cavocp

#endif  // CAVOCP_STITCH_HPP_
