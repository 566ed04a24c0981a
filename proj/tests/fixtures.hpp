#pragma once

// Ground states shared by several test cases, solved once per process.

#include "afnls/ground_state.hpp"

namespace fixture {

inline afnls::ModelParams params(double s, double p, double alpha = 1, double omega = 0,
                                 double c = 1) {
  afnls::ModelParams m;
  m.s = s;
  m.p = p;
  m.alpha = alpha;
  m.omega = omega;
  m.c = c;
  return m;
}

inline afnls::SolverOptions tight() {
  afnls::SolverOptions o;
  o.tol = 1e-10;
  return o;
}

// alpha = 1, s = 1/2, p = 3.
inline const afnls::GroundStateResult& half_cubic() {
  static const auto r =
      afnls::solve_fixed_alpha(params(0.5, 3), afnls::build_grid(64, 512, 12, 64), tight());
  return r;
}

// alpha = 1, s = 1/2, p = 10/3.
inline const afnls::GroundStateResult& half_critical() {
  static const auto r = afnls::solve_fixed_alpha(
      params(0.5, 10.0 / 3), afnls::build_grid(64, 512, 12, 64), tight());
  return r;
}

// alpha = 1, s = 3/4, p = 4 and p = 5.
inline const afnls::GroundStateResult& three_quarter(double p) {
  static const auto r4 =
      afnls::solve_fixed_alpha(params(0.75, 4), afnls::build_grid(128, 512, 16, 32), tight());
  static const auto r5 =
      afnls::solve_fixed_alpha(params(0.75, 5), afnls::build_grid(128, 512, 16, 32), tight());
  return p == 4 ? r4 : r5;
}

}  // namespace fixture
