#pragma once

namespace afsec::numerics {

/// Every tolerance used by the numeric kernels, with their defaults.
struct Tolerances {
  // positive_quartic_root
  double quartic_bracket_width = 1e-12;  // relative to max(1, root bracket)
  int quartic_newton_steps = 5;
  double quartic_residual = 1e-10;       // times max(1, |c0|)

  // solve_linear_qcqp (log barrier)
  double barrier_initial = 1.0;
  double barrier_growth = 10.0;
  double barrier_gap = 1e-9;             // constraints / barrier parameter
  double newton_decrement = 1e-12;       // lambda^2 / 2 stopping level
  double armijo = 0.01;
  double backtrack = 0.5;
  int max_newton_steps = 200;            // per centering step
  double stalled_decrement = 1e-3;       // accepted once steps fall below rounding

  // symmetric-matrix checks
  double symmetry = 1e-12;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace afsec::numerics
