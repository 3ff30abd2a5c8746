#pragma once

#include <array>
#include <cmath>
#include <string>

#include "afsec/error.hpp"
#include "afsec/numerics/tolerances.hpp"

namespace afsec::numerics {

/// Monic quartic x^4 + c3 x^3 + c2 x^2 + c1 x + c0.
struct QuarticCoeffs {
  double c3 = 0.0;
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  double operator()(double x) const { return (((x + c3) * x + c2) * x + c1) * x + c0; }
  double derivative(double x) const { return ((4.0 * x + 3.0 * c3) * x + 2.0 * c2) * x + c1; }
};

/// Sign variations in (1, c3, c2, c1, c0), zeros skipped.
inline int sign_variations(const QuarticCoeffs& q) {
  const std::array<double, 5> seq{1.0, q.c3, q.c2, q.c1, q.c0};
  int changes = 0;
  double previous = seq[0];
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (seq[i] == 0.0) continue;
    if ((seq[i] > 0.0) != (previous > 0.0)) ++changes;
    previous = seq[i];
  }
  return changes;
}

/// The unique positive root of a quartic whose coefficients change sign exactly
/// once with c0 < 0 (Descartes). Doubling bracket, bisection, then Newton polish.
inline double positive_quartic_root(const QuarticCoeffs& q,
                                    const Tolerances& tol = kDefaultTolerances) {
  if (!std::isfinite(q.c3) || !std::isfinite(q.c2) || !std::isfinite(q.c1) ||
      !std::isfinite(q.c0)) {
    throw Error(ErrorKind::sign_pattern, "quartic coefficients must be finite");
  }
  if (!(q.c0 < 0.0) || sign_variations(q) != 1) {
    throw Error(ErrorKind::sign_pattern,
                "quartic has " + std::to_string(sign_variations(q)) +
                    " sign variations (c0 = " + std::to_string(q.c0) +
                    "); a unique positive root needs exactly one with c0 < 0");
  }

  double lo = 0.0;
  double hi = 1.0;
  while (q(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw Error(ErrorKind::numerical, "quartic root bracket overflowed");
  }

  const double width = tol.quartic_bracket_width;
  while (hi - lo > width * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (q(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  double root = 0.5 * (lo + hi);
  for (int i = 0; i < tol.quartic_newton_steps; ++i) {
    const double slope = q.derivative(root);
    if (slope == 0.0) break;
    const double next = root - q(root) / slope;
    // stay inside the verified bracket
    if (!(next > 0.0) || std::abs(next - root) > (hi - lo) + 1e-15 * root) break;
    if (std::abs(q(next)) >= std::abs(q(root))) break;
    root = next;
  }
  return root;
}

}  // namespace afsec::numerics
