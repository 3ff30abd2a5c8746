#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "afsec/error.hpp"

namespace afsec::numerics {

/// (sqrt(5) - 1) / 2
inline constexpr double kGoldenRatioConjugate = 0.6180339887498948482;

/// ceil(2.08 ln(range / delta)), floored at 0.
inline int iteration_bound(double range, double delta) {
  if (!(range > 0.0) || !(delta > 0.0)) {
    throw Error(ErrorKind::invalid_input, "iteration_bound needs positive range and delta");
  }
  const double n = 2.08 * std::log(range / delta);
  return n <= 0.0 ? 0 : static_cast<int>(std::ceil(n));
}

struct GoldenSectionConfig {
  double eta_lo = 0.0;
  double eta_hi = 1.0;
  double delta = 1e-4;  // absolute bracket tolerance
  int max_iter = 0;     // bracket shrinks allowed

  /// Config whose iteration budget satisfies the 2.08 ln(range/delta) bound.
  static GoldenSectionConfig with_bound(double lo, double hi, double delta) {
    GoldenSectionConfig cfg{lo, hi, delta, 0};
    cfg.max_iter = iteration_bound(hi - lo, delta) + 1;
    return cfg;
  }

  void check() const {
    if (!(eta_lo >= 0.0) || !(eta_hi > eta_lo)) {
      throw Error(ErrorKind::invalid_input, "golden section needs 0 <= eta_lo < eta_hi");
    }
    if (!(delta > 0.0)) throw Error(ErrorKind::invalid_input, "golden section needs delta > 0");
    if (max_iter < 0) throw Error(ErrorKind::invalid_input, "golden section needs max_iter >= 0");
  }
};

struct GoldenSectionSample {
  double eta = 0.0;
  double value = 0.0;
};

struct GoldenSectionResult {
  double eta_star = 0.0;   // final bracket midpoint
  double f_star = 0.0;     // best sampled value
  double best_eta = 0.0;   // where f_star was sampled
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;      // function evaluations, the two initial points included
  int shrinks = 0;
  std::vector<GoldenSectionSample> history;
  std::vector<double> widths;  // bracket width after each shrink
};

/// Thrown when max_iter shrinks leave the bracket wider than delta.
class GoldenSectionError : public Error {
 public:
  GoldenSectionError(GoldenSectionResult partial)
      : Error(ErrorKind::not_converged,
              "golden section exhausted " + std::to_string(partial.shrinks) +
                  " iterations with bracket [" + std::to_string(partial.lo) + ", " +
                  std::to_string(partial.hi) + "]"),
        partial_(std::move(partial)) {}

  const GoldenSectionResult& best() const noexcept { return partial_; }

 private:
  GoldenSectionResult partial_;
};

/// Maximizes a unimodal `f` on [eta_lo, eta_hi]. Each shrink reuses one interior
/// point, so every shrink costs one new evaluation.
template <typename F>
GoldenSectionResult golden_section_max(F&& f, const GoldenSectionConfig& cfg) {
  cfg.check();
  constexpr double tau = kGoldenRatioConjugate;

  GoldenSectionResult out;
  auto evaluate = [&](double x) {
    const double value = f(x);
    out.history.push_back({x, value});
    ++out.iterations;
    return value;
  };

  double a = cfg.eta_lo;
  double b = cfg.eta_hi;
  if (b - a <= cfg.delta) {
    const double mid = 0.5 * (a + b);
    out.f_star = evaluate(mid);
    out.best_eta = mid;
    out.eta_star = mid;
    out.lo = a;
    out.hi = b;
    return out;
  }

  double c = b - tau * (b - a);
  double d = a + tau * (b - a);
  double fc = evaluate(c);
  double fd = evaluate(d);

  while (b - a > cfg.delta) {
    if (out.shrinks >= cfg.max_iter) {
      out.lo = a;
      out.hi = b;
      out.eta_star = 0.5 * (a + b);
      if (fc >= fd) {
        out.best_eta = c;
        out.f_star = fc;
      } else {
        out.best_eta = d;
        out.f_star = fd;
      }
      throw GoldenSectionError(std::move(out));
    }
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - tau * (b - a);
      ++out.shrinks;
      out.widths.push_back(b - a);
      if (b - a > cfg.delta) fc = evaluate(c);
      else fc = -HUGE_VAL;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + tau * (b - a);
      ++out.shrinks;
      out.widths.push_back(b - a);
      if (b - a > cfg.delta) fd = evaluate(d);
      else fd = -HUGE_VAL;
    }
  }

  out.lo = a;
  out.hi = b;
  out.eta_star = 0.5 * (a + b);
  // the surviving interior point is the best sample inside [a, b]
  if (fc >= fd) {
    out.best_eta = c;
    out.f_star = fc;
  } else {
    out.best_eta = d;
    out.f_star = fd;
  }
  return out;
}

}  // namespace afsec::numerics
