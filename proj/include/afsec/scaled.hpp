#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "afsec/network.hpp"
#include "afsec/numerics/quartic.hpp"

namespace afsec {

/// Eavesdropper channel proportional to the destination channel, h_e = alpha h_d,
/// written in omega_i = h_{i,d} beta_i and g_{s,i} = sqrt(P_s / sigma^2) h_{s,i}.
struct ScaledProblem {
  Vector g_s;
  Vector omega_max;  // h_{i,d} beta_{i,max}
  double alpha = 0.5;
};

inline ScaledProblem make_scaled_problem(const NetworkInstance& net, double alpha) {
  ScaledProblem prob;
  prob.g_s = std::sqrt(net.gamma()) * net.h_s;
  prob.omega_max = net.h_d.cwiseProduct(compute_beta_max(net));
  prob.alpha = alpha;
  return prob;
}

/// The weights in (1 + rho1 Psi) / (1 + rho2 Psi) for ||omega|| = r.
inline std::pair<double, double> ratio_weights(double r, double alpha) {
  return {1.0 / (1.0 + r * r), alpha * alpha / (1.0 + alpha * alpha * r * r)};
}

struct UnconstrainedSolution {
  Vector omega;
  double radius = 0.0;
};

/// Ignoring the per-relay bounds: omega* = (g / ||g||) r*, r* = 1 / sqrt(alpha sqrt(1 + ||g||^2)).
inline UnconstrainedSolution unconstrained_solution(const ScaledProblem& prob) {
  if (!(prob.alpha > 0.0 && prob.alpha < 1.0)) {
    throw Error(ErrorKind::invalid_input, "scaled-channel solver needs alpha in (0, 1)");
  }
  UnconstrainedSolution out;
  const double norm = prob.g_s.norm();
  out.radius = 1.0 / std::sqrt(prob.alpha * std::sqrt(1.0 + norm * norm));
  out.omega = norm > 0.0 ? Vector(prob.g_s / norm * out.radius) : Vector::Zero(prob.g_s.size());
  return out;
}

/// Relays sorted by |g_{s,i}| / |omega_{i,max}| descending, with prefix/suffix sums.
/// Vectors p, q, s are indexed by the prefix size m = 0..M.
struct OrderedPrefix {
  std::vector<int> order;   // 0-based original indices
  Vector g;                 // |g_s| in order
  Vector omega_max;         // |omega_max| in order
  Vector p;                 // p_m = sum_{i<=m} g_(i) omega_(i),max
  Vector q;                 // q_m = sum_{i<=m} omega_(i),max^2
  Vector s;                 // s_m = sum_{i>m} g_(i)^2
};

inline OrderedPrefix order_relays(const ScaledProblem& prob) {
  const auto n = static_cast<int>(prob.g_s.size());
  OrderedPrefix op;
  op.order.resize(n);
  std::iota(op.order.begin(), op.order.end(), 0);
  const Vector ratio = prob.g_s.cwiseAbs().cwiseQuotient(prob.omega_max.cwiseAbs());
  std::stable_sort(op.order.begin(), op.order.end(),
                   [&](int a, int b) { return ratio(a) > ratio(b); });

  op.g.resize(n);
  op.omega_max.resize(n);
  for (int i = 0; i < n; ++i) {
    op.g(i) = std::abs(prob.g_s(op.order[i]));
    op.omega_max(i) = std::abs(prob.omega_max(op.order[i]));
  }
  op.p = Vector::Zero(n + 1);
  op.q = Vector::Zero(n + 1);
  op.s = Vector::Zero(n + 1);
  for (int m = 1; m <= n; ++m) {
    op.p(m) = op.p(m - 1) + op.g(m - 1) * op.omega_max(m - 1);
    op.q(m) = op.q(m - 1) + op.omega_max(m - 1) * op.omega_max(m - 1);
  }
  for (int m = n - 1; m >= 0; --m) op.s(m) = op.s(m + 1) + op.g(m) * op.g(m);
  return op;
}

/// r_m = sqrt(s_m omega_(m),max^2 / g_(m)^2 + q_m) for m = 1..M; r_M = sqrt(q_M).
inline Vector boundary_radii(const OrderedPrefix& op) {
  const auto n = op.g.size();
  Vector r(n);
  for (Eigen::Index m = 1; m <= n; ++m) {
    const double g = op.g(m - 1);
    const double w = op.omega_max(m - 1);
    const double tail = op.s(m) == 0.0 ? 0.0 : op.s(m) * w * w / (g * g);
    r(m - 1) = std::sqrt(tail + op.q(m));
  }
  return r;
}

/// Coefficients of the monic quartic whose positive root is the optimal suffix
/// scale lambda_m. p, s are formed from raw source gains; gamma = P_s / sigma^2.
/// With g-unit sums pass gamma = 1.
inline numerics::QuarticCoeffs lambda_polynomial(double p, double q, double s, double alpha,
                                                 double gamma) {
  const double a2 = alpha * alpha;
  const double lead = s * (1.0 + gamma * s);
  numerics::QuarticCoeffs c;
  c.c3 = p * (2.0 + 3.0 * gamma * s) / lead;
  c.c2 = 3.0 * p * p * gamma / lead;
  c.c1 = p * (gamma * p * p * a2 + 2.0 * q * a2 + a2 + 1.0) / (s * a2 * lead);
  c.c0 = -(1.0 + q) * (1.0 + a2 * q) / (s * a2 * lead);
  return c;
}

inline double lambda_root(double p, double q, double s, double alpha, double gamma) {
  if (!(s > 0.0)) throw Error(ErrorKind::invalid_input, "lambda_root needs s_m > 0");
  if (!(alpha > 0.0)) throw Error(ErrorKind::invalid_input, "lambda_root needs alpha > 0");
  return numerics::positive_quartic_root(lambda_polynomial(p, q, s, alpha, gamma));
}

/// alpha such that h_e = alpha h_d for the single eavesdropper, if the rows are
/// proportional to `rel_tol`.
inline std::optional<double> infer_alpha(const NetworkInstance& net, double rel_tol = 1e-9) {
  require_valid(net);
  if (net.eavesdroppers() != 1) return std::nullopt;
  const double alpha = net.h_e(0, 0) / net.h_d(0);
  const double scale = std::abs(alpha) * net.h_d.cwiseAbs().maxCoeff();
  for (int i = 0; i < net.relays(); ++i) {
    if (std::abs(net.h_e(0, i) - alpha * net.h_d(i)) > rel_tol * std::max(scale, 1e-300)) return std::nullopt;
  }
  return alpha;
}

struct ScaledSolution {
  SolveResult result;
  Vector omega;
  OrderedPrefix prefix;
  int clamped = 0;     // ordered relays held at their bound
  double lambda = 0.0; // suffix scale, 0 when every relay is clamped
};

/// Stepwise optimum under individual relay bounds: grow the clamped prefix of
/// the ratio order until the next ordered relay stays inside its bound.
inline ScaledSolution solve_scaled_detailed(const NetworkInstance& net, double alpha) {
  require_valid(net);
  if (net.eavesdroppers() != 1) {
    throw Error(ErrorKind::unsupported, "scaled-channel solver handles exactly one eavesdropper");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::invalid_input, "scaled-channel solver needs alpha in (0, 1)");
  }
  const double scale = alpha * net.h_d.cwiseAbs().maxCoeff();
  for (int i = 0; i < net.relays(); ++i) {
    if (std::abs(net.h_e(0, i) - alpha * net.h_d(i)) > 1e-9 * scale) {
      throw Error(ErrorKind::unsupported,
                  "eavesdropper channel is not alpha * h_d; use sum_iterative or individual_iterative");
    }
  }

  const ScaledProblem prob = make_scaled_problem(net, alpha);
  ScaledSolution out;
  out.prefix = order_relays(prob);
  const auto& op = out.prefix;
  const int n = net.relays();

  int m = 0;
  double lambda = 0.0;
  while (m < n && op.s(m) > 0.0) {
    lambda = lambda_root(op.p(m), op.q(m), op.s(m), alpha, 1.0);
    if (op.g(m) * lambda <= op.omega_max(m)) break;
    ++m;
  }
  if (m == n || op.s(m) == 0.0) lambda = 0.0;
  out.clamped = m;
  out.lambda = lambda;

  const Vector bmax = compute_beta_max(net);
  out.omega = Vector::Zero(n);
  Vector beta = Vector::Zero(n);
  for (int idx = 0; idx < n; ++idx) {
    const int i = op.order[idx];
    const double magnitude = idx < m ? op.omega_max(idx) : lambda * op.g(idx);
    const double sign = prob.g_s(i) < 0.0 ? -1.0 : 1.0;
    out.omega(i) = sign * magnitude;
    beta(i) = std::clamp(out.omega(i) / net.h_d(i), -bmax(i), bmax(i));
  }

  out.result = secrecy_rate(net, beta, Method::scaled_alpha);
  out.result.diagnostics.iterations = m + 1;
  out.result.diagnostics.values["alpha"] = alpha;
  out.result.diagnostics.values["clamped_relays"] = m;
  out.result.diagnostics.values["lambda"] = lambda;
  out.result.diagnostics.values["r_star"] = unconstrained_solution(prob).radius;
  return out;
}

inline SolveResult solve_scaled(const NetworkInstance& net, double alpha) {
  return solve_scaled_detailed(net, alpha).result;
}

inline SolveResult solve_scaled(const NetworkInstance& net) {
  const auto alpha = infer_alpha(net);
  if (!alpha) {
    throw Error(ErrorKind::unsupported,
                "eavesdropper channel is not a scalar multiple of h_d; use an iterative solver");
  }
  return solve_scaled(net, *alpha);
}

}  // namespace afsec
