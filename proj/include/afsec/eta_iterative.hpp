#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "afsec/network.hpp"
#include "afsec/numerics/golden_section.hpp"
#include "afsec/numerics/qcqp.hpp"
#include "afsec/numerics/rayleigh.hpp"

namespace afsec {

// ---------------------------------------------------------------------------
// Change of variables omega = h_d .* beta, v = omega / sqrt(1 + omega'omega).
// In v the destination SNR is (g_s'v)^2 and every SNR or power constraint is an
// ellipsoid v'Av <= 1, so the fixed-eta problem is convex.
// ---------------------------------------------------------------------------

inline Vector transform_to_v(const Vector& omega) {
  return omega / std::sqrt(1.0 + omega.squaredNorm());
}

inline Vector transform_to_omega(const Vector& v) {
  const double norm2 = v.squaredNorm();
  if (!(norm2 < 1.0)) {
    throw Error(ErrorKind::invalid_input, "transform_to_omega needs ||v|| < 1");
  }
  return v / std::sqrt(1.0 - norm2);
}

/// Everything the fixed-eta inner problem needs, precomputed once per network.
struct EtaProblem {
  PowerConstraint mode = PowerConstraint::sum;
  Vector g_eff;                  // sqrt(P_s / sigma^2) h_s, the linear objective in v
  Vector h_d;
  Vector beta_max;
  double beta_tot = 0.0;         // sum_i beta_max_i^2
  double gamma = 1.0;
  std::vector<Vector> h_srho;    // h_s .* rho_k, rho_k = h_e[k] ./ h_d
  std::vector<Vector> d_rho;     // rho_k .^ 2

  int relays() const { return static_cast<int>(g_eff.size()); }
  int eavesdroppers() const { return static_cast<int>(h_srho.size()); }

  /// C_k(eta) = (P_s / sigma^2) h_srho h_srho' / eta + I - diag(rho_k^2)
  Matrix c_matrix(int k, double eta) const {
    Matrix c = (gamma / eta) * h_srho[k] * h_srho[k].transpose();
    c.diagonal().array() += 1.0 - d_rho[k].array();
    return c;
  }

  /// D_T = diag(1 + 1 / (h_d^2 beta_tot))
  Matrix d_total() const {
    Vector diag = (1.0 + 1.0 / (h_d.array().square() * beta_tot)).matrix();
    return diag.asDiagonal();
  }

  /// D_i = I + e_i e_i' / (h_{i,d}^2 beta_{i,max}^2)
  Matrix d_relay(int i) const {
    Matrix d = Matrix::Identity(relays(), relays());
    d(i, i) += 1.0 / (h_d(i) * h_d(i) * beta_max(i) * beta_max(i));
    return d;
  }
};

inline EtaProblem make_eta_problem(const NetworkInstance& net, PowerConstraint mode) {
  require_valid(net);
  EtaProblem prob;
  prob.mode = mode;
  prob.gamma = net.gamma();
  prob.g_eff = std::sqrt(prob.gamma) * net.h_s;
  prob.h_d = net.h_d;
  prob.beta_max = compute_beta_max(net);
  prob.beta_tot = prob.beta_max.squaredNorm();
  for (int k = 0; k < net.eavesdroppers(); ++k) {
    const Vector rho = net.h_e.row(k).transpose().cwiseQuotient(net.h_d);
    if ((rho.array().abs() >= 1.0).any()) {
      throw Error(ErrorKind::not_degraded,
                  "C_k not positive definite under rho >= 1: eavesdropper " + std::to_string(k) +
                      " is not degraded; use oracle_multistart for such networks");
    }
    prob.h_srho.push_back(net.h_s.cwiseProduct(rho));
    prob.d_rho.push_back(rho.cwiseAbs2());
  }
  return prob;
}

/// eta_{k,max} = gamma h_{s,k}' (I / beta_tot + D_k)^-1 h_{s,k}; the maximum over k
/// caps every eavesdropper SNR reachable with beta'beta <= beta_tot.
inline double eta_upper_bound(const NetworkInstance& net, double beta_tot) {
  require_valid(net);
  if (net.eavesdroppers() == 0) {
    throw Error(ErrorKind::invalid_input, "eta_upper_bound needs at least one eavesdropper");
  }
  if (!(beta_tot > 0.0)) throw Error(ErrorKind::invalid_input, "eta_upper_bound needs beta_tot > 0");
  double best = 0.0;
  for (int k = 0; k < net.eavesdroppers(); ++k) {
    double value = 0.0;
    for (int i = 0; i < net.relays(); ++i) {
      const double h = net.h_s(i) * net.h_e(k, i);
      value += h * h / (1.0 / beta_tot + net.h_e(k, i) * net.h_e(k, i));
    }
    best = std::max(best, net.gamma() * value);
  }
  return best;
}

/// Both modes use beta_tot = sum beta_max^2; for individual bounds it is a
/// loosened cap, since the box lies inside that ball.
inline double eta_upper_bound(const NetworkInstance& net, PowerConstraint /*mode*/) {
  return eta_upper_bound(net, total_beta_budget(net));
}

inline numerics::QcqpProblem build_inner_problem(const EtaProblem& prob, double eta) {
  if (!(eta > 0.0)) throw Error(ErrorKind::invalid_input, "inner problem needs eta > 0");
  numerics::QcqpProblem qp;
  qp.c = prob.g_eff;
  for (int k = 0; k < prob.eavesdroppers(); ++k) qp.constraints.push_back(prob.c_matrix(k, eta));
  if (prob.mode == PowerConstraint::sum) {
    qp.constraints.push_back(prob.d_total());
  } else {
    for (int i = 0; i < prob.relays(); ++i) qp.constraints.push_back(prob.d_relay(i));
  }
  return qp;
}

inline numerics::QcqpProblem build_inner_problem(const NetworkInstance& net, double eta,
                                                 PowerConstraint mode) {
  return build_inner_problem(make_eta_problem(net, mode), eta);
}

/// lambda_max(D_T) < lambda_min(C): the power ellipsoid then contains the
/// eavesdropper ellipsoid. With two or more relays lambda_min(C) <= 1 < lambda_max(D_T),
/// so only single-relay networks take this branch.
inline bool rayleigh_case(const Matrix& c, const Matrix& d_total) {
  Eigen::SelfAdjointEigenSolver<Matrix> ec(c, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> ed(d_total, Eigen::EigenvaluesOnly);
  return ed.eigenvalues().maxCoeff() < ec.eigenvalues().minCoeff();
}

struct FastPathResult {
  Vector v;
  double value = 0.0;          // (g'v)^2
  bool closed_form = false;    // lambda_max(D_T) < lambda_min(C(eta))
  bool power_slack = false;    // Rayleigh direction already satisfied D_T
};

/// Single eavesdropper, sum constraint. When lambda_max(D_T) < lambda_min(C) the
/// power ellipsoid contains the eavesdropper one and the Rayleigh direction is
/// optimal; otherwise try it and fall back to the two-constraint program.
inline FastPathResult single_eav_fast_path(const EtaProblem& prob, double eta,
                                           numerics::QcqpWorkspace& ws) {
  if (prob.eavesdroppers() != 1 || prob.mode != PowerConstraint::sum) {
    throw Error(ErrorKind::unsupported, "fast path needs one eavesdropper and the sum constraint");
  }
  FastPathResult out;
  const Matrix c = prob.c_matrix(0, eta);
  const Matrix dt = prob.d_total();
  out.closed_form = rayleigh_case(c, dt);

  const auto ray = numerics::rayleigh_direction(prob.g_eff, c);
  if (out.closed_form || ray.v.dot(dt * ray.v) <= 1.0) {
    out.power_slack = !out.closed_form;
    out.v = ray.v;
    out.value = ray.value;
    return out;
  }
  const auto sol = numerics::solve_linear_qcqp(build_inner_problem(prob, eta), ws);
  out.v = sol.v;
  out.value = sol.objective * sol.objective;
  return out;
}

inline FastPathResult single_eav_fast_path(const NetworkInstance& net, double eta) {
  numerics::QcqpWorkspace ws;
  return single_eav_fast_path(make_eta_problem(net, PowerConstraint::sum), eta, ws);
}

struct InnerSolution {
  Vector v;
  double snr_d = 0.0;      // (g_eff' v)^2
  Vector beta;
  bool fast_path = false;
  bool closed_form = false;
  double gap = 0.0;        // barrier duality gap, 0 on the closed form
};

inline Vector beta_from_v(const EtaProblem& prob, const Vector& v) {
  Vector beta = transform_to_omega(v).cwiseQuotient(prob.h_d);
  if (prob.mode == PowerConstraint::individual) {
    beta = beta.cwiseMax(-prob.beta_max).cwiseMin(prob.beta_max);
  }
  return beta;
}

inline InnerSolution inner_solve(const EtaProblem& prob, double eta, numerics::QcqpWorkspace& ws,
                                 bool allow_fast_path = true) {
  InnerSolution out;
  if (allow_fast_path && prob.eavesdroppers() == 1 && prob.mode == PowerConstraint::sum) {
    const auto fast = single_eav_fast_path(prob, eta, ws);
    out.v = fast.v;
    out.fast_path = true;
    out.closed_form = fast.closed_form || fast.power_slack;
  } else {
    const auto sol = numerics::solve_linear_qcqp(build_inner_problem(prob, eta), ws);
    out.v = sol.v;
    out.gap = sol.duality_gap;
  }
  const double proj = prob.g_eff.dot(out.v);
  // max of (g'v)^2 is attained with g'v >= 0 by symmetry of the feasible set
  if (proj < 0.0) out.v = -out.v;
  out.snr_d = proj * proj;
  out.beta = beta_from_v(prob, out.v);
  return out;
}

inline InnerSolution inner_solve(const NetworkInstance& net, double eta, PowerConstraint mode) {
  numerics::QcqpWorkspace ws;
  return inner_solve(make_eta_problem(net, mode), eta, ws);
}

struct EtaSample {
  double eta = 0.0;
  double objective = 0.0;  // g_eff' v*(eta)
  double f = 0.0;          // (1 + objective^2) / (1 + eta)
};

struct EtaSearchState {
  double lo = 0.0;
  double hi = 0.0;
  double eta_max = 0.0;
  std::vector<EtaSample> history;
  double eta_star = 0.0;
  double rate_star = 0.0;  // (1/2) log2 of the best f
};

struct IterativeOptions {
  double eta_lo_fraction = 1e-6;  // eta_l = fraction * eta_max
  double delta_fraction = 1e-4;   // delta = fraction * eta_max, unless delta > 0
  double delta = 0.0;
  bool fast_path = true;
};

struct IterativeSolution {
  SolveResult result;
  EtaSearchState search;
  int iteration_bound = 0;  // ceil(2.08 ln(range / delta))
};

/// Golden-section search over the eavesdropper SNR cap eta; each probe solves
/// the convex inner problem and scores f(eta) = (1 + (g'v*)^2) / (1 + eta).
inline IterativeSolution solve_iterative(const NetworkInstance& net, PowerConstraint mode,
                                         const IterativeOptions& opts = {}) {
  if (net.eavesdroppers() == 0) {
    throw Error(ErrorKind::invalid_input, "iterative solver needs at least one eavesdropper");
  }
  const EtaProblem prob = make_eta_problem(net, mode);
  const double eta_max = eta_upper_bound(net, prob.beta_tot);
  const Method method = mode == PowerConstraint::sum ? Method::sum_iterative : Method::individual_iterative;
  IterativeSolution out;
  if (!(eta_max > 0.0)) {
    // no eavesdropper receives source signal; the cap is irrelevant
    numerics::QcqpWorkspace ws;
    const auto inner = inner_solve(prob, 1.0, ws, opts.fast_path);
    out.search.history.push_back({0.0, prob.g_eff.dot(inner.v), 1.0 + inner.snr_d});
    out.search.rate_star = 0.5 * std::log2(1.0 + inner.snr_d);
    out.result = secrecy_rate(net, inner.beta, method);
    out.result.diagnostics.iterations = 1;
    out.result.diagnostics.eta_star = 0.0;
    out.result.diagnostics.rate_star = out.search.rate_star;
    out.result.diagnostics.notes.emplace_back("eavesdroppers receive no source signal");
    return out;
  }
  const double lo = opts.eta_lo_fraction * eta_max;
  const double delta = opts.delta > 0.0 ? opts.delta : opts.delta_fraction * eta_max;

  out.search.lo = lo;
  out.search.hi = eta_max;
  out.search.eta_max = eta_max;
  out.iteration_bound = numerics::iteration_bound(eta_max - lo, delta);

  numerics::QcqpWorkspace ws;
  std::vector<Vector> betas;
  auto f = [&](double eta) {
    const auto inner = inner_solve(prob, eta, ws, opts.fast_path);
    const double objective = prob.g_eff.dot(inner.v);
    const double value = (1.0 + inner.snr_d) / (1.0 + eta);
    out.search.history.push_back({eta, objective, value});
    betas.push_back(inner.beta);
    return value;
  };

  const auto cfg = numerics::GoldenSectionConfig::with_bound(lo, eta_max, delta);
  const auto gs = numerics::golden_section_max(f, cfg);

  std::size_t best = 0;
  for (std::size_t i = 0; i < out.search.history.size(); ++i) {
    if (out.search.history[i].eta == gs.best_eta) best = i;
  }
  out.search.eta_star = gs.best_eta;
  out.search.rate_star = 0.5 * std::log2(gs.f_star);

  out.result = secrecy_rate(net, betas[best], method);
  auto& d = out.result.diagnostics;
  d.iterations = gs.iterations;
  d.eta_star = out.search.eta_star;
  d.rate_star = out.search.rate_star;
  d.values["eta_max"] = eta_max;
  d.values["eta_lo"] = lo;
  d.values["delta"] = delta;
  d.values["bracket_lo"] = gs.lo;
  d.values["bracket_hi"] = gs.hi;
  d.values["iteration_bound"] = out.iteration_bound;
  d.inner_residual = std::max(0.0, out.result.snr_e.size() ? out.result.snr_e.maxCoeff() - gs.best_eta : 0.0);
  return out;
}

inline SolveResult solve_sum_iterative(const NetworkInstance& net, const IterativeOptions& opts = {}) {
  return solve_iterative(net, PowerConstraint::sum, opts).result;
}

inline SolveResult solve_individual_iterative(const NetworkInstance& net, const IterativeOptions& opts = {}) {
  return solve_iterative(net, PowerConstraint::individual, opts).result;
}

/// f(eta) on `points` log-spaced caps in [fraction * eta_max, eta_max].
inline std::vector<EtaSample> sample_eta_objective(const NetworkInstance& net, PowerConstraint mode,
                                                   int points = 64, double lo_fraction = 1e-6) {
  const EtaProblem prob = make_eta_problem(net, mode);
  const double eta_max = eta_upper_bound(net, prob.beta_tot);
  const double lo = lo_fraction * eta_max;
  numerics::QcqpWorkspace ws;
  std::vector<EtaSample> out;
  for (int j = 0; j < points; ++j) {
    const double eta = lo * std::pow(eta_max / lo, static_cast<double>(j) / (points - 1));
    const auto inner = inner_solve(prob, eta, ws);
    out.push_back({eta, prob.g_eff.dot(inner.v), (1.0 + inner.snr_d) / (1.0 + eta)});
  }
  return out;
}

/// Strict local maxima of a sampled sequence, endpoints included, treating
/// steps smaller than `flat_tol` as flat. A constant sequence has one.
inline int count_local_maxima(const std::vector<double>& values, double flat_tol = 1e-9) {
  std::vector<int> trend;
  for (std::size_t j = 1; j < values.size(); ++j) {
    const double diff = values[j] - values[j - 1];
    if (std::abs(diff) <= flat_tol) continue;
    trend.push_back(diff > 0.0 ? 1 : -1);
  }
  if (trend.empty()) return 1;
  int peaks = 0;
  if (trend.front() < 0) ++peaks;
  if (trend.back() > 0) ++peaks;
  for (std::size_t j = 1; j < trend.size(); ++j) {
    if (trend[j - 1] > 0 && trend[j] < 0) ++peaks;
  }
  return peaks;
}

}  // namespace afsec
