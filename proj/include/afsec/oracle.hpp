#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "afsec/network.hpp"
#include "afsec/random.hpp"

namespace afsec {

struct OracleConfig {
  int resolution = 101;   // grid points per dimension, odd so beta = 0 is on the grid
  int n_starts = 100;
  std::uint64_t seed = 1;
  PowerConstraint mode = PowerConstraint::individual;
  int max_ascent_steps = 3000;

  void check() const {
    if (resolution < 3 || resolution % 2 == 0) {
      throw Error(ErrorKind::invalid_input, "oracle resolution must be odd and >= 3");
    }
    if (n_starts < 1) throw Error(ErrorKind::invalid_input, "oracle needs n_starts >= 1");
  }
};

struct RateGradient {
  double rate = 0.0;
  Vector gradient;
  int active = 0;  // eavesdroppers sharing the minimum
};

/// Per-eavesdropper rate terms R_k = (1/2)[log2(1 + SNR_d) - log2(1 + SNR_k)] and
/// their gradients in beta (one column per eavesdropper; a single column for the
/// destination-only rate when there is no eavesdropper).
struct RateTerms {
  Vector rates;
  Matrix gradients;  // m x max(1, K)
};

inline RateTerms rate_terms(const NetworkInstance& net, const Vector& beta) {
  const int m = net.relays();
  const double gamma = net.gamma();
  const double scale = 0.5 / std::log(2.0);
  // log(1 + SNR_l) and its gradient
  auto log_snr = [&](const auto& h_l, Vector& grad) {
    double num = 0.0;
    double den = 1.0;
    for (int i = 0; i < m; ++i) {
      num += net.h_s(i) * h_l(i) * beta(i);
      den += h_l(i) * h_l(i) * beta(i) * beta(i);
    }
    const double snr = gamma * num * num / den;
    grad.resize(m);
    for (int i = 0; i < m; ++i) {
      grad(i) = gamma * (2.0 * num * net.h_s(i) * h_l(i) / den -
                         2.0 * num * num * h_l(i) * h_l(i) * beta(i) / (den * den)) /
                (1.0 + snr);
    }
    return std::log1p(snr);
  };

  Vector grad_d;
  const double log_d = log_snr(net.h_d, grad_d);
  const int k = net.eavesdroppers();
  RateTerms out;
  out.rates.resize(std::max(1, k));
  out.gradients.resize(m, std::max(1, k));
  if (k == 0) {
    out.rates(0) = scale * log_d;
    out.gradients.col(0) = scale * grad_d;
    return out;
  }
  Vector grad_k;
  for (int e = 0; e < k; ++e) {
    const double log_k = log_snr(net.h_e.row(e).transpose(), grad_k);
    out.rates(e) = scale * (log_d - log_k);
    out.gradients.col(e) = scale * (grad_d - grad_k);
  }
  return out;
}

/// Secrecy rate and the gradient of the active (minimum-rate) term; terms within
/// `tie_tol` (relative) of the minimum are averaged.
inline RateGradient rate_and_gradient(const NetworkInstance& net, const Vector& beta,
                                      double tie_tol = 1e-9) {
  const RateTerms terms = rate_terms(net, beta);
  RateGradient out;
  out.rate = terms.rates.minCoeff();
  out.gradient = Vector::Zero(net.relays());
  for (Eigen::Index e = 0; e < terms.rates.size(); ++e) {
    if (terms.rates(e) - out.rate <= tie_tol * (1.0 + std::abs(out.rate))) {
      out.gradient += terms.gradients.col(e);
      ++out.active;
    }
  }
  out.gradient /= out.active;
  return out;
}

namespace detail {

// Minimizes lambda . offset + (s/2) |G lambda|^2 over the unit simplex by
// enumerating supports (one column per eavesdropper, so the simplex is small).
// Returns G lambda.
inline Vector simplex_qp(const Matrix& g, const Vector& offset, double s) {
  const auto n = g.cols();
  if (n == 1) return g.col(0);
  if (n > 12) return g.rowwise().mean();
  const Matrix gram = g.transpose() * g;
  Vector best = g.col(0);
  double best_value = offset(0) + 0.5 * s * gram(0, 0);
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> cols;
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) cols.push_back(j);
    }
    const auto k = static_cast<Eigen::Index>(cols.size());
    Matrix kkt = Matrix::Zero(k + 1, k + 1);
    Vector rhs = Vector::Zero(k + 1);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) kkt(a, b) = s * gram(cols[a], cols[b]);
      kkt(a, k) = -1.0;
      kkt(k, a) = 1.0;
      rhs(a) = -offset(cols[a]);
    }
    rhs(k) = 1.0;
    const Vector sol = kkt.colPivHouseholderQr().solve(rhs);
    if (!sol.allFinite() || (sol.head(k).array() < -1e-12).any()) continue;
    Vector point = Vector::Zero(g.rows());
    double value = 0.0;
    for (Eigen::Index a = 0; a < k; ++a) {
      point += sol(a) * g.col(cols[a]);
      value += sol(a) * offset(cols[a]);
    }
    value += 0.5 * s * point.squaredNorm();
    if (value < best_value) {
      best_value = value;
      best = point;
    }
  }
  return best;
}

struct GridState {
  const NetworkInstance* net = nullptr;
  int m = 0;
  int receivers = 0;
  std::vector<Vector> axis;          // grid values per dimension
  Matrix num_coeff;                  // receivers x m : h_s h_l
  Matrix den_coeff;                  // receivers x m : h_l^2
  std::vector<double> num;           // partial sums, (m + 1) x receivers
  std::vector<double> den;
  std::vector<double> norm2;         // partial ||beta||^2
  std::vector<int> index;
  double ball = std::numeric_limits<double>::infinity();
  double best_ratio = -1.0;
  std::vector<int> best_index;
};

inline void grid_recurse(GridState& st, int dim) {
  const int r = st.receivers;
  const auto& values = st.axis[dim];
  const double* num_prev = &st.num[dim * r];
  const double* den_prev = &st.den[dim * r];
  double* num_next = &st.num[(dim + 1) * r];
  double* den_next = &st.den[(dim + 1) * r];
  // rate is even in beta, so the first coordinate only needs beta_1 >= 0
  const Eigen::Index start = dim == 0 ? values.size() / 2 : 0;
  for (Eigen::Index j = start; j < values.size(); ++j) {
    const double b = values(j);
    const double n2 = st.norm2[dim] + b * b;
    if (n2 > st.ball) continue;
    st.norm2[dim + 1] = n2;
    st.index[dim] = static_cast<int>(j);
    for (int l = 0; l < r; ++l) {
      num_next[l] = num_prev[l] + st.num_coeff(l, dim) * b;
      den_next[l] = den_prev[l] + st.den_coeff(l, dim) * b * b;
    }
    if (dim + 1 < st.m) {
      grid_recurse(st, dim + 1);
      continue;
    }
    const double snr_d = num_next[0] * num_next[0] / den_next[0];
    double worst = 0.0;
    for (int l = 1; l < r; ++l) worst = std::max(worst, num_next[l] * num_next[l] / den_next[l]);
    const double gamma = st.net->gamma();
    const double ratio = (1.0 + gamma * snr_d) / (1.0 + gamma * worst);
    if (ratio > st.best_ratio) {
      st.best_ratio = ratio;
      st.best_index = st.index;
    }
  }
}

}  // namespace detail

/// Exhaustive grid over the box prod [-beta_max_i, beta_max_i] (individual) or
/// over the cube of half-width sqrt(beta_tot) restricted to the beta_tot ball (sum).
inline SolveResult grid_search(const NetworkInstance& net, const OracleConfig& cfg) {
  require_valid(net);
  cfg.check();
  const int m = net.relays();
  if (m > 4) throw Error(ErrorKind::unsupported, "grid_search is limited to m <= 4 relays");

  const Vector bmax = compute_beta_max(net);
  detail::GridState st;
  st.net = &net;
  st.m = m;
  st.receivers = net.eavesdroppers() + 1;
  const double beta_tot = bmax.squaredNorm();
  for (int i = 0; i < m; ++i) {
    const double half = cfg.mode == PowerConstraint::individual ? bmax(i) : std::sqrt(beta_tot);
    st.axis.push_back(Vector::LinSpaced(cfg.resolution, -half, half));
  }
  if (cfg.mode == PowerConstraint::sum) st.ball = beta_tot * (1.0 + 1e-12);

  st.num_coeff.resize(st.receivers, m);
  st.den_coeff.resize(st.receivers, m);
  for (int i = 0; i < m; ++i) {
    st.num_coeff(0, i) = net.h_s(i) * net.h_d(i);
    st.den_coeff(0, i) = net.h_d(i) * net.h_d(i);
    for (int k = 0; k < net.eavesdroppers(); ++k) {
      st.num_coeff(k + 1, i) = net.h_s(i) * net.h_e(k, i);
      st.den_coeff(k + 1, i) = net.h_e(k, i) * net.h_e(k, i);
    }
  }
  st.num.assign((m + 1) * st.receivers, 0.0);
  st.den.assign((m + 1) * st.receivers, 1.0);
  st.norm2.assign(m + 1, 0.0);
  st.index.assign(m, 0);
  detail::grid_recurse(st, 0);

  Vector beta(m);
  for (int i = 0; i < m; ++i) beta(i) = st.axis[i](st.best_index[i]);
  SolveResult result = secrecy_rate(net, beta, Method::oracle_grid);
  result.diagnostics.values["resolution"] = cfg.resolution;
  result.diagnostics.values["cell_width"] = st.axis[0].size() > 1 ? st.axis[0](1) - st.axis[0](0) : 0.0;
  return result;
}

/// First-order estimate of how far the grid optimum can sit below the true one:
/// gradient norm at the grid point times half the cell diagonal.
inline double grid_resolution_bound(const NetworkInstance& net, const OracleConfig& cfg,
                                    const Vector& grid_beta) {
  const Vector bmax = compute_beta_max(net);
  double diag2 = 0.0;
  for (int i = 0; i < net.relays(); ++i) {
    const double half = cfg.mode == PowerConstraint::individual ? bmax(i) : bmax.norm();
    const double h = 2.0 * half / (cfg.resolution - 1);
    diag2 += h * h;
  }
  return rate_and_gradient(net, grid_beta).gradient.norm() * 0.5 * std::sqrt(diag2) + 1e-12;
}

namespace detail {

inline Vector project(const Vector& beta, const Vector& bmax, PowerConstraint mode, double radius) {
  if (mode == PowerConstraint::individual) return beta.cwiseMax(-bmax).cwiseMin(bmax);
  const double norm = beta.norm();
  return norm > radius ? Vector(beta * (radius / norm)) : beta;
}

// Step d maximizing min_k (R_k + g_k . d) - |d|^2 / (2 s). Under individual
// budgets a coordinate at its bound that the step pushes outward is frozen and
// the step recomputed on the rest.
inline Vector prox_linear_step(const RateTerms& terms, double rate, double s, const Vector& beta,
                               const Vector& bmax, PowerConstraint mode) {
  const Vector offset = (terms.rates.array() - rate).matrix();
  Matrix g = terms.gradients;
  Vector step = s * simplex_qp(g, offset, s);
  if (mode != PowerConstraint::individual) return step;
  const auto m = g.rows();
  std::vector<bool> frozen(static_cast<std::size_t>(m), false);
  for (Eigen::Index pass = 0; pass < m; ++pass) {
    bool changed = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      const bool at_bound = std::abs(beta(i)) >= bmax(i) * (1.0 - 1e-12);
      if (!frozen[i] && at_bound && step(i) * beta(i) > 0.0) {
        frozen[i] = true;
        g.row(i).setZero();
        changed = true;
      }
    }
    if (!changed) break;
    step = s * simplex_qp(g, offset, s);
  }
  return step;
}

}  // namespace detail

/// Projected ascent on the exact secrecy rate from `n_starts` seeded uniform
/// starts; the best terminal point wins (lowest start index on ties). Each step
/// maximizes the linearized worst-eavesdropper rate plus a proximal term, so
/// ridges where eavesdroppers tie are followed rather than zigzagged.
inline SolveResult multistart_search(const NetworkInstance& net, const OracleConfig& cfg) {
  require_valid(net);
  cfg.check();
  const int m = net.relays();
  if (m > 16) throw Error(ErrorKind::unsupported, "multistart_search is limited to m <= 16 relays");

  const Vector bmax = compute_beta_max(net);
  const double radius = bmax.norm();
  Vector best_beta = Vector::Zero(m);
  double best_rate = -std::numeric_limits<double>::infinity();
  long total_steps = 0;

  for (int start = 0; start < cfg.n_starts; ++start) {
    Rng rng(mix_seed(cfg.seed, 0x6f7261636c65ULL, static_cast<std::uint64_t>(start)));
    Vector beta(m);
    if (cfg.mode == PowerConstraint::individual) {
      for (int i = 0; i < m; ++i) beta(i) = rng.uniform(-bmax(i), bmax(i));
    } else {
      for (int i = 0; i < m; ++i) beta(i) = rng.normal();
      beta *= radius * std::pow(rng.uniform_open(), 1.0 / m) / beta.norm();
    }

    double rate = secrecy_rate_value(net, beta);
    double s = 1.0;
    for (int it = 0; it < cfg.max_ascent_steps; ++it, ++total_steps) {
      const RateTerms terms = rate_terms(net, beta);
      bool accepted = false;
      Vector trial;
      double trial_rate = rate;
      for (int bt = 0; bt < 60; ++bt, s *= 0.5) {
        const Vector d = detail::prox_linear_step(terms, rate, s, beta, bmax, cfg.mode);
        trial = detail::project(beta + d, bmax, cfg.mode, radius);
        const Vector moved = trial - beta;
        const double predicted = (terms.rates + terms.gradients.transpose() * moved).minCoeff() - rate;
        if (!(predicted > 0.0)) break;
        trial_rate = secrecy_rate_value(net, trial);
        if (trial_rate - rate >= 0.1 * predicted) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      const double moved = (trial - beta).norm();
      beta = trial;
      rate = trial_rate;
      s = std::min(2.0 * s, 1e6);
      if (moved <= 1e-13 * (1.0 + beta.norm())) break;
    }
    if (rate > best_rate) {
      best_rate = rate;
      best_beta = beta;
    }
  }

  SolveResult result = secrecy_rate(net, best_beta, Method::oracle_multistart);
  result.diagnostics.iterations = static_cast<int>(total_steps);
  result.diagnostics.values["starts"] = cfg.n_starts;
  return result;
}

}  // namespace afsec
