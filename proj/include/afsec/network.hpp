#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "afsec/error.hpp"

namespace afsec {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Two-hop amplify-and-forward diamond network: one source, `relays()` relays,
/// one destination and `eavesdroppers()` eavesdroppers. All gains are real.
struct NetworkInstance {
  Vector h_s;       // source -> relay i
  Vector h_d;       // relay i -> destination
  Matrix h_e;       // row k: relay i -> eavesdropper k (k x m)
  double p_s = 1.0;
  Vector p_r;       // per-relay power budgets
  double sigma2 = 1.0;

  int relays() const { return static_cast<int>(h_s.size()); }
  int eavesdroppers() const { return static_cast<int>(h_e.rows()); }
  /// P_s / sigma^2
  double gamma() const { return p_s / sigma2; }
};

/// Which power budget the relays obey.
enum class PowerConstraint { sum, individual };

inline const char* to_string(PowerConstraint mode) {
  return mode == PowerConstraint::sum ? "sum" : "individual";
}

inline std::optional<PowerConstraint> parse_power_constraint(std::string_view name) {
  if (name == "sum") return PowerConstraint::sum;
  if (name == "individual") return PowerConstraint::individual;
  return std::nullopt;
}

enum class Method {
  symmetric,
  scaled_alpha,
  zero_forcing,
  sum_iterative,
  individual_iterative,
  oracle_grid,
  oracle_multistart,
};

inline constexpr Method kAllMethods[] = {
    Method::symmetric,     Method::scaled_alpha,         Method::zero_forcing,
    Method::sum_iterative, Method::individual_iterative, Method::oracle_grid,
    Method::oracle_multistart,
};

inline const char* to_string(Method method) {
  switch (method) {
    case Method::symmetric: return "symmetric";
    case Method::scaled_alpha: return "scaled_alpha";
    case Method::zero_forcing: return "zero_forcing";
    case Method::sum_iterative: return "sum_iterative";
    case Method::individual_iterative: return "individual_iterative";
    case Method::oracle_grid: return "oracle_grid";
    case Method::oracle_multistart: return "oracle_multistart";
  }
  return "unknown";
}

inline std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

/// Relay amplification factors together with their magnitude bounds.
struct ScalingVector {
  Vector beta;
  Vector beta_max;

  static constexpr double kFeasibilityTol = 1e-9;

  bool feasible(double tol = kFeasibilityTol) const {
    if (beta.size() != beta_max.size()) return false;
    return ((beta.array().abs() - beta_max.array()) <= tol).all();
  }
};

struct Diagnostics {
  int iterations = 0;
  std::optional<double> eta_star;
  std::optional<double> rate_star;
  std::optional<double> inner_residual;
  std::map<std::string, double> values;
  std::vector<std::string> notes;
};

struct SolveResult {
  ScalingVector beta;
  double secrecy_rate = 0.0;  // bits per channel use, may be negative
  double snr_d = 0.0;
  Vector snr_e;
  Method method = Method::oracle_grid;
  Diagnostics diagnostics;

  double clamped_rate() const { return std::max(0.0, secrecy_rate); }
};

struct Destination {};
struct Eavesdropper {
  int index = 0;
};
using Receiver = std::variant<Destination, Eavesdropper>;

struct ValidationReport {
  std::vector<std::string> errors;
  bool degraded = false;
  bool zero_destination_gain = false;

  bool ok() const { return errors.empty(); }
};

/// beta_max^2 = P_i / (h_{s,i}^2 P_s + sigma^2). Accepts P_s = 0.
inline double beta_max(double p_i, double h_s, double p_s, double sigma2) {
  return std::sqrt(p_i / (h_s * h_s * p_s + sigma2));
}

inline ValidationReport validate(const NetworkInstance& net) {
  ValidationReport report;
  const auto m = net.h_s.size();
  if (m < 1) report.errors.emplace_back("m: at least one relay is required");
  if (net.h_d.size() != m) report.errors.emplace_back("h_d: length differs from m");
  if (net.p_r.size() != m) report.errors.emplace_back("p_r: length differs from m");
  if (net.h_e.rows() > 0 && net.h_e.cols() != m) {
    report.errors.emplace_back("h_e: row length differs from m");
  }
  if (!(net.p_s > 0.0)) report.errors.emplace_back("p_s: must be positive");
  if (!(net.sigma2 > 0.0)) report.errors.emplace_back("sigma2: must be positive");
  if (net.p_r.size() == m && !(net.p_r.array() > 0.0).all()) {
    report.errors.emplace_back("p_r: every relay budget must be positive");
  }
  if (!report.ok()) return report;

  if ((net.h_d.array() == 0.0).any()) {
    report.zero_destination_gain = true;
    report.errors.emplace_back("h_d: zero destination gain");
  }
  bool degraded = true;
  for (Eigen::Index k = 0; k < net.h_e.rows(); ++k) {
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!(std::abs(net.h_e(k, i)) < std::abs(net.h_d(i)))) degraded = false;
    }
  }
  report.degraded = degraded;
  return report;
}

inline void require_valid(const NetworkInstance& net) {
  const auto report = validate(net);
  if (!report.ok()) {
    const bool dims = report.errors.front().find("length") != std::string::npos;
    throw Error(dims ? ErrorKind::dimension_mismatch : ErrorKind::invalid_input,
                "invalid network: " + report.errors.front());
  }
}

inline Vector compute_beta_max(const NetworkInstance& net) {
  require_valid(net);
  Vector out(net.relays());
  for (int i = 0; i < net.relays(); ++i) {
    out(i) = beta_max(net.p_r(i), net.h_s(i), net.p_s, net.sigma2);
  }
  return out;
}

namespace detail {

// (sum h_s h_l beta)^2 / (1 + sum (beta h_l)^2) * P_s / sigma^2
template <typename Gains>
double snr_for_gains(const NetworkInstance& net, const Vector& beta, const Gains& h_l) {
  double coherent = 0.0;
  double noise = 1.0;
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    const double a = beta(i) * h_l(i);
    coherent += net.h_s(i) * a;
    noise += a * a;
  }
  return coherent * coherent / noise * net.gamma();
}

inline void check_length(const NetworkInstance& net, const Vector& beta) {
  if (beta.size() != net.relays()) {
    throw Error(ErrorKind::dimension_mismatch, "beta length " + std::to_string(beta.size()) +
                                                   " differs from relay count " +
                                                   std::to_string(net.relays()));
  }
}

}  // namespace detail

inline double snr(const NetworkInstance& net, const Vector& beta, const Receiver& receiver) {
  detail::check_length(net, beta);
  if (const auto* eav = std::get_if<Eavesdropper>(&receiver)) {
    if (eav->index < 0 || eav->index >= net.eavesdroppers()) {
      throw Error(ErrorKind::dimension_mismatch,
                  "eavesdropper index " + std::to_string(eav->index) + " out of range");
    }
    return detail::snr_for_gains(net, beta, net.h_e.row(eav->index).transpose());
  }
  return detail::snr_for_gains(net, beta, net.h_d);
}

inline Vector eavesdropper_snrs(const NetworkInstance& net, const Vector& beta) {
  detail::check_length(net, beta);
  Vector out(net.eavesdroppers());
  for (int k = 0; k < net.eavesdroppers(); ++k) {
    out(k) = detail::snr_for_gains(net, beta, net.h_e.row(k).transpose());
  }
  return out;
}

/// (1/2) log2((1 + snr_d) / (1 + max_k snr_k)); an empty eavesdropper set counts as 0.
inline double rate_from_snrs(double snr_d, const Vector& snr_e) {
  const double worst = snr_e.size() > 0 ? snr_e.maxCoeff() : 0.0;
  return 0.5 * (std::log2(1.0 + snr_d) - std::log2(1.0 + worst));
}

inline double secrecy_rate_value(const NetworkInstance& net, const Vector& beta) {
  return rate_from_snrs(snr(net, beta, Destination{}), eavesdropper_snrs(net, beta));
}

/// Evaluates beta on `net` and packages the rate with per-receiver SNRs.
inline SolveResult secrecy_rate(const NetworkInstance& net, const Vector& beta,
                                Method method = Method::oracle_grid) {
  SolveResult result;
  result.method = method;
  result.beta.beta = beta;
  result.beta.beta_max = compute_beta_max(net);
  result.snr_d = snr(net, beta, Destination{});
  result.snr_e = eavesdropper_snrs(net, beta);
  result.secrecy_rate = rate_from_snrs(result.snr_d, result.snr_e);
  return result;
}

/// beta_tot = sum_i beta_max_i^2, the squared-amplitude budget of the sum constraint.
inline double total_beta_budget(const NetworkInstance& net) {
  return compute_beta_max(net).squaredNorm();
}

}  // namespace afsec
