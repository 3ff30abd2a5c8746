#pragma once

#include <cmath>
#include <optional>

#include "afsec/network.hpp"

namespace afsec {

/// Co-located relays: every relay sees the same source, destination and
/// eavesdropper gain. Single eavesdropper.
struct SymmetricParams {
  int m = 1;
  double h_s = 1.0;
  double h_d = 1.0;
  double h_e = 0.0;
  double p_s = 1.0;
  double p_r = 1.0;  // per relay
  double sigma2 = 1.0;

  double gamma() const { return p_s / sigma2; }
  double beta_max() const { return afsec::beta_max(p_r, h_s, p_s, sigma2); }

  void check() const {
    if (m < 1) throw Error(ErrorKind::invalid_input, "symmetric network needs m >= 1");
    if (h_d == 0.0) throw Error(ErrorKind::invalid_input, "symmetric network needs h_d != 0");
    if (!(p_s > 0.0) || !(p_r > 0.0) || !(sigma2 > 0.0)) {
      throw Error(ErrorKind::invalid_input, "symmetric network needs positive powers");
    }
  }

  NetworkInstance expand() const {
    NetworkInstance net;
    net.h_s = Vector::Constant(m, h_s);
    net.h_d = Vector::Constant(m, h_d);
    net.h_e = Matrix::Constant(1, m, h_e);
    net.p_s = p_s;
    net.p_r = Vector::Constant(m, p_r);
    net.sigma2 = sigma2;
    return net;
  }
};

/// Recognizes a symmetric single-eavesdropper instance (entries equal to `rel_tol`).
inline std::optional<SymmetricParams> as_symmetric(const NetworkInstance& net, double rel_tol = 1e-12) {
  require_valid(net);
  if (net.eavesdroppers() != 1) return std::nullopt;
  auto uniform = [&](const Vector& x) {
    const double ref = x(0);
    return ((x.array() - ref).abs() <= rel_tol * std::max(1.0, std::abs(ref))).all();
  };
  const Vector h_e = net.h_e.row(0).transpose();
  if (!uniform(net.h_s) || !uniform(net.h_d) || !uniform(h_e) || !uniform(net.p_r)) return std::nullopt;
  return SymmetricParams{net.relays(), net.h_s(0), net.h_d(0), h_e(0), net.p_s, net.p_r(0), net.sigma2};
}

namespace detail {

// gamma (M h_s h beta)^2 / (1 + M beta^2 h^2)
inline double symmetric_snr(const SymmetricParams& p, double beta, double h) {
  const double coherent = p.m * p.h_s * h * beta;
  return p.gamma() * coherent * coherent / (1.0 + p.m * beta * beta * h * h);
}

}  // namespace detail

/// Secrecy rate with every relay using the same factor `beta`.
inline double symmetric_rate(const SymmetricParams& p, double beta) {
  const double snr_d = detail::symmetric_snr(p, beta, p.h_d);
  const double snr_e = detail::symmetric_snr(p, beta, p.h_e);
  return 0.5 * (std::log2(1.0 + snr_d) - std::log2(1.0 + snr_e));
}

struct SymmetricSolution {
  double beta_star = 0.0;
  bool interior = false;  // true when the stationary point lies below beta_max
  SolveResult result;
};

/// Closed-form optimal common factor. The equal-beta problem is a single relay
/// with gains sqrt(M) h_s, sqrt(M) h_d, sqrt(M) h_e, whose stationary point is
///   beta^4 = sigma^2 / ((M h_s^2 P_s + sigma^2) M^2 h_d^2 h_e^2),
/// capped at the per-relay bound.
inline SymmetricSolution optimal_beta(const SymmetricParams& p) {
  p.check();
  SymmetricSolution out;
  const double bmax = p.beta_max();
  const double ad = std::abs(p.h_d);
  const double ae = std::abs(p.h_e);
  std::vector<std::string> notes;

  if (ae == ad) {
    out.beta_star = bmax;
    notes.emplace_back("degenerate: eavesdropper gain equals destination gain, rate is zero");
  } else if (ae > ad) {
    out.beta_star = 0.0;
    notes.emplace_back("eavesdropper gain exceeds destination gain; no positive rate, beta = 0");
  } else if (ae == 0.0) {
    out.beta_star = bmax;
  } else {
    const double m = p.m;
    const double equivalent_noise = m * p.h_s * p.h_s * p.p_s + p.sigma2;
    const double stationary =
        std::pow(p.sigma2 / (equivalent_noise * m * m * p.h_d * p.h_d * p.h_e * p.h_e), 0.25);
    out.interior = stationary < bmax;
    out.beta_star = out.interior ? stationary : bmax;
  }

  const NetworkInstance net = p.expand();
  out.result = secrecy_rate(net, Vector::Constant(p.m, out.beta_star), Method::symmetric);
  out.result.diagnostics.values["interior_branch"] = out.interior ? 1.0 : 0.0;
  out.result.diagnostics.values["beta_star"] = out.beta_star;
  out.result.diagnostics.notes = std::move(notes);
  return out;
}

inline SolveResult solve_symmetric(const NetworkInstance& net) {
  const auto params = as_symmetric(net);
  if (!params) {
    throw Error(ErrorKind::unsupported,
                "network is not symmetric with one eavesdropper; use an iterative solver");
  }
  return optimal_beta(*params).result;
}

}  // namespace afsec
