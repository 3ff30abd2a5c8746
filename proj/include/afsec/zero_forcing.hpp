#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "afsec/network.hpp"

namespace afsec {

class ZeroForcingInfeasible : public Error {
 public:
  explicit ZeroForcingInfeasible(const std::string& what) : Error(ErrorKind::infeasible, what) {}
};

/// Variables w = [omega / v, 1 / v] with v = g_s' omega. Minimizing w'w over
///   h_tilde w = e_1  (destination normalization, then one null row per eavesdropper)
///   h_beta  w <= 0   (|w_i| <= |h_{i,d}| beta_{i,max} w_{M+1})
/// maximizes SNR_d = 1 / w'w with every eavesdropper nulled.
struct ZfProgram {
  Matrix h_tilde;  // (K+1) x (M+1), last column zero
  Matrix h_beta;   // 2M x (M+1)
  Vector bound;    // |h_{i,d}| beta_{i,max}
  int dim = 0;     // M + 1
};

inline ZfProgram build_zf_program(const NetworkInstance& net) {
  require_valid(net);
  const int m = net.relays();
  const int k = net.eavesdroppers();
  if (k == 0) {
    throw Error(ErrorKind::invalid_input,
                "zero forcing needs at least one eavesdropper; use sum_iterative or individual_iterative");
  }

  ZfProgram zf;
  zf.dim = m + 1;
  zf.h_tilde = Matrix::Zero(k + 1, m + 1);
  zf.h_tilde.row(0).head(m) = std::sqrt(net.gamma()) * net.h_s.transpose();
  for (int e = 0; e < k; ++e) {
    for (int i = 0; i < m; ++i) zf.h_tilde(e + 1, i) = net.h_s(i) * net.h_e(e, i) / net.h_d(i);
  }

  zf.bound = net.h_d.cwiseAbs().cwiseProduct(compute_beta_max(net));
  zf.h_beta = Matrix::Zero(2 * m, m + 1);
  for (int i = 0; i < m; ++i) {
    zf.h_beta(2 * i, i) = 1.0;
    zf.h_beta(2 * i, m) = -zf.bound(i);
    zf.h_beta(2 * i + 1, i) = -1.0;
    zf.h_beta(2 * i + 1, m) = -zf.bound(i);
  }

  // e_1 must lie in the range of the equality rows, otherwise only omega = 0 nulls
  // every eavesdropper and the destination row cannot equal 1.
  const Matrix g = zf.h_tilde.leftCols(m);
  Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(1e-12);
  Vector e1 = Vector::Zero(k + 1);
  e1(0) = 1.0;
  const Vector x0 = svd.solve(e1);
  const double residual = (g * x0 - e1).norm();
  if (!(residual <= 1e-9)) {
    throw ZeroForcingInfeasible("zero-forcing infeasible: eavesdropper constraints exhaust relay dimensions (K = " +
                                std::to_string(k) + ", M = " + std::to_string(m) + ", residual " +
                                std::to_string(residual) + ")");
  }
  return zf;
}

namespace detail {

struct ActiveSetResult {
  Vector y;
  int iterations = 0;
};

// min 1/2 ||y||^2  s.t.  a y <= b, primal active set from a feasible y.
inline ActiveSetResult min_norm_active_set(const Matrix& a, const Vector& b, Vector y) {
  const auto rows = a.rows();
  std::vector<int> working;
  ActiveSetResult out;
  const int max_iter = 50 * static_cast<int>(rows + y.size()) + 100;
  for (; out.iterations < max_iter; ++out.iterations) {
    Vector step;
    if (working.empty()) {
      step = -y;
    } else {
      Matrix aw(working.size(), y.size());
      for (std::size_t j = 0; j < working.size(); ++j) aw.row(j) = a.row(working[j]);
      Eigen::ColPivHouseholderQR<Matrix> qr(aw.transpose());
      const auto rank = qr.rank();
      const Matrix q = Matrix(qr.householderQ()).leftCols(rank);
      step = -(y - q * (q.transpose() * y));
    }

    if (step.norm() <= 1e-14 * (1.0 + y.norm())) {
      if (working.empty()) break;
      Matrix awt(y.size(), working.size());
      for (std::size_t j = 0; j < working.size(); ++j) awt.col(j) = a.row(working[j]).transpose();
      const Vector lambda = awt.colPivHouseholderQr().solve(-y);
      Eigen::Index worst = 0;
      const double min_lambda = lambda.minCoeff(&worst);
      if (min_lambda >= -1e-12 * (1.0 + lambda.cwiseAbs().maxCoeff())) break;
      working.erase(working.begin() + worst);
      continue;
    }

    double alpha = 1.0;
    int blocking = -1;
    for (Eigen::Index j = 0; j < rows; ++j) {
      if (std::find(working.begin(), working.end(), static_cast<int>(j)) != working.end()) continue;
      const double slope = a.row(j).dot(step);
      if (slope <= 1e-15 * step.norm()) continue;
      const double limit = std::max(0.0, (b(j) - a.row(j).dot(y)) / slope);
      if (limit < alpha) {
        alpha = limit;
        blocking = static_cast<int>(j);
      }
    }
    y += alpha * step;
    if (blocking >= 0) working.push_back(blocking);
  }
  if (out.iterations >= max_iter) throw Error(ErrorKind::numerical, "zero-forcing active set did not converge");
  out.y = std::move(y);
  return out;
}

}  // namespace detail

/// Sub-optimal solution that cancels the source signal at every eavesdropper.
inline SolveResult solve_zero_forcing(const NetworkInstance& net) {
  const ZfProgram zf = build_zf_program(net);
  const int m = net.relays();

  // Reduce to the free directions of the equality rows: x = x0 + N z with x0 the
  // minimum-norm solution, so ||x||^2 = ||x0||^2 + ||z||^2.
  const Matrix g = zf.h_tilde.leftCols(m);
  Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(1e-12);
  Vector e1 = Vector::Zero(g.rows());
  e1(0) = 1.0;
  const Vector x0 = svd.solve(e1);
  const auto rank = svd.rank();
  const Matrix null = svd.matrixV().rightCols(m - rank);
  const auto free = null.cols();

  // variables y = [z, t]; constraints +-(x0_i + N_i z) - c_i t <= 0
  Matrix a(2 * m, free + 1);
  Vector b(2 * m);
  for (int i = 0; i < m; ++i) {
    a.row(2 * i).head(free) = null.row(i);
    a(2 * i, free) = -zf.bound(i);
    b(2 * i) = -x0(i);
    a.row(2 * i + 1).head(free) = -null.row(i);
    a(2 * i + 1, free) = -zf.bound(i);
    b(2 * i + 1) = x0(i);
  }
  Vector start = Vector::Zero(free + 1);
  start(free) = x0.cwiseAbs().cwiseQuotient(zf.bound).maxCoeff();
  const auto qp = detail::min_norm_active_set(a, b, start);

  const Vector x = x0 + null * qp.y.head(free);
  const double t = qp.y(free);
  if (!(t > 0.0)) throw Error(ErrorKind::numerical, "zero-forcing solution has non-positive 1/v");

  const Vector bmax = compute_beta_max(net);
  Vector beta(m);
  for (int i = 0; i < m; ++i) beta(i) = std::clamp(x(i) / t / net.h_d(i), -bmax(i), bmax(i));

  SolveResult result = secrecy_rate(net, beta, Method::zero_forcing);
  result.diagnostics.iterations = qp.iterations;
  const double wtw = x.squaredNorm() + t * t;
  result.diagnostics.values["w_norm2"] = wtw;
  result.diagnostics.values["snr_d_program"] = 1.0 / wtw;
  result.diagnostics.inner_residual = (g.bottomRows(g.rows() - 1) * x).cwiseAbs().maxCoeff();
  return result;
}

}  // namespace afsec
