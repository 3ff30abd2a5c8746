#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "afsec/error.hpp"
#include "afsec/numerics/tolerances.hpp"

namespace afsec::numerics {

/// maximize c'v subject to v' A_j v <= 1 for every A_j (symmetric PSD).
struct QcqpProblem {
  Eigen::VectorXd c;
  std::vector<Eigen::MatrixXd> constraints;
};

struct QcqpSolution {
  Eigen::VectorXd v;
  double objective = 0.0;
  double duality_gap = 0.0;       // constraints / barrier parameter at exit
  double max_constraint = 0.0;    // max_j v' A_j v
  int newton_steps = 0;
  int outer_steps = 0;
};

/// Scratch storage reused across solves of the same size.
struct QcqpWorkspace {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd gradient;
  Eigen::VectorXd step;
  Eigen::VectorXd trial;
  std::vector<Eigen::VectorXd> av;      // A_j v
  std::vector<double> slack;            // 1 - v' A_j v
  std::vector<double> trial_slack;
  Eigen::LDLT<Eigen::MatrixXd> factor;

  void resize(Eigen::Index n, std::size_t m) {
    hessian.resize(n, n);
    gradient.resize(n);
    step.resize(n);
    trial.resize(n);
    av.assign(m, Eigen::VectorXd::Zero(n));
    slack.assign(m, 1.0);
    trial_slack.assign(m, 1.0);
  }
};

/// Throws unless every constraint is square, symmetric and PSD and their sum is
/// positive definite (bounded feasible set).
inline void check_qcqp(const QcqpProblem& p, const Tolerances& tol = kDefaultTolerances) {
  const auto n = p.c.size();
  if (n == 0) throw Error(ErrorKind::invalid_input, "qcqp objective is empty");
  if (p.constraints.empty()) throw Error(ErrorKind::unbounded, "qcqp has no constraints; feasible set unbounded");
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < p.constraints.size(); ++j) {
    const auto& a = p.constraints[j];
    if (a.rows() != n || a.cols() != n) {
      throw Error(ErrorKind::dimension_mismatch, "qcqp constraint " + std::to_string(j) + " has wrong shape");
    }
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > tol.symmetry * scale) {
      throw Error(ErrorKind::invalid_input, "qcqp constraint " + std::to_string(j) + " is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-12 * scale) {
      throw Error(ErrorKind::invalid_input, "qcqp constraint " + std::to_string(j) + " is not positive semidefinite");
    }
    total += a;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(total);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(total, Eigen::EigenvaluesOnly);
  if (llt.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 1e-14 * eig.eigenvalues().maxCoeff()) {
    throw Error(ErrorKind::unbounded, "qcqp constraints leave the feasible set unbounded (no positive definite combination)");
  }
}

/// Log-barrier interior method started at the strictly feasible origin.
inline QcqpSolution solve_linear_qcqp(const QcqpProblem& p, QcqpWorkspace& ws,
                                      const Tolerances& tol = kDefaultTolerances) {
  check_qcqp(p, tol);
  const auto n = p.c.size();
  const auto m = p.constraints.size();
  ws.resize(n, m);

  QcqpSolution sol;
  sol.v = Eigen::VectorXd::Zero(n);
  auto& v = sol.v;

  auto refresh = [&](const Eigen::VectorXd& x, std::vector<double>& slack, bool store_av) {
    for (std::size_t j = 0; j < m; ++j) {
      if (store_av) {
        ws.av[j].noalias() = p.constraints[j] * x;
        slack[j] = 1.0 - x.dot(ws.av[j]);
      } else {
        slack[j] = 1.0 - x.dot(p.constraints[j] * x);
      }
      if (!(slack[j] > 0.0)) return false;
    }
    return true;
  };
  refresh(v, ws.slack, true);

  double t = tol.barrier_initial;
  for (;;) {
    ++sol.outer_steps;
    int steps = 0;
    for (;;) {
      ws.gradient = -t * p.c;
      ws.hessian.setZero();
      for (std::size_t j = 0; j < m; ++j) {
        const double r = ws.slack[j];
        ws.gradient.noalias() += (2.0 / r) * ws.av[j];
        ws.hessian.noalias() += (2.0 / r) * p.constraints[j];
        ws.hessian.noalias() += (4.0 / (r * r)) * ws.av[j] * ws.av[j].transpose();
      }
      ws.factor.compute(ws.hessian);
      if (ws.factor.info() != Eigen::Success) {
        throw Error(ErrorKind::numerical, "qcqp Newton system is singular at barrier " + std::to_string(t));
      }
      ws.step = -ws.factor.solve(ws.gradient);
      const double slope = ws.gradient.dot(ws.step);  // = -lambda^2
      const double decrement = -slope;
      if (!std::isfinite(decrement)) {
        throw Error(ErrorKind::numerical, "qcqp Newton decrement is not finite");
      }
      if (decrement / 2.0 <= tol.newton_decrement) break;
      if (++steps > tol.max_newton_steps) {
        // near the boundary at large t the iterates stop moving in floating point
        if (decrement / 2.0 <= tol.stalled_decrement) break;
        throw Error(ErrorKind::numerical, "qcqp centering did not converge: decrement " +
                                              std::to_string(decrement) + " at barrier " + std::to_string(t));
      }

      double s = 1.0;
      bool moved = false;
      for (int k = 0; k < 200; ++k, s *= tol.backtrack) {
        ws.trial = v + s * ws.step;
        if (!refresh(ws.trial, ws.trial_slack, false)) continue;
        // change of the barrier objective computed as a difference to avoid cancellation
        double change = -t * s * p.c.dot(ws.step);
        for (std::size_t j = 0; j < m; ++j) change -= std::log(ws.trial_slack[j] / ws.slack[j]);
        if (decrement < 0.01 || change <= tol.armijo * s * slope) {
          moved = true;
          break;
        }
      }
      if (!moved) {
        throw Error(ErrorKind::numerical, "qcqp line search failed: decrement " + std::to_string(decrement));
      }
      const bool stalled = (ws.trial - v).norm() <= 1e-15 * (1.0 + v.norm());
      v = ws.trial;
      refresh(v, ws.slack, true);
      if (stalled && decrement / 2.0 <= tol.stalled_decrement) break;
      ++sol.newton_steps;
    }

    sol.duality_gap = static_cast<double>(m) / t;
    if (sol.duality_gap <= tol.barrier_gap) break;
    t *= tol.barrier_growth;
  }

  sol.objective = p.c.dot(v);
  sol.max_constraint = 0.0;
  for (std::size_t j = 0; j < m; ++j) sol.max_constraint = std::max(sol.max_constraint, 1.0 - ws.slack[j]);
  return sol;
}

inline QcqpSolution solve_linear_qcqp(const QcqpProblem& p, const Tolerances& tol = kDefaultTolerances) {
  QcqpWorkspace ws;
  return solve_linear_qcqp(p, ws, tol);
}

}  // namespace afsec::numerics
