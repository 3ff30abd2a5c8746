#pragma once

#include <Eigen/Dense>

#include <cmath>

#include "afsec/error.hpp"

namespace afsec::numerics {

struct RayleighSolution {
  Eigen::VectorXd v;   // C^-1 h scaled so that v' C v = 1
  double value = 0.0;  // h' C^-1 h = max (h'v)^2 over v' C v <= 1
};

/// Generalized Rayleigh quotient maximizer for a symmetric positive definite C.
inline RayleighSolution rayleigh_direction(const Eigen::VectorXd& h, const Eigen::MatrixXd& c) {
  if (c.rows() != c.cols() || c.rows() != h.size()) {
    throw Error(ErrorKind::dimension_mismatch, "rayleigh_direction: shape mismatch");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::invalid_input, "rayleigh_direction: matrix is not positive definite");
  }
  RayleighSolution out;
  const Eigen::VectorXd x = llt.solve(h);
  out.value = h.dot(x);
  if (!(out.value > 0.0)) {
    out.v = Eigen::VectorXd::Zero(h.size());
    out.value = 0.0;
    return out;
  }
  out.v = x / std::sqrt(out.value);
  return out;
}

}  // namespace afsec::numerics
