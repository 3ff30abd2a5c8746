#pragma once

#include <optional>

#include "afsec/eta_iterative.hpp"
#include "afsec/network.hpp"
#include "afsec/oracle.hpp"
#include "afsec/scaled.hpp"
#include "afsec/symmetric.hpp"
#include "afsec/zero_forcing.hpp"

namespace afsec {

struct SolveOptions {
  IterativeOptions iterative;
  OracleConfig oracle;
  std::optional<double> alpha;  // scaled_alpha: inferred from h_e when unset
};

/// Runs one solver by name.
inline SolveResult solve(const NetworkInstance& net, Method method, const SolveOptions& opts = {}) {
  switch (method) {
    case Method::symmetric: return solve_symmetric(net);
    case Method::scaled_alpha: return opts.alpha ? solve_scaled(net, *opts.alpha) : solve_scaled(net);
    case Method::zero_forcing: return solve_zero_forcing(net);
    case Method::sum_iterative: return solve_sum_iterative(net, opts.iterative);
    case Method::individual_iterative: return solve_individual_iterative(net, opts.iterative);
    case Method::oracle_grid: return grid_search(net, opts.oracle);
    case Method::oracle_multistart: return multistart_search(net, opts.oracle);
  }
  throw Error(ErrorKind::invalid_input, "unknown method");
}

}  // namespace afsec
