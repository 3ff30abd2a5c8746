#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "afsec/experiments.hpp"
#include "afsec/io.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kSolverError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("AFSEC_SEED")) {
    try {
      std::size_t used = 0;
      const auto seed = std::stoull(env, &used);
      if (used == std::string(env).size()) return seed;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("AFSEC_SEED is not an unsigned integer: ") + env);
  }
  return 1;
}

afsec::Method method_or_usage(const std::string& name) {
  const auto method = afsec::parse_method(name);
  if (!method) {
    std::string all;
    for (auto m : afsec::kAllMethods) all += std::string(all.empty() ? "" : ", ") + afsec::to_string(m);
    throw UsageError("unknown method '" + name + "' (expected one of: " + all + ")");
  }
  return *method;
}

afsec::PowerConstraint mode_or_usage(const std::string& name) {
  const auto mode = afsec::parse_power_constraint(name);
  if (!mode) throw UsageError("unknown mode '" + name + "' (expected sum or individual)");
  return *mode;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy-rate optimization for amplify-and-forward relay networks"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random degraded network");
  int gen_relays = 5;
  int gen_eavesdroppers = 3;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out;
  double gen_ps = 1.0, gen_pr = 5.0, gen_sigma2 = 1.0, gen_scale = 0.5;
  gen->add_option("--relays", gen_relays, "number of relays")->check(CLI::PositiveNumber);
  gen->add_option("--eavesdroppers", gen_eavesdroppers, "number of eavesdroppers")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", gen_seed, "PRNG seed (default: AFSEC_SEED or 1)");
  gen->add_option("--out", gen_out, "output file (default: standard output)");
  gen->add_option("--ps", gen_ps, "source power");
  gen->add_option("--pr", gen_pr, "per-relay power");
  gen->add_option("--sigma2", gen_sigma2, "noise variance");
  gen->add_option("--scale", gen_scale, "Rayleigh scale of the channel gains");

  // solve
  auto* solve = app.add_subcommand("solve", "compute the relay scaling vector and secrecy rate");
  std::string solve_net, solve_method = "individual_iterative", solve_mode = "individual";
  bool solve_json = false, solve_clamp = false;
  double solve_delta = 0.0;
  int solve_resolution = 101, solve_starts = 100;
  std::optional<std::uint64_t> solve_seed;
  std::optional<double> solve_alpha;
  solve->add_option("--net", solve_net, "network JSON file")->required();
  solve->add_option("--method", solve_method, "solver name");
  solve->add_flag("--json", solve_json, "print the full result as JSON");
  solve->add_flag("--clamp", solve_clamp, "report max(0, rate) in text output");
  solve->add_option("--delta", solve_delta, "golden-section tolerance on eta (default 1e-4 eta_max)");
  solve->add_option("--resolution", solve_resolution, "grid oracle points per dimension");
  solve->add_option("--starts", solve_starts, "multistart oracle start count");
  solve->add_option("--seed", solve_seed, "multistart oracle seed (default: AFSEC_SEED or 1)");
  solve->add_option("--mode", solve_mode, "oracle power constraint: sum or individual");
  solve->add_option("--alpha", solve_alpha, "scaled_alpha: h_e = alpha h_d (inferred when omitted)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over source power or relay count");
  std::string sweep_spec, sweep_var = "source_power", sweep_out, sweep_methods_csv;
  double sweep_from = 0.5, sweep_to = 10.0, sweep_ps = 1.0, sweep_pr = 5.0, sweep_sigma2 = 1.0;
  int sweep_steps = 20, sweep_trials = 100, sweep_relays = 5, sweep_eavesdroppers = 3;
  std::optional<std::uint64_t> sweep_seed;
  std::vector<std::string> sweep_methods;
  bool sweep_clamp = false;
  sweep->add_option("--spec", sweep_spec, "sweep specification JSON; other sweep flags except --seed and --out are ignored");
  sweep->add_option("--var", sweep_var, "source_power or relay_count");
  sweep->add_option("--from", sweep_from);
  sweep->add_option("--to", sweep_to);
  sweep->add_option("--steps", sweep_steps);
  sweep->add_option("--trials", sweep_trials);
  sweep->add_option("--methods", sweep_methods, "solver names")->delimiter(',');
  sweep->add_option("--seed", sweep_seed, "base seed (default: AFSEC_SEED or 1)");
  sweep->add_option("--ps", sweep_ps);
  sweep->add_option("--pr", sweep_pr);
  sweep->add_option("--sigma2", sweep_sigma2);
  sweep->add_option("--relays", sweep_relays);
  sweep->add_option("--eavesdroppers", sweep_eavesdroppers);
  sweep->add_flag("--clamp", sweep_clamp, "average max(0, rate)");
  sweep->add_option("--out", sweep_out, "CSV file (default: standard output)");

  // validate
  auto* check = app.add_subcommand("validate", "check a network file");
  std::string check_file;
  check->add_option("file", check_file, "network JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*gen) {
      const auto seed = gen_seed ? *gen_seed : default_seed();
      const auto net = afsec::gen_network(gen_relays, gen_eavesdroppers, seed, gen_scale, gen_ps, gen_pr, gen_sigma2);
      if (gen_out.empty()) {
        std::cout << afsec::network_to_json(net).dump(2) << '\n';
      } else {
        afsec::save_network(net, gen_out);
      }
      return 0;
    }

    if (*solve) {
      const auto method = method_or_usage(solve_method);
      afsec::SolveOptions opts;
      opts.iterative.delta = solve_delta;
      opts.oracle.resolution = solve_resolution;
      opts.oracle.n_starts = solve_starts;
      opts.oracle.seed = solve_seed ? *solve_seed : default_seed();
      opts.oracle.mode = mode_or_usage(solve_mode);
      opts.alpha = solve_alpha;
      const auto net = afsec::load_network(solve_net);
      const auto result = afsec::solve(net, method, opts);
      if (solve_json) {
        std::cout << afsec::to_json(result).dump(2) << '\n';
      } else {
        std::cout << "method " << afsec::to_string(result.method) << '\n';
        std::cout << "secrecy_rate " << afsec::format_number(solve_clamp ? result.clamped_rate() : result.secrecy_rate)
                  << '\n';
        std::cout << "beta";
        for (Eigen::Index i = 0; i < result.beta.beta.size(); ++i) {
          std::cout << ' ' << afsec::format_number(result.beta.beta(i));
        }
        std::cout << "\niterations " << result.diagnostics.iterations << '\n';
      }
      for (const auto& note : result.diagnostics.notes) std::cerr << "note: " << note << '\n';
      return 0;
    }

    if (*sweep) {
      afsec::ExperimentSpec spec;
      if (!sweep_spec.empty()) {
        try {
          spec = afsec::load_experiment(sweep_spec);
        } catch (const afsec::Error& e) {
          throw UsageError(e.what());
        }
        if (sweep_seed) spec.seed = *sweep_seed;
      } else {
        if (sweep_var == "source_power") {
          spec.sweep = afsec::SweepVariable::source_power;
        } else if (sweep_var == "relay_count") {
          spec.sweep = afsec::SweepVariable::relay_count;
        } else {
          throw UsageError("unknown sweep variable '" + sweep_var + "'");
        }
        spec.from = sweep_from;
        spec.to = sweep_to;
        spec.steps = sweep_steps;
        spec.trials = sweep_trials;
        spec.seed = sweep_seed ? *sweep_seed : default_seed();
        spec.p_s = sweep_ps;
        spec.p_r = sweep_pr;
        spec.sigma2 = sweep_sigma2;
        spec.relays = sweep_relays;
        spec.eavesdroppers = sweep_eavesdroppers;
        spec.clamp = sweep_clamp;
        if (!sweep_methods.empty()) {
          spec.methods.clear();
          for (const auto& name : sweep_methods) spec.methods.push_back(method_or_usage(name));
        }
      }
      try {
        spec.check();
      } catch (const afsec::Error& e) {
        throw UsageError(e.what());
      }
      const auto rows = afsec::run_sweep(spec, &std::cerr);
      if (sweep_out.empty()) {
        afsec::write_csv(std::cout, spec, rows);
      } else {
        std::ofstream out(sweep_out);
        if (!out) throw afsec::Error(afsec::ErrorKind::invalid_input, "cannot write " + sweep_out);
        afsec::write_csv(out, spec, rows);
      }
      return 0;
    }

    if (*check) {
      const auto net = afsec::load_network(check_file);
      const auto report = afsec::validate(net);
      std::cout << "ok=" << (report.ok() ? "true" : "false") << '\n';
      std::cout << "relays=" << net.relays() << '\n';
      std::cout << "eavesdroppers=" << net.eavesdroppers() << '\n';
      std::cout << "degraded=" << (report.degraded ? "true" : "false") << '\n';
      std::cout << "zero_destination_gain=" << (report.zero_destination_gain ? "true" : "false") << '\n';
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const afsec::Error& e) {
    std::cerr << "error (" << afsec::to_string(e.kind()) << "): " << e.what() << '\n';
    return kSolverError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverError;
  }
  return 0;
}
