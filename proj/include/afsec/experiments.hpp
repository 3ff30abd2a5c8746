#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "afsec/random.hpp"
#include "afsec/solve.hpp"

namespace afsec {

/// Random network: h_s, h_d i.i.d. Rayleigh(scale); eavesdropper row k is
/// h_d scaled componentwise by Uniform(0, 1), so every eavesdropper is degraded.
/// Draw order: h_s, then h_d, then h_e row by row.
inline NetworkInstance gen_network(int m, int k, std::uint64_t seed, double rayleigh_scale = 0.5,
                                   double p_s = 1.0, double p_r = 5.0, double sigma2 = 1.0) {
  if (m < 1 || k < 0) throw Error(ErrorKind::invalid_input, "gen_network needs m >= 1 and k >= 0");
  if (!(rayleigh_scale > 0.0)) throw Error(ErrorKind::invalid_input, "Rayleigh scale must be positive");
  Rng rng(seed);
  NetworkInstance net;
  net.h_s.resize(m);
  net.h_d.resize(m);
  net.h_e.resize(k, m);
  for (int i = 0; i < m; ++i) net.h_s(i) = rng.rayleigh(rayleigh_scale);
  for (int i = 0; i < m; ++i) net.h_d(i) = rng.rayleigh(rayleigh_scale);
  for (int e = 0; e < k; ++e) {
    for (int i = 0; i < m; ++i) net.h_e(e, i) = net.h_d(i) * rng.uniform_open();
  }
  net.p_s = p_s;
  net.p_r = Vector::Constant(m, p_r);
  net.sigma2 = sigma2;
  return net;
}

enum class SweepVariable { source_power, relay_count };

inline const char* to_string(SweepVariable v) {
  return v == SweepVariable::source_power ? "source_power" : "relay_count";
}

struct ExperimentSpec {
  SweepVariable sweep = SweepVariable::source_power;
  double from = 0.5;
  double to = 10.0;
  int steps = 20;
  int trials = 100;
  std::vector<Method> methods{Method::sum_iterative, Method::individual_iterative, Method::zero_forcing};
  std::uint64_t seed = 1;
  // fixed parameters; the swept one is ignored
  double p_s = 1.0;
  double p_r = 5.0;
  double sigma2 = 1.0;
  int relays = 5;
  int eavesdroppers = 3;
  double rayleigh_scale = 0.5;
  bool clamp = false;
  SolveOptions solve;

  void check() const {
    if (steps < 2) throw Error(ErrorKind::invalid_input, "sweep needs steps >= 2");
    if (trials < 1) throw Error(ErrorKind::invalid_input, "sweep needs trials >= 1");
    if (methods.empty()) throw Error(ErrorKind::invalid_input, "sweep needs at least one method");
    if (!(from <= to)) throw Error(ErrorKind::invalid_input, "sweep range must satisfy from <= to");
    if (sweep == SweepVariable::relay_count) {
      if (from < 1.0 || from != std::floor(from) || to != std::floor(to)) {
        throw Error(ErrorKind::invalid_input, "relay_count sweep needs integer bounds >= 1");
      }
      if (steps != static_cast<int>(to - from) + 1) {
        throw Error(ErrorKind::invalid_input, "relay_count sweep needs steps = to - from + 1");
      }
    } else if (!(from >= 0.0)) {
      throw Error(ErrorKind::invalid_input, "source_power sweep needs from >= 0");
    }
    if (eavesdroppers < 0 || relays < 1) throw Error(ErrorKind::invalid_input, "bad relay/eavesdropper count");
  }

  std::vector<double> points() const {
    std::vector<double> out(steps);
    for (int i = 0; i < steps; ++i) out[i] = from + (to - from) * i / (steps - 1);
    return out;
  }
};

struct ResultRow {
  std::string sweep_var;
  double value = 0.0;
  Method method = Method::individual_iterative;
  double mean_rate = 0.0;  // bits
  double std_rate = 0.0;   // sample standard deviation
  double mean_iters = 0.0;
  int trials = 0;          // trials that produced a rate
  int failures = 0;
  std::vector<std::string> failure_reasons;

  double standard_error() const { return trials > 1 ? std_rate / std::sqrt(trials) : 0.0; }
};

/// Compensated sum.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = sum_ + y;
    c_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

/// Trial t at sweep index p uses mix_seed(spec.seed, p, t). All methods at a
/// point see the same networks. Zero forcing with K >= M (no nulling direction)
/// scores rate 0; any other solver error is counted as a failure.
inline std::vector<ResultRow> run_sweep(const ExperimentSpec& spec, std::ostream* diag = nullptr) {
  spec.check();
  const auto values = spec.points();
  std::vector<ResultRow> rows;
  for (std::size_t p = 0; p < values.size(); ++p) {
    const double value = values[p];
    const int m = spec.sweep == SweepVariable::relay_count ? static_cast<int>(std::lround(value)) : spec.relays;
    const double p_s = spec.sweep == SweepVariable::source_power ? value : spec.p_s;

    std::vector<std::vector<double>> rates(spec.methods.size());
    std::vector<std::vector<double>> iters(spec.methods.size());
    std::vector<ResultRow> point_rows(spec.methods.size());
    for (int t = 0; t < spec.trials; ++t) {
      const auto seed = mix_seed(spec.seed, p, static_cast<std::uint64_t>(t));
      const NetworkInstance net =
          gen_network(m, spec.eavesdroppers, seed, spec.rayleigh_scale, p_s, spec.p_r, spec.sigma2);
      for (std::size_t j = 0; j < spec.methods.size(); ++j) {
        try {
          const SolveResult r = solve(net, spec.methods[j], spec.solve);
          rates[j].push_back(spec.clamp ? r.clamped_rate() : r.secrecy_rate);
          iters[j].push_back(r.diagnostics.iterations);
        } catch (const ZeroForcingInfeasible&) {
          rates[j].push_back(0.0);
          iters[j].push_back(0.0);
        } catch (const std::exception& e) {
          auto& row = point_rows[j];
          ++row.failures;
          row.failure_reasons.push_back("trial " + std::to_string(t) + ": " + e.what());
          if (diag) {
            *diag << "skipped " << to_string(spec.sweep) << "=" << value << " method=" << to_string(spec.methods[j])
                  << " trial " << t << ": " << e.what() << "\n";
          }
        }
      }
    }

    for (std::size_t j = 0; j < spec.methods.size(); ++j) {
      ResultRow& row = point_rows[j];
      row.sweep_var = to_string(spec.sweep);
      row.value = value;
      row.method = spec.methods[j];
      row.trials = static_cast<int>(rates[j].size());
      if (row.trials > 0) {
        KahanSum sum;
        KahanSum it;
        for (std::size_t i = 0; i < rates[j].size(); ++i) {
          sum.add(rates[j][i]);
          it.add(iters[j][i]);
        }
        row.mean_rate = sum.value() / row.trials;
        row.mean_iters = it.value() / row.trials;
        if (row.trials > 1) {
          KahanSum sq;
          for (double r : rates[j]) sq.add((r - row.mean_rate) * (r - row.mean_rate));
          row.std_rate = std::sqrt(sq.value() / (row.trials - 1));
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

/// CSV with a leading `#` metadata line naming the generator and seed.
inline void write_csv(std::ostream& os, const ExperimentSpec& spec, const std::vector<ResultRow>& rows) {
  os << "# afsec sweep prng=" << kPrngName << " seed=" << spec.seed << " rayleigh_scale="
     << format_number(spec.rayleigh_scale) << " p_s=" << format_number(spec.p_s) << " p_r="
     << format_number(spec.p_r) << " sigma2=" << format_number(spec.sigma2) << " relays=" << spec.relays
     << " eavesdroppers=" << spec.eavesdroppers << " clamp=" << (spec.clamp ? 1 : 0) << "\n";
  os << "sweep_var,value,method,mean_rate_bits,std_rate_bits,mean_iters,trials,failures\n";
  for (const auto& r : rows) {
    os << r.sweep_var << ',' << format_number(r.value) << ',' << to_string(r.method) << ','
       << format_number(r.mean_rate) << ',' << format_number(r.std_rate) << ',' << format_number(r.mean_iters)
       << ',' << r.trials << ',' << r.failures << '\n';
  }
}

/// Sweep specification document; keys not listed are reported on `diag`.
inline ExperimentSpec experiment_from_json(const nlohmann::json& j, std::ostream& diag = std::cerr) {
  if (!j.is_object()) throw Error(ErrorKind::parse, "sweep spec must be a JSON object");
  static const std::set<std::string> known{"sweep", "from", "to", "steps", "trials", "methods",
                                           "seed", "p_s", "p_r", "sigma2", "relays", "eavesdroppers",
                                           "rayleigh_scale", "clamp"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) diag << "warning: ignoring unknown sweep field '" << key << "'\n";
  }
  ExperimentSpec spec;
  try {
    const std::string sweep = j.at("sweep").get<std::string>();
    if (sweep == "source_power") {
      spec.sweep = SweepVariable::source_power;
    } else if (sweep == "relay_count") {
      spec.sweep = SweepVariable::relay_count;
    } else {
      throw Error(ErrorKind::invalid_input, "unknown sweep variable '" + sweep + "'");
    }
    spec.from = j.at("from").get<double>();
    spec.to = j.at("to").get<double>();
    spec.steps = j.at("steps").get<int>();
    spec.trials = j.value("trials", spec.trials);
    spec.seed = j.value("seed", spec.seed);
    spec.p_s = j.value("p_s", spec.p_s);
    spec.p_r = j.value("p_r", spec.p_r);
    spec.sigma2 = j.value("sigma2", spec.sigma2);
    spec.relays = j.value("relays", spec.relays);
    spec.eavesdroppers = j.value("eavesdroppers", spec.eavesdroppers);
    spec.rayleigh_scale = j.value("rayleigh_scale", spec.rayleigh_scale);
    spec.clamp = j.value("clamp", spec.clamp);
    if (j.contains("methods")) {
      spec.methods.clear();
      for (const auto& name : j.at("methods")) {
        const auto method = parse_method(name.get<std::string>());
        if (!method) throw Error(ErrorKind::invalid_input, "unknown method '" + name.get<std::string>() + "'");
        spec.methods.push_back(*method);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("sweep spec: ") + e.what());
  }
  spec.check();
  return spec;
}

inline ExperimentSpec load_experiment(const std::filesystem::path& path, std::ostream& diag = std::cerr) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot open " + path.string());
  try {
    return experiment_from_json(nlohmann::json::parse(in), diag);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, path.string() + ": " + e.what());
  }
}

}  // namespace afsec
