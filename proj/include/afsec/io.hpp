#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "afsec/network.hpp"

namespace afsec {

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw Error(ErrorKind::parse, std::string("missing field '") + name + "'");
  return *it;
}

inline double read_real(const nlohmann::json& j, const char* name) {
  const auto& v = require_field(j, name);
  if (!v.is_number()) throw Error(ErrorKind::parse, std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

inline Vector read_vector(const nlohmann::json& j, const char* name, Eigen::Index expected) {
  const auto& v = require_field(j, name);
  if (!v.is_array()) throw Error(ErrorKind::parse, std::string("field '") + name + "' must be an array");
  if (static_cast<Eigen::Index>(v.size()) != expected) {
    throw Error(ErrorKind::dimension_mismatch, std::string("field '") + name + "' has " +
                                                   std::to_string(v.size()) + " entries, expected " +
                                                   std::to_string(expected));
  }
  Vector out(expected);
  for (Eigen::Index i = 0; i < expected; ++i) {
    if (!v[i].is_number()) throw Error(ErrorKind::parse, std::string("field '") + name + "' holds a non-number");
    out(i) = v[i].get<double>();
  }
  return out;
}

inline nlohmann::json to_array(const Vector& v) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace detail

/// Parses the network schema. Unknown keys are reported on `diag` and ignored.
inline NetworkInstance network_from_json(const nlohmann::json& j, std::ostream& diag = std::cerr) {
  if (!j.is_object()) throw Error(ErrorKind::parse, "network document must be a JSON object");
  static const std::set<std::string> known{"m", "k", "h_s", "h_d", "h_e", "p_s", "p_r", "sigma2"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) diag << "warning: ignoring unknown network field '" << key << "'\n";
  }

  const auto& m_field = detail::require_field(j, "m");
  const auto& k_field = detail::require_field(j, "k");
  if (!m_field.is_number_integer() || !k_field.is_number_integer()) {
    throw Error(ErrorKind::parse, "fields 'm' and 'k' must be integers");
  }
  const auto m = m_field.get<long long>();
  const auto k = k_field.get<long long>();
  if (m < 1) throw Error(ErrorKind::parse, "field 'm' must be at least 1");
  if (k < 0) throw Error(ErrorKind::parse, "field 'k' must be non-negative");

  NetworkInstance net;
  net.h_s = detail::read_vector(j, "h_s", m);
  net.h_d = detail::read_vector(j, "h_d", m);
  net.p_r = detail::read_vector(j, "p_r", m);
  net.p_s = detail::read_real(j, "p_s");
  net.sigma2 = detail::read_real(j, "sigma2");

  const auto& rows = detail::require_field(j, "h_e");
  if (!rows.is_array()) throw Error(ErrorKind::parse, "field 'h_e' must be an array of rows");
  if (static_cast<long long>(rows.size()) != k) {
    throw Error(ErrorKind::dimension_mismatch, "field 'h_e' has " + std::to_string(rows.size()) +
                                                   " rows, expected k = " + std::to_string(k));
  }
  net.h_e.resize(k, m);
  for (long long r = 0; r < k; ++r) {
    nlohmann::json wrapper{{"h_e", rows[r]}};
    net.h_e.row(r) = detail::read_vector(wrapper, "h_e", m).transpose();
  }
  require_valid(net);
  return net;
}

inline nlohmann::json network_to_json(const NetworkInstance& net) {
  nlohmann::json j;
  j["m"] = net.relays();
  j["k"] = net.eavesdroppers();
  j["h_s"] = detail::to_array(net.h_s);
  j["h_d"] = detail::to_array(net.h_d);
  auto rows = nlohmann::json::array();
  for (int k = 0; k < net.eavesdroppers(); ++k) rows.push_back(detail::to_array(net.h_e.row(k).transpose()));
  j["h_e"] = rows;
  j["p_s"] = net.p_s;
  j["p_r"] = detail::to_array(net.p_r);
  j["sigma2"] = net.sigma2;
  return j;
}

inline NetworkInstance load_network(const std::filesystem::path& path, std::ostream& diag = std::cerr) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot open network file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, path.string() + ": " + e.what());
  }
  return network_from_json(j, diag);
}

inline void save_network(const NetworkInstance& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_input, "cannot write network file " + path.string());
  out << network_to_json(net).dump(2) << '\n';
}

inline nlohmann::json to_json(const SolveResult& r) {
  nlohmann::json j;
  j["method"] = to_string(r.method);
  j["beta"] = detail::to_array(r.beta.beta);
  j["beta_max"] = detail::to_array(r.beta.beta_max);
  j["secrecy_rate"] = r.secrecy_rate;
  j["secrecy_rate_clamped"] = r.clamped_rate();
  j["snr_d"] = r.snr_d;
  j["snr_e"] = detail::to_array(r.snr_e);

  nlohmann::json d;
  d["iterations"] = r.diagnostics.iterations;
  if (r.diagnostics.eta_star) d["eta_star"] = *r.diagnostics.eta_star;
  if (r.diagnostics.rate_star) d["rate_star"] = *r.diagnostics.rate_star;
  if (r.diagnostics.inner_residual) d["inner_residual"] = *r.diagnostics.inner_residual;
  for (const auto& [key, value] : r.diagnostics.values) d[key] = value;
  if (!r.diagnostics.notes.empty()) d["notes"] = r.diagnostics.notes;
  j["diagnostics"] = d;
  return j;
}

}  // namespace afsec
