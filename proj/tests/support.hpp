#pragma once

// Reference formulas written out directly for cross-checking the library.

#include <cmath>
#include <random>

#include "afsec/network.hpp"

namespace afsec::ref {

inline double ref_snr(const NetworkInstance& net, const Vector& beta, const Vector& h) {
  double coherent = 0.0;
  double noise = 1.0;
  for (int i = 0; i < net.relays(); ++i) {
    coherent += net.h_s(i) * beta(i) * h(i);
    noise += beta(i) * h(i) * beta(i) * h(i);
  }
  return net.p_s / net.sigma2 * coherent * coherent / noise;
}

inline double ref_rate(const NetworkInstance& net, const Vector& beta) {
  const double d = ref_snr(net, beta, net.h_d);
  double worst = 0.0;
  for (int k = 0; k < net.eavesdroppers(); ++k) {
    worst = std::max(worst, ref_snr(net, beta, net.h_e.row(k).transpose()));
  }
  return 0.5 * std::log2((1.0 + d) / (1.0 + worst));
}

inline Vector ref_beta_max(const NetworkInstance& net) {
  Vector out(net.relays());
  for (int i = 0; i < net.relays(); ++i) {
    out(i) = std::sqrt(net.p_r(i) / (net.h_s(i) * net.h_s(i) * net.p_s + net.sigma2));
  }
  return out;
}

/// Independent of the library generator: degraded network with gains in (0.1, 1.5).
inline NetworkInstance random_network(std::mt19937_64& gen, int m, int k, double p_s = 1.0,
                                      double p_r = 5.0) {
  std::uniform_real_distribution<double> gain(0.1, 1.5);
  std::uniform_real_distribution<double> shrink(0.05, 0.95);
  NetworkInstance net;
  net.h_s.resize(m);
  net.h_d.resize(m);
  net.h_e.resize(k, m);
  for (int i = 0; i < m; ++i) net.h_s(i) = gain(gen);
  for (int i = 0; i < m; ++i) net.h_d(i) = gain(gen);
  for (int e = 0; e < k; ++e) {
    for (int i = 0; i < m; ++i) net.h_e(e, i) = net.h_d(i) * shrink(gen);
  }
  net.p_s = p_s;
  net.p_r = Vector::Constant(m, p_r);
  net.sigma2 = 1.0;
  return net;
}

}  // namespace afsec::ref
