#include <gtest/gtest.h>

#include <random>

#include "afsec/network.hpp"
#include "support.hpp"

using namespace afsec;

namespace {

NetworkInstance make(Vector h_s, Vector h_d, Matrix h_e, double p_s = 1.0, double p_r = 5.0) {
  NetworkInstance net;
  net.h_s = std::move(h_s);
  net.h_d = std::move(h_d);
  net.h_e = std::move(h_e);
  net.p_s = p_s;
  net.p_r = Vector::Constant(net.h_s.size(), p_r);
  net.sigma2 = 1.0;
  return net;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST(BetaMax, Examples) {
  EXPECT_NEAR(beta_max(5.0, 1.0, 1.0, 1.0), std::sqrt(2.5), 1e-15);
  EXPECT_NEAR(beta_max(5.0, 0.0, 1.0, 1.0), std::sqrt(5.0), 1e-15);
  EXPECT_DOUBLE_EQ(beta_max(1.0, 1.0, 0.0, 1.0), 1.0);
}

TEST(Snr, Examples) {
  auto one = make(vec({1.0}), vec({1.0}), Matrix(0, 1));
  EXPECT_DOUBLE_EQ(snr(one, vec({0.0}), Destination{}), 0.0);
  EXPECT_DOUBLE_EQ(snr(one, vec({1.0}), Destination{}), 0.5);

  auto two = make(vec({1.0, 1.0}), vec({1.0, 1.0}), Matrix(0, 2));
  EXPECT_NEAR(snr(two, vec({1.0, 1.0}), Destination{}), 4.0 / 3.0, 1e-15);
}

TEST(Snr, ErrorPaths) {
  auto net = make(vec({1.0, 1.0}), vec({1.0, 1.0}), Matrix::Constant(1, 2, 0.5));
  try {
    snr(net, vec({1.0}), Destination{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension_mismatch);
  }
  EXPECT_THROW(snr(net, vec({1.0, 1.0}), Eavesdropper{1}), Error);
  EXPECT_THROW(snr(net, vec({1.0, 1.0}), Eavesdropper{-1}), Error);
}

TEST(SecrecyRate, Examples) {
  auto same = make(vec({1.0, 0.7}), vec({0.9, 1.2}), Matrix(1, 2));
  same.h_e.row(0) = same.h_d.transpose();
  for (double b : {0.1, 0.5, 1.3}) {
    EXPECT_NEAR(secrecy_rate_value(same, vec({b, -0.4 * b})), 0.0, 1e-15);
  }

  auto none = make(vec({1.0}), vec({1.0}), Matrix(0, 1));
  EXPECT_NEAR(secrecy_rate_value(none, vec({1.0})), 0.5 * std::log2(1.5), 1e-15);
  EXPECT_NEAR(secrecy_rate_value(none, vec({1.0})), 0.29248, 1e-5);

  auto absent = make(vec({1.0, 1.0}), vec({1.0, 1.0}), Matrix::Zero(1, 2));
  EXPECT_NEAR(secrecy_rate_value(absent, vec({1.0, 1.0})), 0.5 * std::log2(1.0 + 4.0 / 3.0), 1e-15);

  auto any = make(vec({1.0, 0.3}), vec({0.4, 1.1}), Matrix::Constant(2, 2, 0.2));
  EXPECT_DOUBLE_EQ(secrecy_rate_value(any, vec({0.0, 0.0})), 0.0);
}

TEST(SecrecyRate, MatchesReferenceOnRandomNetworks) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + trial % 5;
    const int k = trial % 4;
    const auto net = ref::random_network(gen, m, k, 0.5 + trial % 3);
    Vector beta(m);
    for (int i = 0; i < m; ++i) beta(i) = 2.0 * u(gen);
    const auto result = secrecy_rate(net, beta);
    EXPECT_NEAR(result.secrecy_rate, ref::ref_rate(net, beta), 1e-12);
    EXPECT_NEAR(result.snr_d, ref::ref_snr(net, beta, net.h_d), 1e-12 * (1.0 + result.snr_d));
    ASSERT_EQ(result.snr_e.size(), k);
    EXPECT_TRUE(((result.beta.beta_max - ref::ref_beta_max(net)).array().abs() < 1e-14).all());
  }
}

TEST(SecrecyRate, EvenInBeta) {
  std::mt19937_64 gen(3);
  const auto net = ref::random_network(gen, 4, 2);
  const Vector beta = Vector::LinSpaced(4, -1.0, 1.5);
  EXPECT_DOUBLE_EQ(secrecy_rate_value(net, beta), secrecy_rate_value(net, -beta));
}

TEST(SecrecyRate, ClampedRateIsNonNegative) {
  auto net = make(vec({1.0}), vec({0.5}), Matrix::Constant(1, 1, 0.9));
  const auto result = secrecy_rate(net, vec({1.0}));
  EXPECT_LT(result.secrecy_rate, 0.0);
  EXPECT_DOUBLE_EQ(result.clamped_rate(), 0.0);
}

TEST(Validate, Degradedness) {
  auto ok = make(vec({1.0, 1.0}), vec({1.0, 1.0}), Matrix(1, 2));
  ok.h_e << 0.5, 0.9;
  EXPECT_TRUE(validate(ok).degraded);
  EXPECT_TRUE(validate(ok).ok());

  auto bad = ok;
  bad.h_e << 1.5, 0.2;
  EXPECT_FALSE(validate(bad).degraded);
  EXPECT_TRUE(validate(bad).ok());
}

TEST(Validate, ZeroDestinationGain) {
  auto net = make(vec({1.0, 1.0}), vec({0.0, 1.0}), Matrix::Constant(1, 2, 0.1));
  const auto report = validate(net);
  EXPECT_FALSE(report.ok());
  EXPECT_TRUE(report.zero_destination_gain);
  EXPECT_THROW(require_valid(net), Error);
}

TEST(Validate, DimensionAndPowerErrors) {
  auto net = make(vec({1.0, 1.0}), vec({1.0}), Matrix(0, 2));
  try {
    require_valid(net);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension_mismatch);
  }
  auto power = make(vec({1.0}), vec({1.0}), Matrix(0, 1));
  power.sigma2 = 0.0;
  EXPECT_FALSE(validate(power).ok());
  power.sigma2 = 1.0;
  power.p_r(0) = -1.0;
  EXPECT_FALSE(validate(power).ok());
}

TEST(ScalingVector, Feasibility) {
  ScalingVector s{vec({1.0, -2.0}), vec({1.0, 2.0})};
  EXPECT_TRUE(s.feasible());
  s.beta(1) = -2.1;
  EXPECT_FALSE(s.feasible());
}

TEST(Method, NamesRoundTrip) {
  for (Method m : kAllMethods) EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_FALSE(parse_method("direct").has_value());
  EXPECT_EQ(parse_power_constraint("sum"), PowerConstraint::sum);
  EXPECT_FALSE(parse_power_constraint("both").has_value());
}
