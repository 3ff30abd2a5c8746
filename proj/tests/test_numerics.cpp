#include <gtest/gtest.h>

#include <random>

#include "afsec/numerics/golden_section.hpp"
#include "afsec/numerics/qcqp.hpp"
#include "afsec/numerics/quartic.hpp"
#include "afsec/numerics/rayleigh.hpp"

using namespace afsec;
using namespace afsec::numerics;

namespace {

// Bisection on a sign change located by dense sampling of [0, hi].
double sampled_root(const QuarticCoeffs& q, double hi) {
  const int samples = 20000;
  double lo = 0.0;
  double up = hi;
  for (int j = 1; j <= samples; ++j) {
    const double x = hi * j / samples;
    if (q(x) > 0.0) {
      up = x;
      lo = hi * (j - 1) / samples;
      break;
    }
  }
  for (int it = 0; it < 200 && up - lo > 1e-12 * std::max(1.0, up); ++it) {
    const double mid = 0.5 * (lo + up);
    (q(mid) > 0.0 ? up : lo) = mid;
  }
  return 0.5 * (lo + up);
}

}  // namespace

TEST(Quartic, PureFourthRoot) {
  EXPECT_NEAR(positive_quartic_root({0.0, 0.0, 0.0, -16.0}), 2.0, 1e-12);
}

TEST(Quartic, CollapsedScaledCase) {
  // p = q = 0, s = 2, alpha = 0.5, no source term: x^4 - 1/(4 * 0.25 * 1)
  EXPECT_NEAR(positive_quartic_root({0.0, 0.0, 0.0, -1.0 / (4.0 * 0.25)}), 1.0, 1e-12);
}

TEST(Quartic, SignPatternErrors) {
  try {
    positive_quartic_root({1.0, 1.0, 1.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::sign_pattern);
  }
  // three variations: + - + -
  EXPECT_THROW(positive_quartic_root({-1.0, 1.0, 0.0, -1.0}), Error);
  EXPECT_THROW(positive_quartic_root({0.0, 0.0, 0.0, 0.0}), Error);
  EXPECT_EQ(sign_variations({2.0, 0.0, 3.0, -1.0}), 1);
}

TEST(Quartic, MatchesSampledBisection) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> mag(0.0, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    // one variation: nonnegative c3, c2, c1 and negative c0
    const QuarticCoeffs q{mag(gen), mag(gen), mag(gen), -(1e-3 + mag(gen) * mag(gen))};
    const double root = positive_quartic_root(q);
    double hi = 1.0;
    while (q(hi) <= 0.0) hi *= 2.0;
    const double expected = sampled_root(q, hi);
    EXPECT_NEAR(root, expected, 1e-10 * std::max(1.0, expected));
    EXPECT_LE(std::abs(q(root)), 1e-10 * std::max(1.0, std::abs(q.c0)));
  }
}

TEST(GoldenSection, KnownMaximizer) {
  auto f = [](double x) { return -(x - 1.0) * (x - 1.0); };
  const auto r = golden_section_max(f, GoldenSectionConfig::with_bound(0.0, 2.0, 1e-4));
  EXPECT_NEAR(r.eta_star, 1.0, 1e-4);
  EXPECT_NEAR(r.best_eta, 1.0, 1e-4);
  EXPECT_LE(r.hi - r.lo, 1e-4);
  EXPECT_LE(r.lo, r.best_eta);
  EXPECT_GE(r.hi, r.best_eta);
}

TEST(GoldenSection, ConstantFunction) {
  auto f = [](double) { return 3.5; };
  const auto r = golden_section_max(f, GoldenSectionConfig::with_bound(0.2, 1.7, 1e-3));
  EXPECT_DOUBLE_EQ(r.f_star, 3.5);
  EXPECT_GE(r.best_eta, 0.2);
  EXPECT_LE(r.best_eta, 1.7);
  EXPECT_GE(r.best_eta, r.lo);
  EXPECT_LE(r.best_eta, r.hi);
}

TEST(GoldenSection, IterationCountWithinBound) {
  auto f = [](double x) { return std::sin(3.0 * x); };
  const auto r = golden_section_max(f, GoldenSectionConfig::with_bound(0.0, 1.0, 0.001));
  EXPECT_LE(r.iterations, 15 + 2);
  EXPECT_NEAR(r.best_eta, M_PI / 6.0, 1e-3);
  // bracket shrinks by the golden ratio each round
  for (std::size_t j = 1; j < r.widths.size(); ++j) {
    EXPECT_NEAR(r.widths[j] / r.widths[j - 1], kGoldenRatioConjugate, 1e-9);
  }
}

TEST(GoldenSection, ExhaustedBudget) {
  auto f = [](double x) { return -x * x; };
  GoldenSectionConfig cfg{0.0, 1.0, 1e-9, 3};
  try {
    golden_section_max(f, cfg);
    FAIL();
  } catch (const GoldenSectionError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_converged);
    EXPECT_EQ(e.best().shrinks, 3);
    EXPECT_LT(e.best().best_eta, 0.3);
  }
  EXPECT_THROW(golden_section_max(f, GoldenSectionConfig{1.0, 1.0, 1e-3, 5}), Error);
}

TEST(IterationBound, Examples) {
  EXPECT_EQ(iteration_bound(1.0, 0.001), 15);
  EXPECT_EQ(iteration_bound(1.0, 1.0), 0);
  EXPECT_EQ(iteration_bound(10.0, 0.01), 15);
  EXPECT_THROW(iteration_bound(0.0, 1.0), Error);
}

TEST(Qcqp, DiagonalEllipsoid) {
  QcqpProblem p;
  p.c = Eigen::Vector3d(1.0, -2.0, 0.5);
  const Eigen::Vector3d d(2.0, 0.5, 3.0);
  p.constraints.push_back(d.asDiagonal().toDenseMatrix());
  const auto sol = solve_linear_qcqp(p);
  const Eigen::VectorXd dinv_c = p.c.cwiseQuotient(d);
  const double value = std::sqrt(p.c.dot(dinv_c));
  EXPECT_NEAR(sol.objective, value, 1e-8);
  EXPECT_LT((sol.v - dinv_c / value).norm(), 1e-4);
  EXPECT_LE(sol.max_constraint, 1.0);
}

TEST(Qcqp, Scalar) {
  QcqpProblem p;
  p.c = Eigen::VectorXd::Constant(1, 1.0);
  p.constraints.push_back(Eigen::MatrixXd::Constant(1, 1, 2.0));
  const auto sol = solve_linear_qcqp(p);
  EXPECT_NEAR(sol.v(0), 1.0 / std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(sol.objective, 1.0 / std::sqrt(2.0), 1e-9);
}

TEST(Qcqp, TwoEllipsesAgainstBoundarySampling) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_pd = [&]() {
    const double angle = M_PI * u(gen);
    Eigen::Matrix2d rot;
    rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    const Eigen::Vector2d eig(0.5 + 4.0 * u(gen), 0.5 + 4.0 * u(gen));
    return Eigen::MatrixXd(rot * eig.asDiagonal() * rot.transpose());
  };
  for (int trial = 0; trial < 10; ++trial) {
    QcqpProblem p;
    p.c = Eigen::Vector2d(u(gen) - 0.5, u(gen) - 0.5);
    p.constraints = {random_pd(), random_pd()};
    const auto sol = solve_linear_qcqp(p);

    // the maximum lies on the boundary of one ellipse, inside the other
    double best = -HUGE_VAL;
    const int samples = 500000;
    for (int e = 0; e < 2; ++e) {
      const Eigen::LLT<Eigen::MatrixXd> llt(p.constraints[e]);
      const Eigen::MatrixXd l_inv_t = llt.matrixU().solve(Eigen::MatrixXd::Identity(2, 2));
      const auto& other = p.constraints[1 - e];
      for (int j = 0; j < samples; ++j) {
        const double th = 2.0 * M_PI * j / samples;
        const Eigen::Vector2d x = l_inv_t * Eigen::Vector2d(std::cos(th), std::sin(th));
        if (x.dot(other * x) <= 1.0) best = std::max(best, p.c.dot(x));
      }
    }
    EXPECT_NEAR(sol.objective, best, 1e-4);
    EXPECT_GE(sol.objective, best - 1e-4);
  }
}

TEST(Qcqp, ErrorPaths) {
  QcqpProblem unbounded;
  unbounded.c = Eigen::Vector2d(1.0, 1.0);
  unbounded.constraints.push_back(Eigen::Vector2d(1.0, 0.0).asDiagonal().toDenseMatrix());
  try {
    solve_linear_qcqp(unbounded);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unbounded);
  }

  QcqpProblem indefinite;
  indefinite.c = Eigen::Vector2d(1.0, 1.0);
  indefinite.constraints.push_back(Eigen::Vector2d(1.0, -1.0).asDiagonal().toDenseMatrix());
  EXPECT_THROW(solve_linear_qcqp(indefinite), Error);

  QcqpProblem empty;
  empty.c = Eigen::Vector2d(1.0, 1.0);
  EXPECT_THROW(solve_linear_qcqp(empty), Error);

  QcqpProblem shape;
  shape.c = Eigen::Vector2d(1.0, 1.0);
  shape.constraints.push_back(Eigen::Matrix3d::Identity());
  try {
    solve_linear_qcqp(shape);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension_mismatch);
  }
}

TEST(Rayleigh, IdentityAndDiagonal) {
  const auto id = rayleigh_direction(Eigen::Vector2d(3.0, 4.0), Eigen::Matrix2d::Identity());
  EXPECT_NEAR(id.value, 25.0, 1e-12);
  EXPECT_NEAR(id.v(0), 0.6, 1e-12);
  EXPECT_NEAR(id.v(1), 0.8, 1e-12);

  const auto diag = rayleigh_direction(Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(1.0, 4.0).asDiagonal().toDenseMatrix());
  EXPECT_NEAR(diag.value, 1.25, 1e-12);
}

TEST(Rayleigh, AgreesWithQcqp) {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd a(3, 3);
    for (int i = 0; i < 9; ++i) a(i) = n(gen);
    const Eigen::MatrixXd c = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(3, 3);
    const Eigen::Vector3d h(n(gen), n(gen), n(gen));
    const auto ray = rayleigh_direction(h, c);
    QcqpProblem p{h, {c}};
    const auto sol = solve_linear_qcqp(p);
    EXPECT_NEAR(ray.value, sol.objective * sol.objective, 1e-7 * ray.value);
  }
}

TEST(Rayleigh, RejectsIndefinite) {
  EXPECT_THROW(rayleigh_direction(Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(1.0, -1.0).asDiagonal().toDenseMatrix()),
               Error);
  EXPECT_THROW(rayleigh_direction(Eigen::Vector3d(1.0, 1.0, 1.0), Eigen::Matrix2d::Identity()), Error);
}
