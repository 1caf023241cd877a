#include <cmath>

#include <gtest/gtest.h>

#include "qrdmft/auglag.hpp"
#include "qrdmft/optimizers.hpp"

namespace qrdmft {
namespace {

double sphere(const Eigen::VectorXd& u) { return u.squaredNorm(); }

// min (u - 1)^2 subject to u = 0.
ConstrainedProblem shifted_parabola() {
  ConstrainedProblem p;
  p.n_params = 1;
  p.n_constraints = 1;
  p.evaluate = [](const Eigen::VectorXd& u, const Eigen::VectorXd&, const Eigen::VectorXd&, Eigen::VectorXd& c) {
    c[0] = u[0];
    return (u[0] - 1.0) * (u[0] - 1.0);
  };
  p.gradient = [](const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
    return Eigen::VectorXd::Constant(1, 2.0 * (u[0] - 1.0) + w[0]);
  };
  return p;
}

TEST(Lbfgs, SolvesRosenbrock) {
  auto f = [](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    if (g) {
      g->resize(2);
      (*g)[0] = -2.0 * a - 400.0 * x[0] * b;
      (*g)[1] = 200.0 * b;
    }
    return a * a + 100.0 * b * b;
  };
  std::size_t hooks = 0;
  const auto r = lbfgs_minimize(f, Eigen::Vector2d(-1.2, 1.0), {},
                                [&](std::size_t, const Eigen::VectorXd&, double) { ++hooks; });
  EXPECT_NEAR(r.x[0], 1.0, 1e-5);
  EXPECT_NEAR(r.x[1], 1.0, 1e-5);
  EXPECT_GT(hooks, 5u);
}

TEST(Simplex, FindsQuadraticMinimum) {
  auto f = [](const Eigen::VectorXd& x) { return (x[0] - 0.3) * (x[0] - 0.3) + 2.0 * (x[1] + 0.2) * (x[1] + 0.2); };
  SimplexOptions o;
  o.tolerance = 1e-6;
  const auto r = simplex_minimize(f, Eigen::Vector2d(1.0, 1.0), o);
  EXPECT_NEAR(r.x[0], 0.3, 1e-4);
  EXPECT_NEAR(r.x[1], -0.2, 1e-4);
}

TEST(Spsa, ConvergesOnSphereAndIsSeeded) {
  SpsaOptions o;
  o.iterations = 2000;
  o.seed = 11;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Ones(4);
  const auto a = spsa_minimize(sphere, x0, o);
  EXPECT_LT(a.x.norm(), 0.1);
  const auto b = spsa_minimize(sphere, x0, o);
  EXPECT_EQ(a.x, b.x);
  o.seed = 12;
  const auto c = spsa_minimize(sphere, x0, o);
  EXPECT_NE(a.x, c.x);
}

TEST(Spsa, NeverReturnsWorseThanStart) {
  SpsaOptions o;
  o.iterations = 5;
  o.a = 50.0;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(2, 0.01);
  const auto r = spsa_minimize(sphere, x0, o);
  EXPECT_LE(r.value, sphere(x0) + 1e-15);
}

TEST(AugLag, RecoversMultiplierOfActiveConstraint) {
  AugLagConfig cfg;
  cfg.max_outer = 30;
  cfg.inner_tol = 1e-12;
  const auto s = auglag_minimize(shifted_parabola(), Eigen::VectorXd::Zero(1), Eigen::VectorXd(), cfg);
  EXPECT_TRUE(s.converged);
  EXPECT_NEAR(s.u[0], 0.0, 1e-5);
  EXPECT_NEAR(s.lambda[0], 2.0, 1e-4);
  EXPECT_NEAR(s.objective, 1.0, 1e-4);
}

TEST(AugLag, ExactMultiplierConvergesInOneOuterIteration) {
  AugLagConfig cfg;
  cfg.inner_tol = 1e-12;
  const auto s = auglag_minimize(shifted_parabola(), Eigen::VectorXd::Constant(1, 0.7), Eigen::VectorXd::Constant(1, 2.0), cfg);
  EXPECT_TRUE(s.converged);
  EXPECT_EQ(s.outer_iterations, 1u);
}

TEST(AugLag, DerivativeFreeInnerSolvers) {
  for (InnerSolver inner : {InnerSolver::Simplex, InnerSolver::Spsa}) {
    AugLagConfig cfg;
    cfg.inner = inner;
    cfg.inner_tol = 1e-6;
    cfg.max_outer = 15;
    cfg.constraint_tol = 1e-4;
    cfg.spsa.iterations = 400;
    cfg.spsa.a = 0.05;
    const auto s = auglag_minimize(shifted_parabola(), Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd(), cfg);
    EXPECT_LT(std::abs(s.u[0]), 0.05) << to_string(inner);
    EXPECT_NEAR(s.lambda[0], 2.0, 0.2) << to_string(inner);
  }
}

TEST(AugLag, ConditionalPenaltyConverges) {
  AugLagConfig cfg;
  cfg.conditional_penalty = true;
  cfg.max_outer = 30;
  cfg.inner_tol = 1e-12;
  const auto s = auglag_minimize(shifted_parabola(), Eigen::VectorXd::Zero(1), Eigen::VectorXd(), cfg);
  EXPECT_TRUE(s.converged);
  EXPECT_NEAR(s.lambda[0], 2.0, 1e-4);
}

TEST(AugLag, FlagsIncompatibleConstraints) {
  ConstrainedProblem p;
  p.n_params = 1;
  p.n_constraints = 2;
  p.evaluate = [](const Eigen::VectorXd& u, const Eigen::VectorXd&, const Eigen::VectorXd&, Eigen::VectorXd& c) {
    c[0] = u[0];
    c[1] = u[0] - 1.0;
    return 0.0;
  };
  p.gradient = [](const Eigen::VectorXd&, const Eigen::VectorXd& w) { return Eigen::VectorXd::Constant(1, w[0] + w[1]); };
  AugLagConfig cfg;
  cfg.max_outer = 50;
  const auto s = auglag_minimize(p, Eigen::VectorXd::Zero(1), Eigen::VectorXd(), cfg);
  EXPECT_TRUE(s.infeasible);
  EXPECT_FALSE(s.converged);
  EXPECT_LT(s.outer_iterations, 50u);
}

TEST(AugLag, TraceAndOuterRecords) {
  AugLagConfig cfg;
  cfg.max_outer = 30;
  cfg.inner_tol = 1e-12;
  const auto s = auglag_minimize(shifted_parabola(), Eigen::VectorXd::Constant(1, 3.0), Eigen::VectorXd(), cfg);
  ASSERT_FALSE(s.trace.empty());
  ASSERT_EQ(s.outer.size(), s.outer_iterations);
  for (std::size_t i = 1; i < s.trace.size(); ++i) EXPECT_GE(s.trace[i].evaluations, s.trace[i - 1].evaluations);
  for (std::size_t i = 1; i < s.outer.size(); ++i) EXPECT_GT(s.outer[i].max_mu, s.outer[i - 1].max_mu);
}

TEST(AugLag, RejectsBadConfiguration) {
  AugLagConfig cfg;
  cfg.beta = 1.0;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg.beta = 2.0;
  cfg.mu0 = 0.0;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  EXPECT_THROW(parse_inner_solver("newton"), std::invalid_argument);
  EXPECT_EQ(parse_inner_solver("spsa"), InnerSolver::Spsa);
}

}  // namespace
}  // namespace qrdmft
