#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qrdmft/aca.hpp"
#include "qrdmft/constraints.hpp"
#include "qrdmft/hubbard.hpp"

namespace qrdmft {
namespace {

Eigen::MatrixXcd ground_rho(std::size_t L, double U) {
  const auto gs = ground_state(HubbardSpec::half_filled(L, 1.0, U));
  return one_particle_dm(gs.basis, gs.state);
}

Eigen::MatrixXcd random_rho(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> occ(0.05, 0.95);
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = Complex(g(rng), g(rng));
  const Eigen::MatrixXcd q = a.householderQr().householderQ();
  Eigen::VectorXd f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = occ(rng);
  return q * f.asDiagonal() * q.adjoint();
}

TEST(Constraints, ListsAndWeightRoundTrip) {
  EXPECT_EQ(rho_constraints(4).size(), 16u);
  EXPECT_EQ(rho_constraints(4, spin_groups(4)).size(), 8u);
  const auto list = rho_constraints(3);
  Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(list.size()), -1.0, 2.0);
  const Eigen::MatrixXcd m = weights_to_matrix(list, w, 3);
  EXPECT_LT((m - m.adjoint()).norm(), 1e-15);
  EXPECT_LT((matrix_to_weights(list, m) - w).norm(), 1e-14);
}

TEST(Constraints, WeightsPairWithResiduals) {
  const auto list = rho_constraints(4);
  const Eigen::MatrixXcd rho = random_rho(4, 1), target = random_rho(4, 2);
  Eigen::VectorXd w(static_cast<Eigen::Index>(list.size()));
  for (Eigen::Index k = 0; k < w.size(); ++k) w[k] = std::sin(1.0 + static_cast<double>(k));
  const Eigen::MatrixXcd m = weights_to_matrix(list, w, 4);
  EXPECT_NEAR(w.dot(rho_residuals(list, rho, target)), (m * (rho - target)).trace().real(), 1e-13);
  for (std::size_t k = 0; k < list.size(); ++k) {
    const Eigen::VectorXd c = rho_residuals(list, target + constraint_direction(list[k], 4), target);
    for (Eigen::Index j = 0; j < c.size(); ++j) EXPECT_NEAR(c[j], j == static_cast<Eigen::Index>(k) ? 1.0 : 0.0, 1e-14);
  }
}

TEST(Decompose, HubbardIsFullyLocal) {
  const auto model = build_hubbard(HubbardSpec::half_filled(4, 1.0, 2.0));
  const auto dec = decompose_local(model.w, site_supports(4));
  ASSERT_EQ(dec.locals.size(), 4u);
  EXPECT_TRUE(dec.non_local.terms.empty());
  for (std::size_t i = 0; i < 4; ++i) {
    ASSERT_EQ(dec.locals[i].w.terms.size(), 1u);
    EXPECT_EQ(dec.locals[i].w.terms[0].alpha, 2 * i);
  }
  EXPECT_THROW(decompose_local(model.w, {{0, 1}, {1, 2}}), std::invalid_argument);
  const auto wl = localize_interaction(dec.locals[2].w, {4, 5}, 6);
  ASSERT_EQ(wl.terms.size(), 1u);
  EXPECT_EQ(wl.terms[0].alpha, 0u);
  EXPECT_EQ(wl.terms[0].beta, 1u);
  EXPECT_EQ(wl.n_modes, 6u);
}

TEST(Aca, TransformIsUnitaryAndBlockTridiagonal) {
  const Eigen::MatrixXcd rho = random_rho(10, 5);
  const auto r = aca_reduce(rho, {3, 7}, 4);
  const Eigen::MatrixXcd& v = r.transform;
  EXPECT_LT((v * v.adjoint() - Eigen::MatrixXcd::Identity(10, 10)).norm(), 1e-12);
  EXPECT_NEAR(std::abs(v(0, 3)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(v(1, 7)), 1.0, 1e-14);
  const Eigen::MatrixXcd t = v * rho * v.adjoint();
  std::vector<std::size_t> start{0};
  for (auto s : r.block_sizes) start.push_back(start.back() + s);
  EXPECT_EQ(start.back(), 10u);
  for (std::size_t bi = 0; bi < r.block_sizes.size(); ++bi)
    for (std::size_t bj = bi + 2; bj < r.block_sizes.size(); ++bj)
      EXPECT_LT(t.block(start[bi], start[bj], r.block_sizes[bi], r.block_sizes[bj]).norm(), 1e-10);
  EXPECT_LT((r.rho_aca - t.topLeftCorner(r.kept, r.kept)).norm(), 1e-10);
}

TEST(Aca, OrderZeroKeepsInteractingBlockAndSaturates) {
  const Eigen::MatrixXcd rho = ground_rho(4, 1.0);
  const auto r0 = aca_reduce(rho, {2, 3}, 0);
  EXPECT_EQ(r0.kept, 2u);
  EXPECT_LT((r0.rho_aca - rho.block(2, 2, 2, 2)).norm(), 1e-12);
  const auto r3 = aca_reduce(rho, {2, 3}, 3);
  EXPECT_EQ(r3.kept, 8u);
  const auto r9 = aca_reduce(rho, {2, 3}, 9);
  EXPECT_EQ(r9.kept, 8u);
  const Eigen::VectorXd f3 = occupations(r3.rho_aca), f = occupations(rho);
  EXPECT_LT((f3 - f).norm(), 1e-10);
}

TEST(Aca, PreservesSpinSeparation) {
  const Eigen::MatrixXcd rho = ground_rho(4, 2.0);
  const auto r = aca_reduce(rho, {0, 1}, 2);
  const Eigen::MatrixXcd& v = r.transform;
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    double even = 0.0, odd = 0.0;
    for (Eigen::Index j = 0; j < v.cols(); ++j) (j % 2 ? odd : even) += std::norm(v(i, j));
    EXPECT_LT(std::min(even, odd), 1e-20) << "row " << i;
  }
}

TEST(Aca, TraceGrowsWithOrderAtHalfFilling) {
  const Eigen::MatrixXcd rho = ground_rho(6, 1.0);
  for (std::size_t n = 0; n <= 3; ++n) {
    const auto r = aca_reduce(rho, {0, 1}, n);
    EXPECT_EQ(r.kept, 2 * (n + 1));
    EXPECT_NEAR(r.rho_aca.trace().real(), static_cast<double>(n + 1), 1e-8);
  }
}

TEST(Aca, NaiveTruncationAndClamping) {
  const Eigen::MatrixXcd rho = ground_rho(3, 1.0);
  const Eigen::MatrixXcd nv = naive_truncate(rho, {2, 3}, 1);
  ASSERT_EQ(nv.rows(), 4);
  const std::vector<std::size_t> order{2, 3, 0, 1};
  EXPECT_LT((nv - permute_modes(rho, order).topLeftCorner(4, 4)).norm(), 1e-12);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2);
  bad(0, 0) = 1.2;
  bad(1, 1) = -0.1;
  const Eigen::VectorXd f = occupations(clamp_occupations(bad));
  EXPECT_GE(f.minCoeff(), 0.0);
  EXPECT_LE(f.maxCoeff(), 1.0);
  EXPECT_THROW(aca_reduce(rho, {2, 9}, 1), std::invalid_argument);
}

}  // namespace
}  // namespace qrdmft
