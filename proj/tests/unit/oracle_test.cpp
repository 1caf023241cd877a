#include <cmath>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "qrdmft/aca.hpp"
#include "qrdmft/constraints.hpp"
#include "qrdmft/errors.hpp"
#include "qrdmft/exact_oracle.hpp"
#include "qrdmft/hubbard.hpp"

namespace qrdmft {
namespace {

using Index = Eigen::Index;

struct Setup {
  HubbardModel model;
  GroundState gs;
  Eigen::MatrixXcd rho;
};

Setup hubbard(std::size_t L, double U) {
  const auto spec = HubbardSpec::half_filled(L, 1.0, U);
  Setup s{build_hubbard(spec), ground_state(spec), {}};
  s.rho = one_particle_dm(s.gs.basis, s.gs.state);
  return s;
}

InteractionSpec site_term(std::size_t n_modes, std::size_t site, double U) {
  InteractionSpec w;
  w.n_modes = n_modes;
  w.terms.push_back({2 * site, 2 * site + 1, 2 * site, 2 * site + 1, U});
  return w;
}

// <c+_a c+_b c_g c_d> of a Slater determinant with density matrix rho.
double slater_energy(const Eigen::MatrixXcd& rho, const InteractionSpec& w) {
  Complex e = 0.0;
  for (const auto& t : w.terms) {
    const auto a = static_cast<Index>(t.alpha), b = static_cast<Index>(t.beta);
    const auto g = static_cast<Index>(t.gamma), d = static_cast<Index>(t.delta);
    e += t.u * (rho(d, a) * rho(g, b) - rho(g, a) * rho(d, b));
  }
  return e.real();
}

TEST(OneBodyTable, MatchesDirectDensityMatrix) {
  const auto s = hubbard(3, 1.5);
  const OneBodyTable table(s.gs.basis);
  EXPECT_LT((table.rho(s.gs.state) - s.rho).norm(), 1e-12);
  Eigen::MatrixXcd k = s.model.h;
  const SparseMatrixXcd direct = build_operator(s.gs.basis, k, InteractionSpec{});
  EXPECT_LT((Eigen::MatrixXcd(table.matrix(k)) - Eigen::MatrixXcd(direct)).norm(), 1e-12);
  EXPECT_LT((table.apply(k, s.gs.state) - direct * s.gs.state).norm(), 1e-12);
}

TEST(ExactOracle, DoublyOccupiedSiteCostsU) {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
  rho(0, 0) = rho(1, 1) = 1.0;
  const auto r = exact_rdmf(rho, site_term(4, 0, 3.0));
  EXPECT_NEAR(r.F, 3.0, 1e-9);
  EXPECT_LT(r.residual, 1e-7);
}

TEST(ExactOracle, IdempotentTargetGivesSlaterEnergy) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  // Up spin occupies one rotated orbital, down spin another.
  Eigen::VectorXcd up = Eigen::VectorXcd::Zero(6), dn = Eigen::VectorXcd::Zero(6);
  for (Index i = 0; i < 6; i += 2) up[i] = Complex(g(rng), g(rng));
  for (Index i = 1; i < 6; i += 2) dn[i] = Complex(g(rng), g(rng));
  up.normalize();
  dn.normalize();
  const Eigen::MatrixXcd rho = up * up.adjoint() + dn * dn.adjoint();
  InteractionSpec w = site_term(6, 0, 1.0);
  w.terms.push_back({2, 3, 2, 3, 2.0});
  const auto r = exact_rdmf(rho, w);
  EXPECT_NEAR(r.F, slater_energy(rho, w), 1e-10);
  EXPECT_LT(r.residual, 1e-10);
}

TEST(ExactOracle, FullInteractionRecoversGroundStateEnergy) {
  for (double U : {0.5, 4.0}) {
    const auto s = hubbard(2, U);
    const auto r = exact_rdmf(s.rho, s.model.w);
    EXPECT_NEAR(r.F + (s.model.h * s.rho).trace().real(), s.gs.energy, 1e-8) << "U=" << U;
    EXPECT_NEAR(s.gs.energy, U / 2 - std::sqrt(U * U / 4 + 4.0), 1e-10);
    EXPECT_TRUE(r.certified);
  }
  for (std::size_t L : {3, 4}) {
    const auto s = hubbard(L, 1.0);
    const auto r = exact_rdmf(s.rho, s.model.w);
    EXPECT_NEAR(r.F + (s.model.h * s.rho).trace().real(), s.gs.energy, 1e-6) << "L=" << L;
  }
}

TEST(ExactOracle, ValueDoesNotDependOnSeed) {
  const auto s = hubbard(4, 1.0);
  const auto w = site_term(8, 0, 1.0);
  OracleOptions a, b;
  b.seed = 99;
  b.restarts = 4;
  EXPECT_NEAR(exact_rdmf(s.rho, w, a).F, exact_rdmf(s.rho, w, b).F, 1e-7);
}

TEST(ExactOracle, HalfFilledSingleSiteNeedsPureState) {
  // Pure states with rho = I/2 on one site must carry |b|^2 = 1/2 double
  // occupancy, so F = U/2 even though an ensemble could reach zero.
  const Eigen::MatrixXcd rho = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
  const auto r = exact_rdmf(rho, site_term(2, 0, 2.0));
  EXPECT_NEAR(r.F, 1.0, 1e-6);
  EXPECT_FALSE(r.certified);
  EXPECT_LE(r.lower_bound, r.F + 1e-9);
}

TEST(ExactOracle, ScalesLinearlyWithInteraction) {
  const auto s = hubbard(2, 1.0);
  const double f1 = exact_rdmf(s.rho, site_term(4, 0, 1.0)).F;
  const double f2 = exact_rdmf(s.rho, site_term(4, 0, 2.0)).F;
  EXPECT_NEAR(f2, 2.0 * f1, 1e-8);
}

TEST(ExactOracle, InvariantUnderModePhases) {
  const auto s = hubbard(3, 2.0);
  const auto w = site_term(6, 1, 2.0);
  Eigen::VectorXcd ph(6);
  for (Index i = 0; i < 6; ++i) ph[i] = std::polar(1.0, 0.7 * static_cast<double>(i * i));
  const Eigen::MatrixXcd rotated = ph.asDiagonal() * s.rho * ph.conjugate().asDiagonal();
  OracleOptions o;
  o.restarts = 3;
  EXPECT_NEAR(exact_rdmf(s.rho, w, o).F, exact_rdmf(rotated, w, o).F, 1e-8);
}

TEST(ExactOracle, SectorSearchAgreesWithFockSearch) {
  const auto s = hubbard(3, 1.0);
  const auto w = site_term(6, 0, 1.0);
  OracleOptions fock;
  fock.restarts = 2;
  fock.dual_iterations = 20;
  OracleOptions sector = fock;
  sector.max_dim = 9;
  const auto a = exact_rdmf(s.rho, w, fock);
  const auto b = exact_rdmf(s.rho, w, sector);
  EXPECT_EQ(a.method, "primal");
  EXPECT_EQ(b.method, "primal-sector");
  EXPECT_NEAR(a.F, b.F, 1e-7);
}

TEST(ExactOracle, SaturatedAcaLeavesFunctionalUnchanged) {
  const auto s = hubbard(3, 1.0);
  const auto w = site_term(6, 1, 1.0);
  const auto a = aca_reduce(s.rho, {2, 3}, 5);
  ASSERT_EQ(a.kept, 6u);
  OracleOptions o;
  o.restarts = 2;
  EXPECT_NEAR(exact_rdmf(s.rho, w, o).F, exact_rdmf(a.rho_aca, localize_interaction(w, {2, 3}, 6), o).F, 1e-7);
}

TEST(ExactOracle, MultipliersMatchFiniteDifferences) {
  const auto s = hubbard(2, 1.0);
  const auto w = site_term(4, 0, 1.0);
  const auto r = exact_rdmf(s.rho, w);
  const auto fd = fd_multipliers(s.rho, w, 1e-4);
  EXPECT_TRUE(fd.one_sided.empty());
  const Eigen::MatrixXcd d = fd.derivative + r.multipliers;
  const auto groups = spin_groups(4);
  for (const auto& g : groups)
    for (auto a : g)
      for (auto b : g) {
        const auto ia = static_cast<Index>(a), ib = static_cast<Index>(b);
        // Diagonals are defined up to a per-group shift.
        const Complex v = a == b ? d(ia, ia) - d(static_cast<Index>(g[0]), static_cast<Index>(g[0])) : d(ia, ib);
        EXPECT_LT(std::abs(v), 1e-3) << a << "," << b;
      }
}

TEST(ExactOracle, CachesResults) {
  const auto dir = std::filesystem::temp_directory_path() / "qrdmft_oracle_cache_test";
  std::filesystem::remove_all(dir);
  const auto s = hubbard(2, 1.0);
  OracleOptions o;
  o.cache_dir = dir.string();
  const auto a = exact_rdmf(s.rho, s.model.w, o);
  const auto b = exact_rdmf(s.rho, s.model.w, o);
  EXPECT_FALSE(a.from_cache);
  EXPECT_TRUE(b.from_cache);
  EXPECT_DOUBLE_EQ(a.F, b.F);
  EXPECT_LT((a.multipliers - b.multipliers).norm(), 1e-12);
  std::filesystem::remove_all(dir);
}

TEST(ExactOracle, RejectsUnrepresentableTargets) {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  rho(0, 0) = 1.1;
  EXPECT_THROW(exact_rdmf(rho, site_term(2, 0, 1.0)), RepresentabilityError);
  const auto s = hubbard(2, 1.0);
  EXPECT_THROW(exact_rdmf(s.rho, site_term(2, 0, 1.0)), std::invalid_argument);
}

}  // namespace
}  // namespace qrdmft
