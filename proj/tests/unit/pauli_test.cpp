#include <random>

#include <gtest/gtest.h>

#include "dense_oracle.hpp"
#include "qrdmft/pauli.hpp"

namespace qrdmft {
namespace {

const Complex kI{0, 1};

TEST(PauliTerm, ParseAndPrint) {
  const auto t = PauliTerm::parse("XZY I");
  EXPECT_EQ(t.n_qubits(), 4u);
  EXPECT_EQ(t.label(), "XZYI");
  EXPECT_EQ(t.op(2), 'Y');
  EXPECT_TRUE(t.z()[2] && t.x()[2]);
  EXPECT_EQ(t.weight(), 3u);

  const auto c = PauliTerm::parse("(0.5,-1) ZZ");
  EXPECT_EQ(c.coeff(), Complex(0.5, -1));
  EXPECT_EQ(c.to_string(), "(0.5,-1) ZZ");
  EXPECT_EQ(PauliTerm::parse("0.25 XI").to_string(), "0.25 XI");
  EXPECT_EQ(PauliTerm::parse(PauliTerm::parse("0.1 XY").to_string()).coeff(), Complex(0.1, 0));
  EXPECT_THROW(PauliTerm::parse("XQ"), std::invalid_argument);
  EXPECT_THROW(PauliTerm::parse(""), std::invalid_argument);
}

TEST(PauliTerm, PrintsFifteenSignificantDigits) {
  const auto t = PauliTerm::parse("I").with_coeff(1.0 / 3.0);
  EXPECT_EQ(t.to_string(), "0.333333333333333 I");
}

TEST(Multiply, SingleQubitAlgebra) {
  const auto zz = PauliTerm::parse("Z") * PauliTerm::parse("Z");
  EXPECT_TRUE(zz.is_identity());
  EXPECT_EQ(zz.coeff(), Complex(1, 0));

  const auto xy = PauliTerm::parse("X") * PauliTerm::parse("Y");
  EXPECT_EQ(xy.label(), "Z");
  EXPECT_EQ(xy.coeff(), kI);
  EXPECT_EQ((PauliTerm::parse("Y") * PauliTerm::parse("X")).coeff(), -kI);
}

TEST(Multiply, TwoQubitProductMatchesDenseMatrices) {
  const auto a = PauliTerm::parse("XZ");
  const auto b = PauliTerm::parse("YZ");
  const auto p = a * b;
  EXPECT_EQ(p.label(), "ZI");
  EXPECT_EQ(p.coeff(), kI);
  EXPECT_LT(dense::max_abs(dense::pauli(p) - dense::pauli(a) * dense::pauli(b)), 1e-12);
}

TEST(Multiply, RejectsWidthMismatch) {
  EXPECT_THROW(PauliTerm::parse("X") * PauliTerm::parse("XX"), std::invalid_argument);
}

TEST(Multiply, AgreesWithDenseAndIsAssociative) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 4;
    auto a = dense::random_pauli(n, rng).with_coeff({u(rng), u(rng)});
    auto b = dense::random_pauli(n, rng).with_coeff({u(rng), u(rng)});
    auto c = dense::random_pauli(n, rng).with_coeff({u(rng), u(rng)});
    EXPECT_LT(dense::max_abs(dense::pauli(a * b) - dense::pauli(a) * dense::pauli(b)), 1e-12);
    const auto left = (a * b) * c;
    const auto right = a * (b * c);
    EXPECT_TRUE(left.same_word(right));
    EXPECT_NEAR(std::abs(left.coeff() - right.coeff()), 0.0, 1e-12);
  }
}

TEST(Commutes, LevelsOnTextbookExamples) {
  const auto z_i = PauliTerm::parse("ZI");
  const auto i_z = PauliTerm::parse("IZ");
  const auto z_z = PauliTerm::parse("ZZ");
  EXPECT_TRUE(commutes(z_i, i_z, CommutationLevel::Disjoint));
  EXPECT_FALSE(commutes(z_i, z_z, CommutationLevel::Disjoint));
  EXPECT_TRUE(commutes(z_i, z_z, CommutationLevel::Qwc));
  const auto zxx = PauliTerm::parse("ZXX");
  const auto iyz = PauliTerm::parse("IYZ");
  EXPECT_TRUE(commutes(zxx, iyz, CommutationLevel::Gc));
  EXPECT_FALSE(commutes(zxx, iyz, CommutationLevel::Qwc));
  EXPECT_FALSE(commutes(PauliTerm::parse("X"), PauliTerm::parse("Z"), CommutationLevel::Gc));
}

TEST(Commutes, GcMatchesDenseCommutatorAndLevelsNest) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const auto a = dense::random_pauli(n, rng);
    const auto b = dense::random_pauli(n, rng);
    const auto da = dense::pauli(a), db = dense::pauli(b);
    const bool dense_commute = dense::max_abs(da * db - db * da) < 1e-12;
    EXPECT_EQ(commutes(a, b, CommutationLevel::Gc), dense_commute) << a.label() << " " << b.label();
    if (commutes(a, b, CommutationLevel::Disjoint)) EXPECT_TRUE(commutes(a, b, CommutationLevel::Qwc));
    if (commutes(a, b, CommutationLevel::Qwc)) EXPECT_TRUE(commutes(a, b, CommutationLevel::Gc));
  }
}

TEST(Simplify, MergesAndDrops) {
  PauliSum s(1);
  s.add(PauliTerm::parse("0.5 Z"));
  s.add(PauliTerm::parse("0.5 Z"));
  const auto merged = simplify(s);
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_EQ(merged.terms()[0].coeff(), Complex(1.0, 0));

  PauliSum cancel(1);
  cancel.add(PauliTerm::parse("1 X"));
  cancel.add(PauliTerm::parse("-1 X"));
  EXPECT_TRUE(simplify(cancel).empty());
}

TEST(Simplify, DoubleOccupancyExpansionHasFourQuarterTerms) {
  // (1 - Z0)(1 - Z1)/4
  const PauliSum n0 = PauliSum::parse("0.5 II\n-0.5 ZI\n");
  const PauliSum n1 = PauliSum::parse("0.5 II\n-0.5 IZ\n");
  const PauliSum prod = n0 * n1;
  ASSERT_EQ(prod.size(), 4u);
  for (const auto& t : prod.terms()) EXPECT_DOUBLE_EQ(std::abs(t.coeff().real()), 0.25);
  EXPECT_EQ(prod.coefficient_of(PauliTerm::parse("ZZ")), Complex(0.25, 0));
  EXPECT_EQ(prod.coefficient_of(PauliTerm::parse("ZI")), Complex(-0.25, 0));
}

TEST(Simplify, IsIdempotentAndOrdered) {
  std::mt19937_64 rng(3);
  PauliSum s(3);
  for (int k = 0; k < 40; ++k) s.add(dense::random_pauli(3, rng).with_coeff(0.1 * (k % 5)));
  const auto once = simplify(s);
  const auto twice = simplify(once);
  ASSERT_EQ(once.size(), twice.size());
  for (std::size_t k = 0; k < once.size(); ++k) EXPECT_EQ(once.terms()[k], twice.terms()[k]);
  for (std::size_t k = 1; k < once.size(); ++k) EXPECT_TRUE(word_less(once.terms()[k - 1], once.terms()[k]));
  EXPECT_LT(dense::max_abs(dense::pauli(once) - dense::pauli(s)), 1e-12);
}

TEST(PauliSum, TextRoundTripKeepsTerms) {
  const PauliSum s = PauliSum::parse("0.5 XZ\n(0,1) YY\n-2 II\n");
  const PauliSum again = PauliSum::parse(s.to_string());
  ASSERT_EQ(again.size(), 3u);
  EXPECT_EQ(again.terms()[1].coeff(), Complex(0, 1));
}

}  // namespace
}  // namespace qrdmft
