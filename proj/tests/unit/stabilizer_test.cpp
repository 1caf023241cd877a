#include <random>

#include <gtest/gtest.h>

#include "dense_oracle.hpp"
#include "fixtures.hpp"
#include "qrdmft/stabilizer.hpp"

namespace qrdmft {
namespace {

using fixtures::worked_example;
using fixtures::random_commuting_set;
const auto matrix = fixtures::stabilizer_text;

const SynthesisStage& stage(const SynthesisResult& r, const std::string& name) {
  for (const auto& s : r.stages)
    if (s.name == name) return s;
  throw std::runtime_error("missing stage " + name);
}

// Dense check that the circuit maps each word to sign * prod Z over its readout set.
void expect_sound(const std::vector<PauliTerm>& words, const SynthesisResult& r) {
  const std::size_t n = words.front().n_qubits();
  const dense::Mat u = dense::unitary(r.circuit);
  for (std::size_t j = 0; j < words.size(); ++j) {
    PauliTerm z(n, static_cast<double>(r.readout[j].sign));
    for (auto q : r.readout[j].qubits) z = z * PauliTerm::single(n, q, 'Z');
    const dense::Mat lhs = u * dense::pauli(words[j].with_coeff(1.0)) * u.adjoint();
    ASSERT_LT(dense::max_abs(lhs - dense::pauli(z)), 1e-12) << words[j].label() << " via " << r.circuit.to_string();
  }
}

TEST(Gf2, Rank) {
  std::vector<BitMask> rows{BitMask(std::string("0110")), BitMask(std::string("1100")), BitMask(std::string("1010"))};
  EXPECT_EQ(gf2_rank(rows), 2u);
  EXPECT_EQ(gf2_rank({}), 0u);
}

TEST(StabilizerFrom, WorkedExampleMatrix) {
  const StabilizerMatrix s = stabilizer_from(worked_example());
  EXPECT_EQ(s.to_string(), matrix("0100110110110010", "1100001111000011", "0000"));
  EXPECT_EQ(s.rank_zx(), 4u);
  EXPECT_EQ(s.rank_x(), 2u);
}

TEST(StabilizerFrom, SingleQubitColumns) {
  const StabilizerMatrix z = stabilizer_from({PauliTerm::parse("ZII")});
  EXPECT_TRUE(z.z[0][0]);
  EXPECT_FALSE(z.x[0][0]);
  const StabilizerMatrix y = stabilizer_from({PauliTerm::parse("IYI")});
  EXPECT_TRUE(y.z[1][0] && y.x[1][0]);
  EXPECT_THROW(stabilizer_from({PauliTerm::parse("X"), PauliTerm::parse("Z")}), std::invalid_argument);
}

TEST(Conjugate, MatchesDenseCliffordAction) {
  std::mt19937_64 rng(43);
  const Gate gates[] = {Gate::h(0),       Gate::s(1),        Gate::sdg(2),     Gate::x(0),
                        Gate::y(1),       Gate::z(2),        Gate::cnot(0, 2), Gate::cnot(2, 1),
                        Gate::cz(0, 1),   Gate::swap(1, 2)};
  for (int trial = 0; trial < 40; ++trial) {
    const PauliTerm p = dense::random_pauli(3, rng);
    for (const auto& g : gates) {
      const StabilizerMatrix s = conjugate(stabilizer_from({p}), g);
      const dense::Mat gm = dense::gate(g, 3);
      const dense::Mat expected = gm * dense::pauli(p) * gm.adjoint();
      EXPECT_LT(dense::max_abs(dense::pauli(s.column(0)) - expected), 1e-12) << p.label() << " " << g.to_string();
    }
  }
  StabilizerMatrix s = stabilizer_from({PauliTerm::parse("X")});
  EXPECT_THROW(conjugate_in_place(s, Gate::rz(0, 0.1)), std::invalid_argument);
}

TEST(Conjugate, PhaseGateOnPureX) {
  StabilizerMatrix s = conjugate(stabilizer_from({PauliTerm::parse("X")}), Gate::s(0));
  EXPECT_TRUE(s.z[0][0]);
  EXPECT_FALSE(s.r[0]);
}

TEST(Synthesize, WorkedExampleStagesAndCircuit) {
  const SynthesisResult r = synthesize(worked_example(), OrderHeuristic::PivotedPlu);
  EXPECT_EQ(stage(r, "rank_max").matrix.to_string(), matrix("1100001110110010", "0100110111000011", "0101"));
  EXPECT_EQ(stage(r, "perm").matrix.to_string(), matrix("0011110000101011", "1101010000111100", "0101"));
  EXPECT_EQ(stage(r, "row_red").matrix.to_string(), matrix("1000110000101011", "1101010000110001", "0101"));
  EXPECT_EQ(stage(r, "diag_red").matrix.to_string(), matrix("1000010000100001", "1000010000100001", "0101"));
  EXPECT_EQ(stage(r, "xz_flip").matrix.to_string(), matrix("1000010000100001", "0000000000000000", "0101"));
  EXPECT_EQ(r.circuit.to_string(),
            "H(0), H(1), SWAP(0,1), SWAP(2,3), CNOT(0,3), CNOT(3,2), CNOT(3,0), CNOT(1,0), "
            "SDG(0), SDG(1), SDG(2), SDG(3), H(0), H(1), H(2), H(3), Y(1), Y(3)");
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(r.readout[j].qubits, std::vector<std::size_t>{j});
    EXPECT_EQ(r.readout[j].sign, 1);
  }
  expect_sound(worked_example(), r);
}

TEST(Synthesize, SingleZNeedsNoGates) {
  const SynthesisResult r = synthesize({PauliTerm::parse("IZI")});
  EXPECT_TRUE(r.circuit.empty());
  EXPECT_EQ(r.readout[0].qubits, std::vector<std::size_t>{1});
  EXPECT_EQ(r.readout[0].sign, 1);
}

TEST(Synthesize, NegativeReadoutSignForDependentWords) {
  // XX, ZZ and their product -YY: the third column carries a sign.
  const std::vector<PauliTerm> words{PauliTerm::parse("XX"), PauliTerm::parse("ZZ"), PauliTerm::parse("YY")};
  for (auto h : {OrderHeuristic::PivotedPlu, OrderHeuristic::NoPermutation}) expect_sound(words, synthesize(words, h));
}

TEST(Synthesize, RandomCommutingSetsAreSound) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const auto words = random_commuting_set(n, rng);
    if (words.empty()) continue;
    for (auto h : {OrderHeuristic::PivotedPlu, OrderHeuristic::NoPermutation}) {
      const SynthesisResult r = synthesize(words, h);
      if (h == OrderHeuristic::NoPermutation) EXPECT_EQ(r.circuit.count(GateKind::SWAP), 0u);
      expect_sound(words, r);
    }
  }
}

TEST(CancelInversePairs, RemovesAdjacentDuplicates) {
  Circuit c(3);
  c.add(Gate::h(0));
  c.add(Gate::cnot(1, 2));
  c.add(Gate::h(0));
  c.add(Gate::cnot(1, 2));
  c.add(Gate::cz(0, 1));
  c.add(Gate::s(2));
  c.add(Gate::cz(1, 0));
  EXPECT_EQ(cancel_inverse_pairs(c).to_string(), "S(2)");
  Circuit d(2);
  d.add(Gate::h(0));
  d.add(Gate::cnot(0, 1));
  d.add(Gate::h(0));
  EXPECT_EQ(cancel_inverse_pairs(d).size(), 3u);
}

}  // namespace
}  // namespace qrdmft
