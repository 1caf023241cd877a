#pragma once

#include <random>
#include <string>
#include <vector>

#include "dense_oracle.hpp"
#include "qrdmft/pauli.hpp"

namespace fixtures {

using qrdmft::PauliTerm;

// Four commuting strings of the worked synthesis example.
inline std::vector<PauliTerm> worked_example() {
  return {PauliTerm::parse("XZYI"), PauliTerm::parse("YZXI"), PauliTerm::parse("IXZY"), PauliTerm::parse("IYZX")};
}

// StabilizerMatrix::to_string layout for 4 qubits: Z rows, X rows, phase row.
inline std::string stabilizer_text(const char* z, const char* x, const char* r) {
  std::string out;
  for (const char* block : {z, x}) {
    for (const char* p = block; *p; p += 4) out += std::string(p, 4) + "\n";
  }
  return out + r + "\n";
}

// Up to 2n pairwise commuting distinct words, some of them products of others.
inline std::vector<PauliTerm> random_commuting_set(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(1, static_cast<int>(2 * n));
  const int target = size(rng);
  std::vector<PauliTerm> set;
  for (int attempt = 0; attempt < 200 && static_cast<int>(set.size()) < target; ++attempt) {
    PauliTerm cand = dense::random_pauli(n, rng);
    if (attempt % 5 == 4 && set.size() >= 2) cand = (set[0] * set[set.size() - 1]).with_coeff(1.0);
    if (cand.is_identity()) continue;
    bool ok = true;
    for (const auto& p : set) ok = ok && commutes(p, cand, qrdmft::CommutationLevel::Gc) && !p.same_word(cand);
    if (ok) set.push_back(cand);
  }
  return set;
}

}  // namespace fixtures
