#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qrdmft/circuit.hpp"
#include "qrdmft/pauli.hpp"

namespace qrdmft {

/// Rank over GF(2) of the matrix whose rows are `rows`.
std::size_t gf2_rank(std::vector<BitMask> rows);

/// Stabilizer matrix of N Pauli words on n qubits.
///
/// Rows are stored as bit vectors over the N columns: z[q][j] = 1 iff word
/// j has Z or Y on qubit q, x[q][j] = 1 iff it has X or Y there, and r[j]
/// is the sign bit of column j, which always represents (-1)^r[j] * P_j.
struct StabilizerMatrix {
  std::size_t n_qubits = 0;
  std::size_t n_strings = 0;
  std::vector<BitMask> z;
  std::vector<BitMask> x;
  BitMask r;

  /// Column j as a signed Pauli word (coefficient +1 or -1).
  PauliTerm column(std::size_t j) const;
  std::size_t rank_x() const { return gf2_rank(x); }
  /// Rank of the stacked [S_Z; S_X] matrix.
  std::size_t rank_zx() const;
  /// 2n+1 lines of 0/1 digits: Z rows, X rows, phase row.
  std::string to_string() const;
  bool operator==(const StabilizerMatrix& other) const;
};

/// Builds the matrix with r = 0. Throws std::invalid_argument if the words
/// do not pairwise commute or act on different qubit counts.
StabilizerMatrix stabilizer_from(const std::vector<PauliTerm>& paulis);

/// Conjugation P -> g P g^dagger applied to every column, phase included.
/// Supported gates: H, S, SDG, X, Y, Z, CNOT, CZ, SWAP.
void conjugate_in_place(StabilizerMatrix& s, const Gate& g);
StabilizerMatrix conjugate(StabilizerMatrix s, const Gate& g);

/// How the X block is brought to echelon form.
enum class OrderHeuristic {
  /// Partial pivoting with SWAP gates (row exchanges of a PLU factorization).
  PivotedPlu,
  /// Pivot rows are used where they are, so no SWAP gates are emitted.
  NoPermutation,
};

std::string_view to_string(OrderHeuristic h);
OrderHeuristic parse_order_heuristic(std::string_view text);

struct Readout {
  std::vector<std::size_t> qubits;
  int sign = 1;
};

struct SynthesisStage {
  std::string name;  // prep, rank_max, perm, row_red, diag_red, z_red, xz_flip, sign
  StabilizerMatrix matrix;
  std::vector<Gate> gates;  // gates emitted by this stage
};

struct SynthesisResult {
  Circuit circuit;
  std::vector<Readout> readout;  // one per input word
  std::vector<SynthesisStage> stages;
};

/// Measurement circuit for a set of pairwise commuting words: after the
/// circuit U, U P_j U^dagger = sign_j * prod_{q in Q_j} Z_q.
SynthesisResult synthesize(const std::vector<PauliTerm>& paulis,
                           OrderHeuristic heuristic = OrderHeuristic::NoPermutation);

}  // namespace qrdmft
