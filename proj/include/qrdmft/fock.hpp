#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qrdmft/encoding.hpp"

namespace qrdmft {

using SparseMatrixXcd = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

/// Occupation-number determinants spanning a Fock space or one of its
/// particle-number sectors. Bit j of a state is the occupation of mode j,
/// so for the full space the basis index equals the bit pattern (and the
/// Jordan-Wigner qubit index).
class FockBasis {
 public:
  static constexpr std::size_t kMaxModes = 30;

  /// All 2^n determinants.
  static FockBasis full(std::size_t n_modes);
  /// Determinants with exactly counts[g] particles in modes groups[g].
  /// Modes outside every group are unconstrained.
  static FockBasis sector(std::size_t n_modes, const std::vector<std::vector<std::size_t>>& groups,
                          const std::vector<std::size_t>& counts);
  /// Number of states the sector would contain, without building it.
  static std::size_t sector_dimension(std::size_t n_modes, const std::vector<std::vector<std::size_t>>& groups,
                                      const std::vector<std::size_t>& counts);

  std::size_t n_modes() const { return n_modes_; }
  std::size_t dim() const { return states_.size(); }
  bool is_full() const { return full_; }
  const std::vector<std::uint64_t>& states() const { return states_; }
  std::uint64_t state(std::size_t i) const { return states_[i]; }
  std::optional<std::size_t> index(std::uint64_t state) const;

 private:
  std::size_t n_modes_ = 0;
  bool full_ = false;
  std::vector<std::uint64_t> states_;  // ascending
};

/// Applies c_mode or c+_mode to `state` in place, multiplying `sign` by the
/// fermionic sign. Returns false when the result vanishes.
bool apply_ladder(std::uint64_t& state, int& sign, std::size_t mode, bool create);

/// Matrix of sum_{ab} k_ab c+_a c_b + w on `basis`. Entries (|.| > 1e-14)
/// leading outside the basis raise std::invalid_argument.
SparseMatrixXcd build_operator(const FockBasis& basis, const Eigen::MatrixXcd& k, const InteractionSpec& w);

/// rho_{ab} = <psi| c+_b c_a |psi> for a normalized state on `basis`.
Eigen::MatrixXcd one_particle_dm(const FockBasis& basis, const Eigen::VectorXcd& psi);

/// <psi|w|psi>, real part.
double expectation(const FockBasis& basis, const InteractionSpec& w, const Eigen::VectorXcd& psi);

/// Precomputed action of every c+_a c_b on a basis. Pairs that leave the
/// basis are skipped, which is exact for sector bases when only pairs
/// inside a conserved group are used.
class OneBodyTable {
 public:
  explicit OneBodyTable(const FockBasis& basis);

  const FockBasis& basis() const { return basis_; }
  /// rho_{ab} = <x| c+_b c_a |x> / <x|x>.
  Eigen::MatrixXcd rho(const Eigen::VectorXcd& x) const;
  /// t_{ab} = <bra| c+_b c_a |ket>, unnormalized.
  Eigen::MatrixXcd transition(const Eigen::VectorXcd& bra, const Eigen::VectorXcd& ket) const;
  /// y = sum_{ab} k_ab c+_a c_b x.
  Eigen::VectorXcd apply(const Eigen::MatrixXcd& k, const Eigen::VectorXcd& x) const;
  SparseMatrixXcd matrix(const Eigen::MatrixXcd& k) const;

 private:
  struct Entry {
    std::uint32_t from;
    std::uint32_t to;
    std::uint16_t a;  // created mode
    std::uint16_t b;  // annihilated mode
    float sign;
  };
  FockBasis basis_;
  std::vector<Entry> entries_;
};

/// Embeds a sector vector into the full Fock space (index = bit pattern).
Eigen::VectorXcd to_full_space(const FockBasis& basis, const Eigen::VectorXcd& psi);

}  // namespace qrdmft
