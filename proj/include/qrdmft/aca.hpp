#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qrdmft/encoding.hpp"

namespace qrdmft {

struct LocalTerm {
  InteractionSpec w;                 // on the original modes
  std::vector<std::size_t> support;  // interacting modes C
};

struct LocalDecomposition {
  std::vector<LocalTerm> locals;
  InteractionSpec non_local;
};

/// Routes each term whose four indices lie in one support to that local
/// part and every other term to non_local. Throws std::invalid_argument
/// for overlapping supports.
LocalDecomposition decompose_local(const InteractionSpec& w,
                                   const std::vector<std::vector<std::size_t>>& supports);

/// Single-site supports {2i, 2i+1} of an L-site chain.
std::vector<std::vector<std::size_t>> site_supports(std::size_t L);

struct AcaResult {
  std::size_t order = 0;
  /// Unitary with rho' = V rho V^dagger. Rows are the new orbitals in the
  /// original basis; the first |C| rows are the unit vectors of C.
  Eigen::MatrixXcd transform;
  /// Dimension of each block of the banded rho': |C|, then environment blocks.
  std::vector<std::size_t> block_sizes;
  std::size_t kept = 0;
  Eigen::MatrixXcd rho_aca;  // kept x kept, occupations clamped to [0,1]
};

/// Adaptive cluster reduction of order n around the interacting modes C.
///
/// The complement of C is block-tridiagonalized (block Lanczos with full
/// reorthogonalization) starting from the coupling rho_{R,C}. Rank-deficient
/// blocks are padded with the lowest-index unit vectors of the remaining
/// space. The kept space is C plus the first n environment blocks.
AcaResult aca_reduce(const Eigen::MatrixXcd& rho, const std::vector<std::size_t>& interacting, std::size_t order);

/// Restriction of rho to the first (n+1)|C| entries of `mode_order`
/// (default: C first, then the rest ascending), occupations clamped.
Eigen::MatrixXcd naive_truncate(const Eigen::MatrixXcd& rho, const std::vector<std::size_t>& interacting,
                                std::size_t order, std::vector<std::size_t> mode_order = {});

/// Hermitian part of rho with its eigenvalues clipped to [0,1].
Eigen::MatrixXcd clamp_occupations(const Eigen::MatrixXcd& rho);

/// Re-indexes a local interaction to the reduced basis in which C occupies
/// positions 0..|C|-1 (in the order of `interacting`).
InteractionSpec localize_interaction(const InteractionSpec& w, const std::vector<std::size_t>& interacting,
                                     std::size_t n_modes);

/// Permutes modes: result(i, j) = rho(order[i], order[j]).
Eigen::MatrixXcd permute_modes(const Eigen::MatrixXcd& rho, const std::vector<std::size_t>& order);
/// Term indices mapped through the inverse of `order`.
InteractionSpec permute_modes(const InteractionSpec& w, const std::vector<std::size_t>& order);

}  // namespace qrdmft
