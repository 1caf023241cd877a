#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrdmft/encoding.hpp"
#include "qrdmft/fock.hpp"

namespace qrdmft {

struct OracleOptions {
  /// Target for the constraint residual (max norm).
  double tol = 1e-9;
  std::size_t restarts = 8;
  /// Largest Fock space or sector the oracle diagonalizes or searches.
  std::size_t max_dim = std::size_t{1} << 14;
  /// Largest full Fock space used to verify a sector certificate.
  std::size_t max_verify_dim = std::size_t{1} << 16;
  /// L-BFGS iterations spent on the dual before falling back to the primal.
  std::size_t dual_iterations = 400;
  /// Levels per sector kept in the smoothed dual.
  std::size_t dual_levels = 6;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  /// Results are cached as JSON under this directory when non-empty.
  std::string cache_dir;
};

struct OracleResult {
  double F = 0.0;
  /// Multiplier matrix M with dF = -Tr(M d rho).
  Eigen::MatrixXcd multipliers;
  /// Optimal state in the full Fock space (index = occupation bit pattern);
  /// empty above 16 modes.
  Eigen::VectorXcd state;
  double residual = 0.0;      // max |rho(state) - target|
  /// Best dual value. It bounds the Fock-space functional from below unless
  /// the traces are integral and the Fock space is too large to price the
  /// other particle numbers, in which case it bounds the sector functional.
  double lower_bound = 0.0;
  /// "slater" (idempotent target, multipliers undefined and left zero),
  /// "dual" (state from the dual ground space), "primal" or "primal-sector"
  /// (best state restricted to the target particle-number sector).
  std::string method;
  /// F is within 1e-8 (relative above 1) of a Fock-space lower bound.
  bool certified = false;
  bool from_cache = false;
};

/// Pure-state functional F[rho] = min <Psi|w|Psi> over Fock-space states
/// with the one-particle density matrix rho.
///
/// A temperature-smoothed dual max_M E0(w + sum M_ab c+_a c_b) - Tr(M rho)
/// is solved first. The pure state closest to rho in its near-degenerate
/// ground space is accepted when it reproduces rho and meets the dual bound.
/// Otherwise the primal problem over normalized vectors is solved with the
/// augmented Lagrangian from several seeded starts, in the target sector
/// when the group traces are integral and in the full Fock space when that
/// fits and the sector result is not certified. Particle-number groups
/// conserved by w and rho (spin) split the space.
/// Throws RepresentabilityError for occupations outside [0,1] or when no
/// start reaches the tolerance, std::invalid_argument when the space
/// exceeds max_dim.
OracleResult exact_rdmf(const Eigen::MatrixXcd& target, const InteractionSpec& w, const OracleOptions& options = {});

struct FdMultipliers {
  /// D_ab = dF/d(constraint coordinate), packed as a hermitian matrix so
  /// that D approximates -M.
  Eigen::MatrixXcd derivative;
  /// Constraint coordinates that needed a one-sided difference.
  std::vector<std::string> one_sided;
};

/// Central finite differences of F under hermitian perturbations of rho.
FdMultipliers fd_multipliers(const Eigen::MatrixXcd& target, const InteractionSpec& w, double step = 1e-4,
                             const OracleOptions& options = {});

/// Spin-parity groups when both `w` and `rho` conserve them, else one group.
std::vector<std::vector<std::size_t>> conserved_groups(const Eigen::MatrixXcd& rho, const InteractionSpec& w);

}  // namespace qrdmft
