#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "qrdmft/fock.hpp"

namespace qrdmft {

struct EigenOptions {
  /// Below this dimension the matrix is diagonalized densely.
  std::size_t dense_limit = 400;
  std::size_t krylov_dim = 80;
  std::size_t max_restarts = 200;
  /// Convergence on ||H v - E v|| <= residual_tol * max(1, |E|).
  double residual_tol = 1e-10;
  std::uint64_t seed = 7;
  /// Optional Lanczos start vector (ignored when its size differs).
  Eigen::VectorXcd start;
};

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXcd vector;
  /// Gap to the second eigenvalue when it was computed (dense path), else -1.
  double gap = -1.0;
};

/// Lowest eigenpair of a hermitian matrix: dense for small dimensions,
/// restarted Lanczos with full reorthogonalization otherwise. The start
/// vector is seeded, so results are deterministic.
Eigenpair lowest_eigenpair(const SparseMatrixXcd& h, const EigenOptions& options = {});

struct Eigenpairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors;  // one column per value
};

/// The `count` lowest eigenpairs: dense for small dimensions, implicitly
/// restarted Arnoldi (ARPACK) otherwise. Uses options.start when given.
Eigenpairs lowest_eigenpairs(const SparseMatrixXcd& h, std::size_t count, const EigenOptions& options = {});

/// The `count` lowest eigenvalues (dense path only; throws above 4096).
Eigen::VectorXd lowest_eigenvalues(const SparseMatrixXcd& h, std::size_t count);

}  // namespace qrdmft
