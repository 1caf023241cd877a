#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrdmft/exact_oracle.hpp"

namespace qrdmft {

struct AcaScanRow {
  std::size_t order = 0;
  std::size_t kept = 0;
  double F_aca = 0.0;
  double F_naive = 0.0;
  double error_aca = 0.0;    // |F[rho_ACA(n)] - F[rho]|
  double error_naive = 0.0;  // |F[rho_naive(n)] - F[rho]|
};

struct AcaScan {
  double F_full = 0.0;
  std::string method_full;
  std::vector<AcaScanRow> rows;
};

struct AcaScanOptions {
  std::size_t max_order = 3;
  /// Oracle settings for the untruncated density matrix.
  OracleOptions full;
  /// Oracle settings for the reduced problems.
  OracleOptions reduced;
};

/// Functional errors of the ACA and naive reductions of order 0..max_order
/// for the local interaction `w` (original modes) acting on `interacting`.
/// Orders whose reduced space would exceed the full one are skipped.
AcaScan aca_scan(const Eigen::MatrixXcd& rho, const InteractionSpec& w, const std::vector<std::size_t>& interacting,
                 const AcaScanOptions& options = {});

/// Least-squares slope of log(error_aca) against the order; NaN when fewer
/// than two rows have a positive error.
double log_error_slope(const AcaScan& scan);

}  // namespace qrdmft
