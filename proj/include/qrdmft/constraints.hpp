#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qrdmft {

/// One real equality constraint on rho(1): Re rho_ab (a <= b) or Im rho_ab (a < b).
struct RhoConstraint {
  std::size_t a = 0;
  std::size_t b = 0;
  bool imag = false;
};

/// Upper triangle plus diagonal, real and imaginary parts: n^2 constraints.
/// With `groups`, only pairs inside one group are listed.
std::vector<RhoConstraint> rho_constraints(std::size_t n_modes,
                                           const std::vector<std::vector<std::size_t>>& groups = {});

/// c_k = component k of (rho - target).
Eigen::VectorXd rho_residuals(const std::vector<RhoConstraint>& list, const Eigen::MatrixXcd& rho,
                              const Eigen::MatrixXcd& target);

/// Hermitian M with Tr(M rho) = sum_k weights_k * component_k(rho):
/// M_aa = w, M_ab = (w_re + i w_im) / 2, M_ba = conj(M_ab).
Eigen::MatrixXcd weights_to_matrix(const std::vector<RhoConstraint>& list, const Eigen::VectorXd& weights,
                                   std::size_t n_modes);

/// Inverse of weights_to_matrix on the listed entries.
Eigen::VectorXd matrix_to_weights(const std::vector<RhoConstraint>& list, const Eigen::MatrixXcd& m);

/// Hermitian unit perturbation that moves constraint component k by +1.
Eigen::MatrixXcd constraint_direction(const RhoConstraint& k, std::size_t n_modes);

}  // namespace qrdmft
