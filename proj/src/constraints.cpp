#include "qrdmft/constraints.hpp"

#include <stdexcept>

namespace qrdmft {

using Index = Eigen::Index;
using Complex = std::complex<double>;

std::vector<RhoConstraint> rho_constraints(std::size_t n_modes, const std::vector<std::vector<std::size_t>>& groups) {
  std::vector<int> group(n_modes, 0);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (auto m : groups[g]) {
      if (m >= n_modes) throw std::invalid_argument("group mode out of range");
      group[m] = static_cast<int>(g);
    }
  std::vector<RhoConstraint> out;
  for (std::size_t a = 0; a < n_modes; ++a) {
    for (std::size_t b = a; b < n_modes; ++b) {
      if (group[a] != group[b]) continue;
      out.push_back({a, b, false});
      if (a != b) out.push_back({a, b, true});
    }
  }
  return out;
}

Eigen::VectorXd rho_residuals(const std::vector<RhoConstraint>& list, const Eigen::MatrixXcd& rho,
                              const Eigen::MatrixXcd& target) {
  Eigen::VectorXd c(static_cast<Index>(list.size()));
  for (std::size_t k = 0; k < list.size(); ++k) {
    const Complex d = rho(static_cast<Index>(list[k].a), static_cast<Index>(list[k].b)) -
                      target(static_cast<Index>(list[k].a), static_cast<Index>(list[k].b));
    c[static_cast<Index>(k)] = list[k].imag ? d.imag() : d.real();
  }
  return c;
}

Eigen::MatrixXcd weights_to_matrix(const std::vector<RhoConstraint>& list, const Eigen::VectorXd& weights,
                                   std::size_t n_modes) {
  if (static_cast<std::size_t>(weights.size()) != list.size()) throw std::invalid_argument("one weight per constraint");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Index>(n_modes), static_cast<Index>(n_modes));
  for (std::size_t k = 0; k < list.size(); ++k) {
    const auto a = static_cast<Index>(list[k].a);
    const auto b = static_cast<Index>(list[k].b);
    const double w = weights[static_cast<Index>(k)];
    if (a == b) {
      m(a, a) += w;
    } else {
      const Complex v = list[k].imag ? Complex(0.0, 0.5 * w) : Complex(0.5 * w, 0.0);
      m(a, b) += v;
      m(b, a) += std::conj(v);
    }
  }
  return m;
}

Eigen::VectorXd matrix_to_weights(const std::vector<RhoConstraint>& list, const Eigen::MatrixXcd& m) {
  Eigen::VectorXd w(static_cast<Index>(list.size()));
  for (std::size_t k = 0; k < list.size(); ++k) {
    const Complex v = m(static_cast<Index>(list[k].a), static_cast<Index>(list[k].b));
    if (list[k].a == list[k].b)
      w[static_cast<Index>(k)] = v.real();
    else
      w[static_cast<Index>(k)] = 2.0 * (list[k].imag ? v.imag() : v.real());
  }
  return w;
}

Eigen::MatrixXcd constraint_direction(const RhoConstraint& k, std::size_t n_modes) {
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(static_cast<Index>(n_modes), static_cast<Index>(n_modes));
  const auto a = static_cast<Index>(k.a);
  const auto b = static_cast<Index>(k.b);
  if (a == b) {
    e(a, a) = 1.0;
  } else {
    const Complex v = k.imag ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
    e(a, b) = v;
    e(b, a) = std::conj(v);
  }
  return e;
}

}  // namespace qrdmft
