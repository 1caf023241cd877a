#include "qrdmft/hubbard.hpp"

#include <stdexcept>
#include <string>

namespace qrdmft {

HubbardSpec HubbardSpec::half_filled(std::size_t L, double t, double U) {
  return HubbardSpec{L, t, U, (L + 1) / 2, L / 2};
}

void HubbardSpec::validate() const {
  if (L < 1) throw std::invalid_argument("Hubbard chain needs L >= 1");
  if (n_up > L || n_down > L) throw std::invalid_argument("particle count exceeds the number of sites");
}

HubbardModel build_hubbard(const HubbardSpec& spec) {
  spec.validate();
  const std::size_t n = 2 * spec.L;
  HubbardModel m;
  m.h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i + 1 < spec.L; ++i) {
    for (std::size_t s = 0; s < 2; ++s) {
      const auto a = static_cast<Eigen::Index>(2 * i + s);
      const auto b = static_cast<Eigen::Index>(2 * (i + 1) + s);
      m.h(a, b) = -spec.t;
      m.h(b, a) = -spec.t;
    }
  }
  m.w.n_modes = n;
  if (spec.U != 0.0) {
    for (std::size_t i = 0; i < spec.L; ++i) m.w.terms.push_back({2 * i, 2 * i + 1, 2 * i, 2 * i + 1, spec.U});
  }
  return m;
}

std::vector<std::vector<std::size_t>> spin_groups(std::size_t n_modes) {
  std::vector<std::vector<std::size_t>> g(2);
  for (std::size_t q = 0; q < n_modes; ++q) g[q % 2].push_back(q);
  return g;
}

GroundState ground_state(const HubbardSpec& spec, std::size_t max_dim, const EigenOptions& options) {
  const HubbardModel model = build_hubbard(spec);
  const std::size_t n = 2 * spec.L;
  const auto groups = spin_groups(n);
  const std::vector<std::size_t> counts{spec.n_up, spec.n_down};
  const std::size_t dim = FockBasis::sector_dimension(n, groups, counts);
  if (dim > max_dim) {
    throw std::invalid_argument("sector dimension " + std::to_string(dim) + " exceeds the cap " +
                                std::to_string(max_dim));
  }
  GroundState gs;
  gs.basis = FockBasis::sector(n, groups, counts);
  const SparseMatrixXcd hm = build_operator(gs.basis, model.h, model.w);
  Eigenpair ep = lowest_eigenpair(hm, options);
  gs.energy = ep.value;
  gs.state = std::move(ep.vector);
  return gs;
}

void validate_one_particle_dm(const Eigen::MatrixXcd& rho, double tol) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
  const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (rho.size() && asym > 1e-10) {
    throw std::invalid_argument("density matrix is not hermitian (deviation " + std::to_string(asym) + ")");
  }
  if (rho.size() == 0) return;
  const Eigen::VectorXd f = occupations(rho);
  if (f[0] < -tol || f[f.size() - 1] > 1.0 + tol) {
    throw std::invalid_argument("occupations outside [0,1]: min " + std::to_string(f[0]) + ", max " +
                                std::to_string(f[f.size() - 1]));
  }
}

Eigen::VectorXd occupations(const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace qrdmft
