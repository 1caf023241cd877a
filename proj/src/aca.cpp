#include "qrdmft/aca.hpp"

#include <algorithm>
#include <stdexcept>

namespace qrdmft {

namespace {

constexpr double kRankTol = 1e-10;

using Index = Eigen::Index;

// Orthonormalizes the columns of x against `basis` and each other. Columns
// whose residual falls below kRankTol are dropped.
Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& basis, Eigen::MatrixXcd x) {
  Eigen::MatrixXcd out(x.rows(), 0);
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  for (Index j = 0; j < x.cols(); ++j) {
    Eigen::VectorXcd v = x.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      if (basis.cols()) v -= basis * (basis.adjoint() * v);
      if (out.cols()) v -= out * (out.adjoint() * v);
    }
    const double nv = v.norm();
    if (nv <= kRankTol * scale) continue;
    out.conservativeResize(Eigen::NoChange, out.cols() + 1);
    out.col(out.cols() - 1) = v / nv;
  }
  return out;
}

// Appends unit vectors (ascending index) orthogonalized against `basis`
// until `block` has `size` columns.
Eigen::MatrixXcd pad_block(const Eigen::MatrixXcd& basis, Eigen::MatrixXcd block, Index size) {
  const Index n = basis.rows();
  for (Index i = 0; i < n && block.cols() < size; ++i) {
    Eigen::MatrixXcd all(n, basis.cols() + block.cols());
    all << basis, block;
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e[i] = 1.0;
    for (int pass = 0; pass < 2; ++pass) e -= all * (all.adjoint() * e);
    const double ne = e.norm();
    if (ne < 1e-6) continue;
    block.conservativeResize(Eigen::NoChange, block.cols() + 1);
    block.col(block.cols() - 1) = e / ne;
  }
  return block;
}

void check_interacting(const Eigen::MatrixXcd& rho, const std::vector<std::size_t>& c) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
  if (c.empty()) throw std::invalid_argument("interacting set must not be empty");
  std::vector<bool> seen(static_cast<std::size_t>(rho.rows()), false);
  for (auto m : c) {
    if (m >= seen.size() || seen[m]) throw std::invalid_argument("invalid or repeated interacting mode");
    seen[m] = true;
  }
}

}  // namespace

LocalDecomposition decompose_local(const InteractionSpec& w, const std::vector<std::vector<std::size_t>>& supports) {
  w.validate();
  std::vector<int> owner(w.n_modes, -1);
  for (std::size_t s = 0; s < supports.size(); ++s) {
    for (auto m : supports[s]) {
      if (m >= w.n_modes) throw std::invalid_argument("support mode out of range");
      if (owner[m] != -1) throw std::invalid_argument("supports overlap");
      owner[m] = static_cast<int>(s);
    }
  }
  LocalDecomposition d;
  for (const auto& s : supports) d.locals.push_back({InteractionSpec{w.n_modes, {}}, s});
  d.non_local.n_modes = w.n_modes;
  for (const auto& t : w.terms) {
    const int o = owner[t.alpha];
    const bool local = o != -1 && owner[t.beta] == o && owner[t.gamma] == o && owner[t.delta] == o;
    if (local)
      d.locals[static_cast<std::size_t>(o)].w.terms.push_back(t);
    else
      d.non_local.terms.push_back(t);
  }
  return d;
}

std::vector<std::vector<std::size_t>> site_supports(std::size_t L) {
  std::vector<std::vector<std::size_t>> s;
  for (std::size_t i = 0; i < L; ++i) s.push_back({2 * i, 2 * i + 1});
  return s;
}

Eigen::MatrixXcd clamp_occupations(const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  const Eigen::VectorXd f = es.eigenvalues();
  if (f.size() == 0 || (f.minCoeff() >= 0.0 && f.maxCoeff() <= 1.0)) return herm;
  const Eigen::VectorXd clipped = f.cwiseMax(0.0).cwiseMin(1.0);
  return es.eigenvectors() * clipped.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

AcaResult aca_reduce(const Eigen::MatrixXcd& rho, const std::vector<std::size_t>& interacting, std::size_t order) {
  check_interacting(rho, interacting);
  const Index n = rho.rows();
  const Index nc = static_cast<Index>(interacting.size());

  Eigen::MatrixXcd basis(n, nc);
  basis.setZero();
  for (Index j = 0; j < nc; ++j) basis(static_cast<Index>(interacting[static_cast<std::size_t>(j)]), j) = 1.0;

  AcaResult r;
  r.order = order;
  r.block_sizes.push_back(static_cast<std::size_t>(nc));
  Eigen::MatrixXcd current = basis;
  while (basis.cols() < n) {
    Eigen::MatrixXcd next = orthonormalize(basis, rho * current);
    const Index size = std::min<Index>(nc, n - basis.cols());
    if (next.cols() < size) next = pad_block(basis, next, size);
    basis.conservativeResize(Eigen::NoChange, basis.cols() + next.cols());
    basis.rightCols(next.cols()) = next;
    r.block_sizes.push_back(static_cast<std::size_t>(next.cols()));
    current = next;
  }
  r.transform = basis.adjoint();

  r.kept = 0;
  for (std::size_t b = 0; b < r.block_sizes.size() && b <= order; ++b) r.kept += r.block_sizes[b];
  const Eigen::MatrixXcd banded = r.transform * rho * r.transform.adjoint();
  const Index k = static_cast<Index>(r.kept);
  r.rho_aca = clamp_occupations(banded.topLeftCorner(k, k));
  return r;
}

Eigen::MatrixXcd naive_truncate(const Eigen::MatrixXcd& rho, const std::vector<std::size_t>& interacting,
                                std::size_t order, std::vector<std::size_t> mode_order) {
  check_interacting(rho, interacting);
  const std::size_t n = static_cast<std::size_t>(rho.rows());
  if (mode_order.empty()) {
    mode_order = interacting;
    for (std::size_t m = 0; m < n; ++m)
      if (std::find(interacting.begin(), interacting.end(), m) == interacting.end()) mode_order.push_back(m);
  }
  if (mode_order.size() != n) throw std::invalid_argument("mode order must list every mode once");
  const std::size_t kept = std::min(n, (order + 1) * interacting.size());
  mode_order.resize(kept);
  return clamp_occupations(permute_modes(rho, mode_order));
}

InteractionSpec localize_interaction(const InteractionSpec& w, const std::vector<std::size_t>& interacting,
                                     std::size_t n_modes) {
  std::vector<int> pos(w.n_modes, -1);
  for (std::size_t i = 0; i < interacting.size(); ++i) {
    if (interacting[i] >= w.n_modes) throw std::invalid_argument("interacting mode out of range");
    pos[interacting[i]] = static_cast<int>(i);
  }
  if (interacting.size() > n_modes) throw std::invalid_argument("reduced basis smaller than the interacting set");
  InteractionSpec out{n_modes, {}};
  for (const auto& t : w.terms) {
    for (auto m : {t.alpha, t.beta, t.gamma, t.delta})
      if (pos[m] < 0) throw std::invalid_argument("interaction term leaves the interacting set");
    out.terms.push_back({static_cast<std::size_t>(pos[t.alpha]), static_cast<std::size_t>(pos[t.beta]),
                         static_cast<std::size_t>(pos[t.delta]), static_cast<std::size_t>(pos[t.gamma]), t.u});
  }
  return out;
}

Eigen::MatrixXcd permute_modes(const Eigen::MatrixXcd& rho, const std::vector<std::size_t>& order) {
  const Index k = static_cast<Index>(order.size());
  Eigen::MatrixXcd out(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      out(i, j) = rho(static_cast<Index>(order[static_cast<std::size_t>(i)]), static_cast<Index>(order[static_cast<std::size_t>(j)]));
  return out;
}

InteractionSpec permute_modes(const InteractionSpec& w, const std::vector<std::size_t>& order) {
  std::vector<int> inv(w.n_modes, -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= w.n_modes) throw std::invalid_argument("permutation index out of range");
    inv[order[i]] = static_cast<int>(i);
  }
  InteractionSpec out{order.size(), {}};
  for (const auto& t : w.terms) {
    for (auto m : {t.alpha, t.beta, t.gamma, t.delta})
      if (inv[m] < 0) throw std::invalid_argument("interaction term uses a dropped mode");
    out.terms.push_back({static_cast<std::size_t>(inv[t.alpha]), static_cast<std::size_t>(inv[t.beta]),
                         static_cast<std::size_t>(inv[t.delta]), static_cast<std::size_t>(inv[t.gamma]), t.u});
  }
  return out;
}

}  // namespace qrdmft
