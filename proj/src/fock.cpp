#include "qrdmft/fock.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace qrdmft {

namespace {

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_groups(std::size_t n_modes, const std::vector<std::vector<std::size_t>>& groups,
                  const std::vector<std::size_t>& counts) {
  if (n_modes > FockBasis::kMaxModes) throw std::invalid_argument("too many modes for a Fock basis");
  if (groups.size() != counts.size()) throw std::invalid_argument("one particle count per group required");
  std::vector<bool> used(n_modes, false);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (auto m : groups[g]) {
      if (m >= n_modes || used[m]) throw std::invalid_argument("sector groups must be disjoint mode subsets");
      used[m] = true;
    }
    if (counts[g] > groups[g].size()) throw std::invalid_argument("particle count exceeds group size");
  }
}

}  // namespace

FockBasis FockBasis::full(std::size_t n_modes) {
  if (n_modes > kMaxModes) throw std::invalid_argument("too many modes for a Fock basis");
  FockBasis b;
  b.n_modes_ = n_modes;
  b.full_ = true;
  b.states_.resize(std::size_t{1} << n_modes);
  for (std::size_t i = 0; i < b.states_.size(); ++i) b.states_[i] = i;
  return b;
}

std::size_t FockBasis::sector_dimension(std::size_t n_modes, const std::vector<std::vector<std::size_t>>& groups,
                                        const std::vector<std::size_t>& counts) {
  check_groups(n_modes, groups, counts);
  std::uint64_t dim = 1;
  std::size_t grouped = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    dim *= binomial(groups[g].size(), counts[g]);
    grouped += groups[g].size();
  }
  return dim << (n_modes - grouped);
}

FockBasis FockBasis::sector(std::size_t n_modes, const std::vector<std::vector<std::size_t>>& groups,
                            const std::vector<std::size_t>& counts) {
  check_groups(n_modes, groups, counts);
  std::vector<std::uint64_t> masks;
  for (const auto& g : groups) {
    std::uint64_t m = 0;
    for (auto q : g) m |= std::uint64_t{1} << q;
    masks.push_back(m);
  }
  // Enumerate by combining per-group choices; products stay small in practice.
  std::vector<std::uint64_t> states{0};
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<std::uint64_t> options;
    const std::size_t k = groups[g].size();
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << k); ++sub) {
      if (static_cast<std::size_t>(std::popcount(sub)) != counts[g]) continue;
      std::uint64_t s = 0;
      for (std::size_t i = 0; i < k; ++i)
        if (sub >> i & 1) s |= std::uint64_t{1} << groups[g][i];
      options.push_back(s);
    }
    std::vector<std::uint64_t> next;
    next.reserve(states.size() * options.size());
    for (auto s : states)
      for (auto o : options) next.push_back(s | o);
    states.swap(next);
  }
  std::uint64_t free_mask = (n_modes == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_modes) - 1);
  for (auto m : masks) free_mask &= ~m;
  std::vector<std::size_t> free_modes;
  for (std::size_t q = 0; q < n_modes; ++q)
    if (free_mask >> q & 1) free_modes.push_back(q);
  std::vector<std::uint64_t> with_free;
  with_free.reserve(states.size() << free_modes.size());
  for (auto s : states) {
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << free_modes.size()); ++sub) {
      std::uint64_t t = s;
      for (std::size_t i = 0; i < free_modes.size(); ++i)
        if (sub >> i & 1) t |= std::uint64_t{1} << free_modes[i];
      with_free.push_back(t);
    }
  }
  std::sort(with_free.begin(), with_free.end());
  FockBasis b;
  b.n_modes_ = n_modes;
  b.full_ = free_modes.size() == n_modes;
  b.states_ = std::move(with_free);
  return b;
}

std::optional<std::size_t> FockBasis::index(std::uint64_t state) const {
  if (full_) {
    if (state < states_.size()) return static_cast<std::size_t>(state);
    return std::nullopt;
  }
  auto it = std::lower_bound(states_.begin(), states_.end(), state);
  if (it == states_.end() || *it != state) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

bool apply_ladder(std::uint64_t& state, int& sign, std::size_t mode, bool create) {
  const std::uint64_t bit = std::uint64_t{1} << mode;
  if (static_cast<bool>(state & bit) == create) return false;
  if (std::popcount(state & (bit - 1)) & 1) sign = -sign;
  state ^= bit;
  return true;
}

SparseMatrixXcd build_operator(const FockBasis& basis, const Eigen::MatrixXcd& k, const InteractionSpec& w) {
  const std::size_t n = basis.n_modes();
  if (k.size() != 0 && (static_cast<std::size_t>(k.rows()) != n || k.cols() != k.rows()))
    throw std::invalid_argument("one-body matrix must be n_modes x n_modes");
  if (!w.empty() && w.n_modes != n) throw std::invalid_argument("interaction acts on a different mode count");
  w.validate();
  constexpr double kZero = 1e-14;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < static_cast<std::size_t>(k.rows()); ++a)
    for (std::size_t b = 0; b < static_cast<std::size_t>(k.cols()); ++b)
      if (std::abs(k(a, b)) > kZero) pairs.emplace_back(a, b);

  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(basis.dim() * (pairs.size() / 2 + w.terms.size() + 1));
  auto push = [&](std::size_t col, std::uint64_t s, Complex v) {
    auto row = basis.index(s);
    if (!row) {
      throw std::invalid_argument("operator leads outside the Fock sector (state " + std::to_string(s) + ")");
    }
    triplets.emplace_back(static_cast<int>(*row), static_cast<int>(col), v);
  };
  for (std::size_t j = 0; j < basis.dim(); ++j) {
    const std::uint64_t s0 = basis.state(j);
    for (auto [a, b] : pairs) {
      std::uint64_t s = s0;
      int sign = 1;
      if (!apply_ladder(s, sign, b, false) || !apply_ladder(s, sign, a, true)) continue;
      push(j, s, static_cast<double>(sign) * k(a, b));
    }
    for (const auto& t : w.terms) {
      if (std::abs(t.u) <= kZero) continue;
      std::uint64_t s = s0;
      int sign = 1;
      if (!apply_ladder(s, sign, t.delta, false) || !apply_ladder(s, sign, t.gamma, false) ||
          !apply_ladder(s, sign, t.beta, true) || !apply_ladder(s, sign, t.alpha, true))
        continue;
      push(j, s, static_cast<double>(sign) * t.u);
    }
  }
  SparseMatrixXcd m(static_cast<Eigen::Index>(basis.dim()), static_cast<Eigen::Index>(basis.dim()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

Eigen::MatrixXcd one_particle_dm(const FockBasis& basis, const Eigen::VectorXcd& psi) {
  if (static_cast<std::size_t>(psi.size()) != basis.dim()) throw std::invalid_argument("state size differs from basis");
  const std::size_t n = basis.n_modes();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < basis.dim(); ++j) {
    const Complex cj = psi[static_cast<Eigen::Index>(j)];
    if (cj == Complex(0.0)) continue;
    const std::uint64_t s0 = basis.state(j);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        // <psi| c+_b c_a |psi> collects conj(psi_row) * sign * psi_j.
        std::uint64_t s = s0;
        int sign = 1;
        if (!apply_ladder(s, sign, a, false) || !apply_ladder(s, sign, b, true)) continue;
        auto row = basis.index(s);
        if (!row) continue;
        rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
            std::conj(psi[static_cast<Eigen::Index>(*row)]) * static_cast<double>(sign) * cj;
      }
    }
  }
  return rho;
}

double expectation(const FockBasis& basis, const InteractionSpec& w, const Eigen::VectorXcd& psi) {
  if (w.empty()) return 0.0;
  const SparseMatrixXcd m = build_operator(basis, Eigen::MatrixXcd(), w);
  return psi.dot(m * psi).real();
}

OneBodyTable::OneBodyTable(const FockBasis& basis) : basis_(basis) {
  const std::size_t n = basis.n_modes();
  for (std::size_t j = 0; j < basis.dim(); ++j) {
    const std::uint64_t s0 = basis.state(j);
    for (std::size_t b = 0; b < n; ++b) {
      if (!(s0 >> b & 1)) continue;
      for (std::size_t a = 0; a < n; ++a) {
        std::uint64_t s = s0;
        int sign = 1;
        if (!apply_ladder(s, sign, b, false) || !apply_ladder(s, sign, a, true)) continue;
        auto row = basis.index(s);
        if (!row) continue;
        entries_.push_back({static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(*row),
                            static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                            static_cast<float>(sign)});
      }
    }
  }
}

Eigen::MatrixXcd OneBodyTable::rho(const Eigen::VectorXcd& x) const { return transition(x, x) / x.squaredNorm(); }

Eigen::MatrixXcd OneBodyTable::transition(const Eigen::VectorXcd& bra, const Eigen::VectorXcd& ket) const {
  const auto n = static_cast<Eigen::Index>(basis_.n_modes());
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& e : entries_) r(e.b, e.a) += std::conj(bra[e.to]) * static_cast<double>(e.sign) * ket[e.from];
  return r;
}

Eigen::VectorXcd OneBodyTable::apply(const Eigen::MatrixXcd& k, const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(x.size());
  for (const auto& e : entries_) y[e.to] += k(e.a, e.b) * static_cast<double>(e.sign) * x[e.from];
  return y;
}

SparseMatrixXcd OneBodyTable::matrix(const Eigen::MatrixXcd& k) const {
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(entries_.size());
  for (const auto& e : entries_) {
    const Complex v = k(e.a, e.b);
    if (std::abs(v) > 1e-14) t.emplace_back(e.to, e.from, v * static_cast<double>(e.sign));
  }
  const auto d = static_cast<Eigen::Index>(basis_.dim());
  SparseMatrixXcd m(d, d);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Eigen::VectorXcd to_full_space(const FockBasis& basis, const Eigen::VectorXcd& psi) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(Eigen::Index{1} << basis.n_modes());
  for (std::size_t j = 0; j < basis.dim(); ++j)
    out[static_cast<Eigen::Index>(basis.state(j))] = psi[static_cast<Eigen::Index>(j)];
  return out;
}

}  // namespace qrdmft
