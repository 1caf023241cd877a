#include "qrdmft/encoding.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace qrdmft {

namespace {

using IndexSet = std::set<std::size_t>;

void check_mode(std::size_t index, std::size_t n_modes) {
  if (index >= n_modes) {
    throw std::out_of_range("mode index " + std::to_string(index) + " out of range for " +
                            std::to_string(n_modes) + " modes");
  }
}

// Fenwick-tree sets of the Bravyi-Kitaev transform, valid for any n.
IndexSet bk_update_set(std::size_t index, std::size_t n) {
  IndexSet s;
  for (std::size_t i = index + 1; i <= n; i += i & (~i + 1)) s.insert(i - 1);
  return s;
}

IndexSet bk_occupation_set(std::size_t index) {
  IndexSet s;
  std::size_t i = index + 1;
  s.insert(i - 1);
  const std::size_t parent = i & (i - 1);
  --i;
  while (i != parent) {
    s.insert(i - 1);
    i &= i - 1;
  }
  return s;
}

IndexSet bk_parity_set(std::size_t index) {
  IndexSet s;
  for (std::size_t i = index; i > 0; i &= i - 1) s.insert(i - 1);
  return s;
}

IndexSet symmetric_difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::inserter(out, out.end()));
  return out;
}

PauliTerm word(std::size_t n, const IndexSet& xs, const IndexSet& ys, const IndexSet& zs,
               Complex coeff) {
  BitMask z(n), x(n);
  for (auto q : xs) x.set(q);
  for (auto q : ys) {
    x.set(q);
    z.set(q);
  }
  for (auto q : zs) z.set(q);
  return PauliTerm(std::move(z), std::move(x), coeff);
}

IndexSet range_set(std::size_t first, std::size_t last) {
  IndexSet s;
  for (std::size_t i = first; i < last; ++i) s.insert(i);
  return s;
}

}  // namespace

std::string_view to_string(EncodingScheme scheme) {
  switch (scheme) {
    case EncodingScheme::JordanWigner: return "jw";
    case EncodingScheme::Parity: return "parity";
    case EncodingScheme::BravyiKitaev: return "bk";
  }
  return "?";
}

EncodingScheme parse_encoding_scheme(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "jw" || t == "jordan-wigner" || t == "jordan_wigner") return EncodingScheme::JordanWigner;
  if (t == "parity") return EncodingScheme::Parity;
  if (t == "bk" || t == "bravyi-kitaev" || t == "bravyi_kitaev") return EncodingScheme::BravyiKitaev;
  throw std::invalid_argument("unknown encoding scheme '" + std::string(text) + "'");
}

void InteractionSpec::validate() const {
  for (const auto& t : terms) {
    for (auto i : {t.alpha, t.beta, t.delta, t.gamma}) check_mode(i, n_modes);
  }
}

PauliSum encode_ladder(std::size_t index, LadderKind kind, EncodingScheme scheme,
                       std::size_t n_modes) {
  check_mode(index, n_modes);
  // c+ = (M0 - i M1)/2 and c = (M0 + i M1)/2 with Majorana images M0, M1.
  const Complex half_sign = kind == LadderKind::Create ? Complex(0, -0.5) : Complex(0, 0.5);
  PauliSum out(n_modes);
  switch (scheme) {
    case EncodingScheme::JordanWigner: {
      const IndexSet below = range_set(0, index);
      out.add(word(n_modes, {index}, {}, below, 0.5));
      out.add(word(n_modes, {}, {index}, below, half_sign));
      break;
    }
    case EncodingScheme::Parity: {
      IndexSet above = range_set(index + 1, n_modes);
      IndexSet prev = index > 0 ? IndexSet{index - 1} : IndexSet{};
      IndexSet xs = above;
      xs.insert(index);
      out.add(word(n_modes, xs, {}, prev, 0.5));
      out.add(word(n_modes, above, {index}, {}, half_sign));
      break;
    }
    case EncodingScheme::BravyiKitaev: {
      const IndexSet update = bk_update_set(index, n_modes);
      const IndexSet parity = bk_parity_set(index);
      const IndexSet occupation = bk_occupation_set(index);
      out.add(word(n_modes, update, {}, parity, 0.5));
      IndexSet xs = update;
      xs.erase(index);
      IndexSet zs = symmetric_difference(parity, occupation);
      zs.erase(index);
      out.add(word(n_modes, xs, {index}, zs, half_sign));
      break;
    }
  }
  return simplify(out);
}

Rho1Observables rho1_observables(std::size_t alpha, std::size_t beta, EncodingScheme scheme,
                                 std::size_t n_modes) {
  check_mode(alpha, n_modes);
  check_mode(beta, n_modes);
  const PauliSum cd_a = encode_ladder(alpha, LadderKind::Create, scheme, n_modes);
  const PauliSum c_b = encode_ladder(beta, LadderKind::Annihilate, scheme, n_modes);
  const PauliSum ab = cd_a * c_b;
  if (alpha == beta) return {ab, PauliSum(n_modes)};
  const PauliSum ba = ab.adjoint();
  Rho1Observables out{ab + ba, Complex(0, 1) * (ab - ba)};
  return out;
}

PauliSum rho2_observable(std::size_t alpha, std::size_t beta, std::size_t gamma,
                         std::size_t delta, EncodingScheme scheme, std::size_t n_modes) {
  for (auto i : {alpha, beta, gamma, delta}) check_mode(i, n_modes);
  if (alpha == beta || gamma == delta) return PauliSum(n_modes);
  return encode_ladder(gamma, LadderKind::Create, scheme, n_modes) *
         encode_ladder(delta, LadderKind::Create, scheme, n_modes) *
         encode_ladder(alpha, LadderKind::Annihilate, scheme, n_modes) *
         encode_ladder(beta, LadderKind::Annihilate, scheme, n_modes);
}

PauliSum interaction_observable(const InteractionSpec& w, EncodingScheme scheme) {
  w.validate();
  const std::size_t n = w.n_modes;
  std::vector<PauliSum> create(n), annihilate(n);
  for (std::size_t i = 0; i < n; ++i) {
    create[i] = encode_ladder(i, LadderKind::Create, scheme, n);
    annihilate[i] = encode_ladder(i, LadderKind::Annihilate, scheme, n);
  }
  PauliSum out(n);
  for (const auto& t : w.terms) {
    if (t.u == 0.0 || t.alpha == t.beta || t.gamma == t.delta) continue;
    PauliSum term = create[t.alpha] * create[t.beta] * annihilate[t.gamma] * annihilate[t.delta];
    term *= Complex(t.u, 0.0);
    for (const auto& p : term.terms()) out.add(p);
  }
  out = simplify(out);
  if (out.max_imag() > kDefaultDropTolerance) {
    throw std::invalid_argument("interaction spec is not hermitian (imaginary Pauli weight " +
                                std::to_string(out.max_imag()) + ")");
  }
  std::vector<PauliTerm> real_terms;
  for (const auto& p : out.terms()) real_terms.push_back(p.with_coeff(p.coeff().real()));
  return simplify(PauliSum(n, std::move(real_terms)));
}

PauliSum one_body_observable(const Eigen::MatrixXcd& h, EncodingScheme scheme) {
  if (h.rows() != h.cols()) throw std::invalid_argument("one-body matrix must be square");
  const auto n = static_cast<std::size_t>(h.rows());
  PauliSum out(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Complex hab = h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (std::abs(hab) == 0.0) continue;
      PauliSum term = encode_ladder(a, LadderKind::Create, scheme, n) *
                      encode_ladder(b, LadderKind::Annihilate, scheme, n);
      term *= hab;
      for (const auto& p : term.terms()) out.add(p);
    }
  }
  return simplify(out);
}

std::vector<PauliTerm> rho1_pauli_words(EncodingScheme scheme, std::size_t n_modes) {
  std::map<std::pair<BitMask, BitMask>, PauliTerm> words;
  auto collect = [&](const PauliSum& s) {
    for (const auto& t : s.terms()) {
      if (t.is_identity()) continue;
      words.emplace(std::make_pair(t.z(), t.x()), t.with_coeff(1.0));
    }
  };
  for (std::size_t a = 0; a < n_modes; ++a) {
    for (std::size_t b = a; b < n_modes; ++b) {
      const auto obs = rho1_observables(a, b, scheme, n_modes);
      collect(obs.real_part);
      collect(obs.imag_part);
    }
  }
  std::vector<PauliTerm> out;
  out.reserve(words.size());
  for (auto& [key, t] : words) out.push_back(t);
  return out;
}

}  // namespace qrdmft
