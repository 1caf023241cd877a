#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace qrdmft {

using Complex = std::complex<double>;

/// GF(2) vector packed into machine words. Bit q belongs to qubit q.
using BitMask = boost::dynamic_bitset<std::uint64_t>;

inline constexpr double kDefaultDropTolerance = 1e-12;

/// Commutation levels used for measurement grouping. Each level's set of
/// commuting pairs is contained in the next one: Disjoint => Qwc => Gc.
enum class CommutationLevel { Disjoint, Qwc, Gc };

std::string_view to_string(CommutationLevel level);
CommutationLevel parse_commutation_level(std::string_view text);

/// A weighted Pauli word in symplectic form.
///
/// Qubit q carries I, Z, X or Y for (z[q], x[q]) = (0,0), (1,0), (0,1),
/// (1,1). The operator is coeff * P_0 (x) P_1 (x) ... with every P_q
/// hermitian, so Y is the usual Pauli-Y and not i*X*Z.
class PauliTerm {
 public:
  PauliTerm() = default;
  /// Identity on `n_qubits` qubits.
  explicit PauliTerm(std::size_t n_qubits, Complex coeff = 1.0);
  PauliTerm(BitMask z, BitMask x, Complex coeff = 1.0);

  /// Single non-identity factor `op` in {'I','X','Y','Z'} on qubit q.
  static PauliTerm single(std::size_t n_qubits, std::size_t q, char op,
                          Complex coeff = 1.0);

  /// Parses "XZYI", "0.5 XZYI" or "(0.5,-1) XZYI". Whitespace inside the
  /// label is ignored, so "XZY I" is the same word as "XZYI".
  static PauliTerm parse(std::string_view text);

  std::size_t n_qubits() const { return z_.size(); }
  const BitMask& z() const { return z_; }
  const BitMask& x() const { return x_; }
  Complex coeff() const { return coeff_; }

  PauliTerm with_coeff(Complex c) const;
  char op(std::size_t q) const;
  BitMask support() const { return z_ | x_; }
  std::size_t weight() const { return support().count(); }
  bool is_identity() const { return z_.none() && x_.none(); }

  /// Label with qubit 0 leftmost, e.g. "XZYI".
  std::string label() const;
  /// Coefficient (15 significant digits) followed by the label.
  std::string to_string() const;

  /// Same (z, x) masks, coefficients ignored.
  bool same_word(const PauliTerm& other) const;
  bool operator==(const PauliTerm& other) const;

 private:
  BitMask z_;
  BitMask x_;
  Complex coeff_{1.0, 0.0};
};

/// Lexicographic order on (z, x); coefficients are ignored.
bool word_less(const PauliTerm& a, const PauliTerm& b);

/// Exact product a*b including the accumulated power of i.
PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);
inline PauliTerm operator*(const PauliTerm& a, const PauliTerm& b) {
  return multiply(a, b);
}

bool commutes(const PauliTerm& a, const PauliTerm& b, CommutationLevel level);

/// A list of Pauli terms on a common register. Terms are kept as given;
/// call simplify() to merge duplicates and drop near-zero weights.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(std::size_t n_qubits);
  PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms);
  explicit PauliSum(const PauliTerm& term);

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add(const PauliTerm& term);

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(Complex scalar);

  /// Hermitian adjoint (coefficients conjugated).
  PauliSum adjoint() const;
  /// Coefficient of the word equal to `word` (0 if absent); assumes simplified.
  Complex coefficient_of(const PauliTerm& word) const;
  /// Largest |Im(coeff)| over all terms.
  double max_imag() const;

  /// One term per line, see PauliTerm::to_string.
  std::string to_string() const;
  /// Inverse of to_string; blank lines are skipped.
  static PauliSum parse(std::string_view text);

 private:
  std::size_t n_qubits_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Merges terms with equal words, drops |coeff| <= drop_tol and sorts by
/// word_less.
PauliSum simplify(const PauliSum& s, double drop_tol = kDefaultDropTolerance);

// Arithmetic results are simplified with the default tolerance.
PauliSum operator+(const PauliSum& a, const PauliSum& b);
PauliSum operator-(const PauliSum& a, const PauliSum& b);
PauliSum operator*(const PauliSum& a, const PauliSum& b);
PauliSum operator*(Complex scalar, const PauliSum& s);

}  // namespace qrdmft
