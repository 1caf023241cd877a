#include "qrdmft/pauli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qrdmft {

namespace {

void require_same_size(const PauliTerm& a, const PauliTerm& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("Pauli terms act on different qubit counts (" +
                                std::to_string(a.n_qubits()) + " vs " +
                                std::to_string(b.n_qubits()) + ")");
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string format_coeff(Complex c) {
  if (c.imag() == 0.0) return format_double(c.real());
  return "(" + format_double(c.real()) + "," + format_double(c.imag()) + ")";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view token, double& out) {
  std::string t(token);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

struct WordKey {
  const PauliTerm* term;
  bool operator<(const WordKey& o) const { return word_less(*term, *o.term); }
};

}  // namespace

std::string_view to_string(CommutationLevel level) {
  switch (level) {
    case CommutationLevel::Disjoint: return "disjoint";
    case CommutationLevel::Qwc: return "qwc";
    case CommutationLevel::Gc: return "gc";
  }
  return "?";
}

CommutationLevel parse_commutation_level(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "disjoint") return CommutationLevel::Disjoint;
  if (t == "qwc") return CommutationLevel::Qwc;
  if (t == "gc") return CommutationLevel::Gc;
  throw std::invalid_argument("unknown commutation level '" + std::string(text) + "'");
}

PauliTerm::PauliTerm(std::size_t n_qubits, Complex coeff)
    : z_(n_qubits), x_(n_qubits), coeff_(coeff) {}

PauliTerm::PauliTerm(BitMask z, BitMask x, Complex coeff)
    : z_(std::move(z)), x_(std::move(x)), coeff_(coeff) {
  if (z_.size() != x_.size()) {
    throw std::invalid_argument("z and x masks differ in length");
  }
}

PauliTerm PauliTerm::single(std::size_t n_qubits, std::size_t q, char op, Complex coeff) {
  if (q >= n_qubits) throw std::out_of_range("qubit index out of range");
  PauliTerm t(n_qubits, coeff);
  switch (op) {
    case 'I': break;
    case 'X': t.x_.set(q); break;
    case 'Y': t.x_.set(q); t.z_.set(q); break;
    case 'Z': t.z_.set(q); break;
    default: throw std::invalid_argument(std::string("unknown Pauli factor '") + op + "'");
  }
  return t;
}

PauliTerm PauliTerm::parse(std::string_view text) {
  std::string_view s = trim(text);
  Complex coeff{1.0, 0.0};
  if (!s.empty() && s.front() == '(') {
    auto close = s.find(')');
    if (close == std::string_view::npos) throw std::invalid_argument("unbalanced '(' in Pauli term");
    std::string_view inner = s.substr(1, close - 1);
    auto comma = inner.find(',');
    double re = 0, im = 0;
    if (comma == std::string_view::npos || !parse_double(trim(inner.substr(0, comma)), re) ||
        !parse_double(trim(inner.substr(comma + 1)), im)) {
      throw std::invalid_argument("malformed complex coefficient '" + std::string(inner) + "'");
    }
    coeff = {re, im};
    s = trim(s.substr(close + 1));
  } else {
    auto space = s.find_first_of(" \t");
    double re = 0;
    if (space != std::string_view::npos && parse_double(s.substr(0, space), re)) {
      coeff = {re, 0.0};
      s = trim(s.substr(space + 1));
    }
  }
  std::string label;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    label.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  if (label.empty()) throw std::invalid_argument("empty Pauli label");
  PauliTerm t(label.size(), coeff);
  for (std::size_t q = 0; q < label.size(); ++q) {
    switch (label[q]) {
      case 'I': break;
      case 'X': t.x_.set(q); break;
      case 'Y': t.x_.set(q); t.z_.set(q); break;
      case 'Z': t.z_.set(q); break;
      default: throw std::invalid_argument("invalid character '" + std::string(1, label[q]) + "' in Pauli label");
    }
  }
  return t;
}

PauliTerm PauliTerm::with_coeff(Complex c) const {
  PauliTerm t = *this;
  t.coeff_ = c;
  return t;
}

char PauliTerm::op(std::size_t q) const {
  const bool z = z_.test(q);
  const bool x = x_.test(q);
  if (z && x) return 'Y';
  if (z) return 'Z';
  if (x) return 'X';
  return 'I';
}

std::string PauliTerm::label() const {
  std::string s(n_qubits(), 'I');
  for (std::size_t q = 0; q < n_qubits(); ++q) s[q] = op(q);
  return s;
}

std::string PauliTerm::to_string() const { return format_coeff(coeff_) + " " + label(); }

bool PauliTerm::same_word(const PauliTerm& other) const {
  return z_ == other.z_ && x_ == other.x_;
}

bool PauliTerm::operator==(const PauliTerm& other) const {
  return same_word(other) && coeff_ == other.coeff_;
}

bool word_less(const PauliTerm& a, const PauliTerm& b) {
  if (a.z() != b.z()) return a.z() < b.z();
  return a.x() < b.x();
}

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  require_same_size(a, b);
  const BitMask& z1 = a.z();
  const BitMask& x1 = a.x();
  const BitMask& z2 = b.z();
  const BitMask& x2 = b.x();

  const BitMask y1 = z1 & x1, xo1 = x1 - z1, zo1 = z1 - x1;
  const BitMask y2 = z2 & x2, xo2 = x2 - z2, zo2 = z2 - x2;
  // YZ = iX, XY = iZ, ZX = iY and the reversed orders give -i.
  const long plus = static_cast<long>((y1 & zo2).count() + (xo1 & y2).count() + (zo1 & xo2).count());
  const long minus = static_cast<long>((y1 & xo2).count() + (xo1 & zo2).count() + (zo1 & y2).count());
  const long k = ((plus - minus) % 4 + 4) % 4;
  static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

  return PauliTerm(z1 ^ z2, x1 ^ x2, a.coeff() * b.coeff() * kIPow[k]);
}

bool commutes(const PauliTerm& a, const PauliTerm& b, CommutationLevel level) {
  require_same_size(a, b);
  switch (level) {
    case CommutationLevel::Disjoint:
      return !a.support().intersects(b.support());
    case CommutationLevel::Qwc: {
      const BitMask both = a.support() & b.support();
      return ((a.z() ^ b.z()) & both).none() && ((a.x() ^ b.x()) & both).none();
    }
    case CommutationLevel::Gc:
      return (((a.z() & b.x()) ^ (a.x() & b.z())).count() % 2) == 0;
  }
  return false;
}

PauliSum::PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) {}

PauliSum::PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.n_qubits() != n_qubits_) throw std::invalid_argument("term qubit count differs from sum");
  }
}

PauliSum::PauliSum(const PauliTerm& term) : n_qubits_(term.n_qubits()), terms_{term} {}

void PauliSum::add(const PauliTerm& term) {
  if (term.n_qubits() != n_qubits_) throw std::invalid_argument("term qubit count differs from sum");
  terms_.push_back(term);
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  for (const auto& t : other.terms_) add(t);
  *this = simplify(*this);
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  for (const auto& t : other.terms_) add(t.with_coeff(-t.coeff()));
  *this = simplify(*this);
  return *this;
}

PauliSum& PauliSum::operator*=(Complex scalar) {
  for (auto& t : terms_) t = t.with_coeff(t.coeff() * scalar);
  *this = simplify(*this);
  return *this;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(n_qubits_);
  for (const auto& t : terms_) out.terms_.push_back(t.with_coeff(std::conj(t.coeff())));
  return out;
}

Complex PauliSum::coefficient_of(const PauliTerm& word) const {
  Complex c{0, 0};
  for (const auto& t : terms_)
    if (t.same_word(word)) c += t.coeff();
  return c;
}

double PauliSum::max_imag() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff().imag()));
  return m;
}

std::string PauliSum::to_string() const {
  std::string out;
  for (const auto& t : terms_) {
    out += t.to_string();
    out += '\n';
  }
  return out;
}

PauliSum PauliSum::parse(std::string_view text) {
  std::vector<PauliTerm> terms;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    terms.push_back(PauliTerm::parse(line));
  }
  if (terms.empty()) return PauliSum();
  const std::size_t n = terms.front().n_qubits();
  return PauliSum(n, std::move(terms));
}

PauliSum simplify(const PauliSum& s, double drop_tol) {
  std::map<WordKey, Complex> acc;
  for (const auto& t : s.terms()) acc[WordKey{&t}] += t.coeff();
  std::vector<PauliTerm> out;
  out.reserve(acc.size());
  for (const auto& [key, c] : acc) {
    if (std::abs(c) > drop_tol) out.push_back(key.term->with_coeff(c));
  }
  return PauliSum(s.n_qubits(), std::move(out));
}

PauliSum operator+(const PauliSum& a, const PauliSum& b) {
  PauliSum r = a;
  r += b;
  return r;
}

PauliSum operator-(const PauliSum& a, const PauliSum& b) {
  PauliSum r = a;
  r -= b;
  return r;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("Pauli sums act on different qubit counts");
  PauliSum r(a.n_qubits());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) r.add(multiply(ta, tb));
  return simplify(r);
}

PauliSum operator*(Complex scalar, const PauliSum& s) {
  PauliSum r = s;
  r *= scalar;
  return r;
}

}  // namespace qrdmft
