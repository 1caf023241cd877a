#include "qrdmft/statevector.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qrdmft {

namespace {

std::uint64_t to_word(const BitMask& m) {
  std::uint64_t w = 0;
  for (auto q = m.find_first(); q != BitMask::npos; q = m.find_next(q)) w |= std::uint64_t{1} << q;
  return w;
}

void check_width(std::size_t state, std::size_t other, const char* what) {
  if (state != other) {
    throw std::invalid_argument(std::string(what) + " acts on " + std::to_string(other) +
                                " qubits but the state has " + std::to_string(state));
  }
}

}  // namespace

StateVector::StateVector(std::size_t n_qubits, std::size_t max_qubits) : n_qubits_(n_qubits) {
  if (n_qubits > max_qubits) {
    throw std::invalid_argument("state with " + std::to_string(n_qubits) +
                                " qubits exceeds the limit of " + std::to_string(max_qubits));
  }
  amp_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
  amp_(0) = 1.0;
}

StateVector::StateVector(Eigen::VectorXcd amplitudes) : amp_(std::move(amplitudes)) {
  const auto dim = static_cast<std::uint64_t>(amp_.size());
  if (dim == 0 || !std::has_single_bit(dim)) {
    throw std::invalid_argument("amplitude vector length must be a power of two");
  }
  n_qubits_ = static_cast<std::size_t>(std::countr_zero(dim));
}

void StateVector::normalize() {
  const double n = amp_.norm();
  if (n == 0.0) throw std::runtime_error("cannot normalize a zero state");
  amp_ /= n;
}

void StateVector::apply_single(std::size_t q, const Eigen::Matrix2cd& m) {
  const Eigen::Index dim = amp_.size();
  const Eigen::Index bit = Eigen::Index{1} << q;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (i & bit) continue;
    const Complex a0 = amp_(i), a1 = amp_(i | bit);
    amp_(i) = m(0, 0) * a0 + m(0, 1) * a1;
    amp_(i | bit) = m(1, 0) * a0 + m(1, 1) * a1;
  }
}

void StateVector::apply_controlled(std::size_t c, std::size_t t, const Eigen::Matrix2cd& m) {
  const Eigen::Index dim = amp_.size();
  const Eigen::Index cb = Eigen::Index{1} << c;
  const Eigen::Index tb = Eigen::Index{1} << t;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (!(i & cb) || (i & tb)) continue;
    const Complex a0 = amp_(i), a1 = amp_(i | tb);
    amp_(i) = m(0, 0) * a0 + m(0, 1) * a1;
    amp_(i | tb) = m(1, 0) * a0 + m(1, 1) * a1;
  }
}

void StateVector::apply(const Gate& g) {
  for (auto q : g.qubits()) {
    if (q >= n_qubits_) throw std::out_of_range("gate " + g.to_string() + " outside the state");
  }
  switch (g.kind) {
    case GateKind::CNOT:
    case GateKind::CRZ:
    case GateKind::CRX: {
      const Eigen::MatrixXcd m4 = gate_matrix(g);
      Eigen::Matrix2cd m;
      m << m4(1, 1), m4(1, 3), m4(3, 1), m4(3, 3);
      apply_controlled(g.q0, g.q1, m);
      return;
    }
    case GateKind::CZ: {
      const Eigen::Index mask = (Eigen::Index{1} << g.q0) | (Eigen::Index{1} << g.q1);
      for (Eigen::Index i = 0; i < amp_.size(); ++i)
        if ((i & mask) == mask) amp_(i) = -amp_(i);
      return;
    }
    case GateKind::SWAP: {
      const Eigen::Index a = Eigen::Index{1} << g.q0, b = Eigen::Index{1} << g.q1;
      for (Eigen::Index i = 0; i < amp_.size(); ++i)
        if ((i & a) && !(i & b)) std::swap(amp_(i), amp_((i & ~a) | b));
      return;
    }
    default:
      apply_single(g.q0, gate_matrix(g));
  }
}

void StateVector::apply(const Circuit& c) {
  check_width(n_qubits_, c.n_qubits(), "circuit");
  for (const auto& g : c.gates()) apply(g);
}

void StateVector::apply(const PauliTerm& p) {
  check_width(n_qubits_, p.n_qubits(), "Pauli word");
  const std::uint64_t z = to_word(p.z()), x = to_word(p.x());
  static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex base = p.coeff() * kIPow[std::popcount(z & x) % 4];
  Eigen::VectorXcd out(amp_.size());
  for (Eigen::Index i = 0; i < amp_.size(); ++i) {
    const auto b = static_cast<std::uint64_t>(i);
    const double sign = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(b ^ x)) = base * sign * amp_(i);
  }
  amp_ = std::move(out);
}

Eigen::VectorXd StateVector::probabilities() const { return amp_.cwiseAbs2(); }

StateVector apply(const Circuit& c, const StateVector& s) {
  StateVector out = s;
  out.apply(c);
  return out;
}

Complex expectation(const StateVector& s, const PauliTerm& p) {
  check_width(s.n_qubits(), p.n_qubits(), "Pauli word");
  const std::uint64_t z = to_word(p.z()), x = to_word(p.x());
  static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const auto& a = s.amplitudes();
  // P|b> = i^{|x&z|} (-1)^{|b&z|} |b^x>, so <s|P|s> = sum_b conj(a_{b^x}) phase a_b.
  Complex acc{0, 0};
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const auto b = static_cast<std::uint64_t>(i);
    const double sign = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
    acc += std::conj(a(static_cast<Eigen::Index>(b ^ x))) * a(i) * sign;
  }
  return acc * kIPow[std::popcount(z & x) % 4] * p.coeff();
}

double expectation(const StateVector& s, const PauliSum& obs) {
  Complex acc{0, 0};
  for (const auto& t : obs.terms()) acc += expectation(s, t);
  if (std::abs(acc.imag()) > 1e-10) {
    throw std::invalid_argument("observable is not hermitian: imaginary expectation " +
                                std::to_string(acc.imag()));
  }
  return acc.real();
}

}  // namespace qrdmft
