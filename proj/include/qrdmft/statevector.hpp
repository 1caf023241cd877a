#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrdmft/circuit.hpp"
#include "qrdmft/pauli.hpp"

namespace qrdmft {

inline constexpr std::size_t kDefaultMaxQubits = 20;

/// Amplitudes over 2^n basis states; bit q of the index is qubit q.
class StateVector {
 public:
  StateVector() = default;
  /// |0...0> on n qubits; throws if n exceeds max_qubits.
  explicit StateVector(std::size_t n_qubits, std::size_t max_qubits = kDefaultMaxQubits);
  /// Takes ownership of the amplitudes; the length must be a power of two.
  explicit StateVector(Eigen::VectorXcd amplitudes);

  std::size_t n_qubits() const { return n_qubits_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  Eigen::VectorXcd& amplitudes() { return amp_; }
  double norm() const { return amp_.norm(); }
  void normalize();

  void apply(const Gate& g);
  void apply(const Circuit& c);
  /// In-place action of a Pauli word (coefficient included).
  void apply(const PauliTerm& p);

  /// Probability of each basis index.
  Eigen::VectorXd probabilities() const;

 private:
  void apply_single(std::size_t q, const Eigen::Matrix2cd& m);
  void apply_controlled(std::size_t c, std::size_t t, const Eigen::Matrix2cd& m);

  std::size_t n_qubits_ = 0;
  Eigen::VectorXcd amp_;
};

StateVector apply(const Circuit& c, const StateVector& s);

/// <s|P|s> for one word, including its coefficient.
Complex expectation(const StateVector& s, const PauliTerm& p);
/// <s|obs|s>; throws std::invalid_argument if the imaginary part of the
/// result exceeds 1e-10 (non-hermitian observable).
double expectation(const StateVector& s, const PauliSum& obs);

}  // namespace qrdmft
