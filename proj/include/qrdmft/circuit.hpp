#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qrdmft {

enum class GateKind { RZ, SqrtX, X, Y, Z, H, S, Sdg, CNOT, CZ, SWAP, CRZ, CRX };

std::string_view to_string(GateKind kind);
GateKind parse_gate_kind(std::string_view text);
std::size_t arity(GateKind kind);
bool is_parametrized(GateKind kind);

/// A gate on one or two qubits. For controlled gates q0 is the control
/// and q1 the target. Angles are in radians.
struct Gate {
  GateKind kind = GateKind::X;
  std::size_t q0 = 0;
  std::size_t q1 = 0;
  double theta = 0.0;

  static Gate rz(std::size_t q, double theta) { return {GateKind::RZ, q, 0, theta}; }
  static Gate sqrt_x(std::size_t q) { return {GateKind::SqrtX, q, 0, 0.0}; }
  static Gate x(std::size_t q) { return {GateKind::X, q, 0, 0.0}; }
  static Gate y(std::size_t q) { return {GateKind::Y, q, 0, 0.0}; }
  static Gate z(std::size_t q) { return {GateKind::Z, q, 0, 0.0}; }
  static Gate h(std::size_t q) { return {GateKind::H, q, 0, 0.0}; }
  static Gate s(std::size_t q) { return {GateKind::S, q, 0, 0.0}; }
  static Gate sdg(std::size_t q) { return {GateKind::Sdg, q, 0, 0.0}; }
  static Gate cnot(std::size_t c, std::size_t t) { return {GateKind::CNOT, c, t, 0.0}; }
  static Gate cz(std::size_t a, std::size_t b) { return {GateKind::CZ, a, b, 0.0}; }
  static Gate swap(std::size_t a, std::size_t b) { return {GateKind::SWAP, a, b, 0.0}; }
  static Gate crz(std::size_t c, std::size_t t, double theta) { return {GateKind::CRZ, c, t, theta}; }
  static Gate crx(std::size_t c, std::size_t t, double theta) { return {GateKind::CRX, c, t, theta}; }

  std::vector<std::size_t> qubits() const;
  /// E.g. "H(0)", "CNOT(0,3)", "RZ(1)[0.5]".
  std::string to_string() const;
  bool operator==(const Gate& other) const;
};

/// Matrix of the gate on its own qubits. For two-qubit gates the basis
/// index is b(q0) + 2*b(q1).
Eigen::MatrixXcd gate_matrix(const Gate& g);

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  /// Throws std::out_of_range / std::invalid_argument on bad qubit indices.
  void add(const Gate& g);
  void append(const Circuit& other);
  std::size_t count(GateKind kind) const;
  std::size_t two_qubit_count() const;

  /// Gate list joined by ", ".
  std::string to_string() const;

 private:
  std::size_t n_qubits_ = 0;
  std::vector<Gate> gates_;
};

/// Removes pairs of identical self-inverse gates (H, X, Y, Z, CNOT, CZ, SWAP)
/// that meet with no other gate on their qubits in between.
Circuit cancel_inverse_pairs(const Circuit& c);

}  // namespace qrdmft
