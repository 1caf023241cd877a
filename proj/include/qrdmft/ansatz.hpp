#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qrdmft/circuit.hpp"

namespace qrdmft {

/// Step of the single-qubit rotation block. Each RZ step consumes one
/// parameter per qubit; SqrtX is fixed.
enum class RotationStep { RZ, SqrtX };

struct EntanglerGate {
  GateKind kind = GateKind::CNOT;  // CNOT, CZ, CRZ or CRX
  std::size_t control = 0;
  std::size_t target = 1;
};

/// Hardware-efficient trial state: (depth + 1) rotation layers with an
/// entangler block between consecutive layers.
///
/// Parameters are laid out layer by layer. Inside a rotation layer the
/// index runs over rotation steps first and qubits second, so for the
/// default RZ-SX-RZ block the two angles of qubit q in layer l are
/// u[2*n*l + q] and u[2*n*l + n + q]. Parametrized entangler gates (CRZ,
/// CRX) take their angles right after the rotation layer preceding them.
struct AnsatzLayout {
  std::size_t n_qubits = 0;
  std::size_t depth = 0;
  std::vector<RotationStep> euler = {RotationStep::RZ, RotationStep::SqrtX, RotationStep::RZ};
  std::vector<EntanglerGate> entangler;

  std::size_t rotation_parameters_per_layer() const;
  std::size_t entangler_parameters() const;
  std::size_t parameter_count() const;
  /// Throws std::invalid_argument on invalid qubits or gate kinds.
  void validate() const;
};

/// Four qubits, one entangler block CNOT(0,1), CNOT(2,3), CNOT(1,2):
/// 16 parameters, 16 RZ, 8 SX, 3 CNOT.
AnsatzLayout four_qubit_layout();

/// Brick-wall CNOT pattern on a line: pairs (0,1),(2,3),... then (1,2),(3,4),...
AnsatzLayout linear_layout(std::size_t n_qubits, std::size_t depth);

Circuit build_hets(const AnsatzLayout& layout, const Eigen::VectorXd& u);

}  // namespace qrdmft
