#include "qrdmft/ansatz.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qrdmft {

std::size_t AnsatzLayout::rotation_parameters_per_layer() const {
  return n_qubits * static_cast<std::size_t>(std::count(euler.begin(), euler.end(), RotationStep::RZ));
}

std::size_t AnsatzLayout::entangler_parameters() const {
  return static_cast<std::size_t>(std::count_if(entangler.begin(), entangler.end(),
                                                [](const EntanglerGate& g) { return is_parametrized(g.kind); }));
}

std::size_t AnsatzLayout::parameter_count() const {
  return (depth + 1) * rotation_parameters_per_layer() + depth * entangler_parameters();
}

void AnsatzLayout::validate() const {
  if (n_qubits == 0) throw std::invalid_argument("ansatz needs at least one qubit");
  for (const auto& e : entangler) {
    if (e.kind != GateKind::CNOT && e.kind != GateKind::CZ && e.kind != GateKind::CRZ &&
        e.kind != GateKind::CRX) {
      throw std::invalid_argument("unsupported entangler gate " + std::string(to_string(e.kind)));
    }
    if (e.control >= n_qubits || e.target >= n_qubits || e.control == e.target) {
      throw std::invalid_argument("entangler qubits out of range");
    }
  }
}

AnsatzLayout four_qubit_layout() {
  AnsatzLayout l;
  l.n_qubits = 4;
  l.depth = 1;
  l.entangler = {{GateKind::CNOT, 0, 1}, {GateKind::CNOT, 2, 3}, {GateKind::CNOT, 1, 2}};
  return l;
}

AnsatzLayout linear_layout(std::size_t n_qubits, std::size_t depth) {
  AnsatzLayout l;
  l.n_qubits = n_qubits;
  l.depth = depth;
  for (std::size_t start : {0u, 1u})
    for (std::size_t q = start; q + 1 < n_qubits; q += 2) l.entangler.push_back({GateKind::CNOT, q, q + 1});
  return l;
}

Circuit build_hets(const AnsatzLayout& layout, const Eigen::VectorXd& u) {
  layout.validate();
  if (static_cast<std::size_t>(u.size()) != layout.parameter_count()) {
    throw std::invalid_argument("ansatz expects " + std::to_string(layout.parameter_count()) +
                                " parameters, got " + std::to_string(u.size()));
  }
  const std::size_t n = layout.n_qubits;
  Circuit c(n);
  Eigen::Index k = 0;
  for (std::size_t layer = 0; layer <= layout.depth; ++layer) {
    // Gates are emitted qubit by qubit; parameter indices follow the
    // step-major layout documented in the header.
    const Eigen::Index base = k;
    for (std::size_t q = 0; q < n; ++q) {
      std::size_t rz_seen = 0;
      for (auto step : layout.euler) {
        if (step == RotationStep::SqrtX) {
          c.add(Gate::sqrt_x(q));
        } else {
          c.add(Gate::rz(q, u(base + static_cast<Eigen::Index>(rz_seen * n + q))));
          ++rz_seen;
        }
      }
    }
    k = base + static_cast<Eigen::Index>(layout.rotation_parameters_per_layer());
    if (layer == layout.depth) break;
    for (const auto& e : layout.entangler) {
      const double theta = is_parametrized(e.kind) ? u(k++) : 0.0;
      c.add(Gate{e.kind, e.control, e.target, theta});
    }
  }
  return c;
}

}  // namespace qrdmft
