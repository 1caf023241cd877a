#include "qrdmft/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

namespace qrdmft {

namespace {

using C = std::complex<double>;

bool self_inverse(GateKind k) {
  switch (k) {
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
    case GateKind::H:
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::SWAP:
      return true;
    default:
      return false;
  }
}

bool symmetric_pair(GateKind k) { return k == GateKind::CZ || k == GateKind::SWAP; }

bool same_action(const Gate& a, const Gate& b) {
  if (a.kind != b.kind) return false;
  if (arity(a.kind) == 1) return a.q0 == b.q0;
  if (a.q0 == b.q0 && a.q1 == b.q1) return true;
  return symmetric_pair(a.kind) && a.q0 == b.q1 && a.q1 == b.q0;
}

Eigen::Matrix2cd single_matrix(GateKind kind, double theta) {
  const C i(0, 1);
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  switch (kind) {
    case GateKind::RZ: m << std::exp(-i * theta / 2.0), 0, 0, std::exp(i * theta / 2.0); break;
    case GateKind::SqrtX: m << C(0.5, 0.5), C(0.5, -0.5), C(0.5, -0.5), C(0.5, 0.5); break;
    case GateKind::X: m << 0, 1, 1, 0; break;
    case GateKind::Y: m << 0, -i, i, 0; break;
    case GateKind::Z: m << 1, 0, 0, -1; break;
    case GateKind::H: m << r, r, r, -r; break;
    case GateKind::S: m << 1, 0, 0, i; break;
    case GateKind::Sdg: m << 1, 0, 0, -i; break;
    default: throw std::invalid_argument("not a single-qubit gate");
  }
  return m;
}

Eigen::Matrix2cd rx(double theta) {
  Eigen::Matrix2cd m;
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  m << c, C(0, -s), C(0, -s), c;
  return m;
}

}  // namespace

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::RZ: return "RZ";
    case GateKind::SqrtX: return "SX";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "SDG";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::SWAP: return "SWAP";
    case GateKind::CRZ: return "CRZ";
    case GateKind::CRX: return "CRX";
  }
  return "?";
}

GateKind parse_gate_kind(std::string_view text) {
  for (auto k : {GateKind::RZ, GateKind::SqrtX, GateKind::X, GateKind::Y, GateKind::Z, GateKind::H,
                 GateKind::S, GateKind::Sdg, GateKind::CNOT, GateKind::CZ, GateKind::SWAP,
                 GateKind::CRZ, GateKind::CRX}) {
    if (to_string(k) == text) return k;
  }
  throw std::invalid_argument("unknown gate kind '" + std::string(text) + "'");
}

std::size_t arity(GateKind kind) {
  switch (kind) {
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::SWAP:
    case GateKind::CRZ:
    case GateKind::CRX:
      return 2;
    default:
      return 1;
  }
}

bool is_parametrized(GateKind kind) {
  return kind == GateKind::RZ || kind == GateKind::CRZ || kind == GateKind::CRX;
}

std::vector<std::size_t> Gate::qubits() const {
  if (arity(kind) == 1) return {q0};
  return {q0, q1};
}

std::string Gate::to_string() const {
  std::string s(qrdmft::to_string(kind));
  s += "(" + std::to_string(q0);
  if (arity(kind) == 2) s += "," + std::to_string(q1);
  s += ")";
  if (is_parametrized(kind)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "[%.15g]", theta);
    s += buf;
  }
  return s;
}

bool Gate::operator==(const Gate& other) const {
  if (kind != other.kind || q0 != other.q0) return false;
  if (arity(kind) == 2 && q1 != other.q1) return false;
  return !is_parametrized(kind) || theta == other.theta;
}

Eigen::MatrixXcd gate_matrix(const Gate& g) {
  if (arity(g.kind) == 1) return single_matrix(g.kind, g.theta);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  // Index = b(q0) + 2 b(q1).
  switch (g.kind) {
    case GateKind::SWAP:
      m(0, 0) = m(3, 3) = 1;
      m(1, 2) = m(2, 1) = 1;
      return m;
    case GateKind::CZ:
      m.diagonal() << 1, 1, 1, -1;
      return m;
    default:
      break;
  }
  Eigen::Matrix2cd target;
  switch (g.kind) {
    case GateKind::CNOT: target = single_matrix(GateKind::X, 0); break;
    case GateKind::CRZ: target = single_matrix(GateKind::RZ, g.theta); break;
    case GateKind::CRX: target = rx(g.theta); break;
    default: throw std::logic_error("unhandled two-qubit gate");
  }
  m(0, 0) = m(2, 2) = 1;  // control (q0) clear
  m(1, 1) = target(0, 0);
  m(1, 3) = target(0, 1);
  m(3, 1) = target(1, 0);
  m(3, 3) = target(1, 1);
  return m;
}

void Circuit::add(const Gate& g) {
  for (auto q : g.qubits()) {
    if (q >= n_qubits_) {
      throw std::out_of_range("gate " + g.to_string() + " outside a " + std::to_string(n_qubits_) +
                              "-qubit circuit");
    }
  }
  if (arity(g.kind) == 2 && g.q0 == g.q1) {
    throw std::invalid_argument("gate " + g.to_string() + " repeats a qubit");
  }
  gates_.push_back(g);
}

void Circuit::append(const Circuit& other) {
  if (other.n_qubits_ != n_qubits_) throw std::invalid_argument("circuit width mismatch");
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [&](const Gate& g) { return g.kind == kind; }));
}

std::size_t Circuit::two_qubit_count() const {
  return static_cast<std::size_t>(std::count_if(
      gates_.begin(), gates_.end(), [](const Gate& g) { return arity(g.kind) == 2; }));
}

std::string Circuit::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    if (i) s += ", ";
    s += gates_[i].to_string();
  }
  return s;
}

Circuit cancel_inverse_pairs(const Circuit& c) {
  std::vector<Gate> kept;
  std::vector<bool> alive;
  bool changed = true;
  std::vector<Gate> gates = c.gates();
  while (changed) {
    changed = false;
    kept.clear();
    // last[q] = position in `kept` of the latest gate touching q.
    std::vector<long> last(c.n_qubits(), -1);
    alive.clear();
    for (const auto& g : gates) {
      const auto qs = g.qubits();
      long prev = last[qs[0]];
      bool same_prev = prev >= 0;
      for (auto q : qs) same_prev = same_prev && last[q] == prev;
      if (same_prev && alive[static_cast<std::size_t>(prev)] && self_inverse(g.kind) &&
          same_action(kept[static_cast<std::size_t>(prev)], g) &&
          kept[static_cast<std::size_t>(prev)].qubits().size() == qs.size()) {
        alive[static_cast<std::size_t>(prev)] = false;
        for (auto q : qs) last[q] = -2;  // blocks further cancellation across the gap
        changed = true;
        continue;
      }
      kept.push_back(g);
      alive.push_back(true);
      for (auto q : qs) last[q] = static_cast<long>(kept.size() - 1);
    }
    gates.clear();
    for (std::size_t i = 0; i < kept.size(); ++i)
      if (alive[i]) gates.push_back(kept[i]);
  }
  Circuit out(c.n_qubits());
  for (const auto& g : gates) out.add(g);
  return out;
}

}  // namespace qrdmft
