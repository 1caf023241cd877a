#include "qrdmft/measurement.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qrdmft {

namespace {

MeasurementGroup local_basis_group(const std::vector<PauliTerm>& words, const std::vector<std::size_t>& members,
                                   std::size_t n_qubits) {
  MeasurementGroup g{members, Circuit(n_qubits), {}};
  std::vector<char> basis(n_qubits, 'I');
  for (auto m : members) {
    for (std::size_t q = 0; q < n_qubits; ++q) {
      const char op = words[m].op(q);
      if (op == 'I') continue;
      if (basis[q] != 'I' && basis[q] != op) {
        throw std::logic_error("group is not qubit-wise commuting on qubit " + std::to_string(q));
      }
      basis[q] = op;
    }
  }
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if (basis[q] == 'Y') g.circuit.add(Gate::sdg(q));
    if (basis[q] == 'X' || basis[q] == 'Y') g.circuit.add(Gate::h(q));
  }
  for (auto m : members) {
    Readout r;
    for (std::size_t q = 0; q < n_qubits; ++q)
      if (words[m].op(q) != 'I') r.qubits.push_back(q);
    g.readout.push_back(std::move(r));
  }
  return g;
}

}  // namespace

std::size_t MeasurementPlan::max_gate_count() const {
  std::size_t m = 0;
  for (const auto& g : groups) m = std::max(m, g.circuit.size());
  return m;
}

std::size_t MeasurementPlan::total_gate_count() const {
  std::size_t m = 0;
  for (const auto& g : groups) m += g.circuit.size();
  return m;
}

MeasurementPlan plan_measurements(const std::vector<PauliTerm>& words, const PlanOptions& options) {
  MeasurementPlan plan;
  plan.level = options.level;
  plan.n_qubits = words.empty() ? 0 : words.front().n_qubits();
  for (const auto& w : words) plan.words.push_back(w.with_coeff(1.0));
  for (auto& members : group_paulis(plan.words, options.level, options.seed, options.strategy)) {
    if (options.level == CommutationLevel::Gc) {
      std::vector<PauliTerm> subset;
      for (auto m : members) subset.push_back(plan.words[m]);
      SynthesisResult s = synthesize(subset, options.heuristic);
      plan.groups.push_back({std::move(members), std::move(s.circuit), std::move(s.readout)});
    } else {
      plan.groups.push_back(local_basis_group(plan.words, members, plan.n_qubits));
    }
  }
  return plan;
}

std::vector<double> estimate(const MeasurementPlan& plan, const std::vector<Counts>& counts) {
  if (counts.size() != plan.groups.size()) {
    throw std::invalid_argument("expected counts for " + std::to_string(plan.groups.size()) + " groups, got " +
                                std::to_string(counts.size()));
  }
  std::vector<double> out(plan.words.size(), 0.0);
  for (std::size_t g = 0; g < plan.groups.size(); ++g) {
    const auto& group = plan.groups[g];
    std::uint64_t shots = 0;
    for (const auto& [bits, n] : counts[g]) shots += n;
    if (shots == 0) throw std::invalid_argument("group " + std::to_string(g) + " has no shots");
    for (std::size_t k = 0; k < group.members.size(); ++k) {
      const Readout& r = group.readout[k];
      double acc = 0.0;
      for (const auto& [bits, n] : counts[g]) {
        if (bits.size() != plan.n_qubits) throw std::invalid_argument("bitstring width differs from the plan");
        int parity = 0;
        for (auto q : r.qubits) parity ^= bits[q] == '1';
        acc += static_cast<double>(n) * (parity ? -1.0 : 1.0);
      }
      out[group.members[k]] = r.sign * acc / static_cast<double>(shots);
    }
  }
  return out;
}

std::vector<Counts> run_plan(const MeasurementPlan& plan, const Circuit& prep, std::uint64_t shots,
                             const std::optional<NoiseSpec>& noise, std::uint64_t seed) {
  std::vector<std::size_t> all(plan.n_qubits);
  std::iota(all.begin(), all.end(), 0);
  std::vector<Counts> counts;
  counts.reserve(plan.groups.size());
  for (std::size_t g = 0; g < plan.groups.size(); ++g) {
    Circuit c = prep;
    c.append(plan.groups[g].circuit);
    counts.push_back(sample_circuit(c, all, shots, noise, derive_seed(seed, g)));
  }
  return counts;
}

}  // namespace qrdmft
