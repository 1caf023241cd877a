#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qrdmft/grouping.hpp"
#include "qrdmft/sampling.hpp"
#include "qrdmft/stabilizer.hpp"

namespace qrdmft {

struct MeasurementGroup {
  std::vector<std::size_t> members;  // indices into MeasurementPlan::words
  Circuit circuit;
  std::vector<Readout> readout;  // parallel to members
};

struct MeasurementPlan {
  std::size_t n_qubits = 0;
  CommutationLevel level = CommutationLevel::Qwc;
  std::vector<PauliTerm> words;
  std::vector<MeasurementGroup> groups;

  std::size_t max_gate_count() const;
  std::size_t total_gate_count() const;
};

struct PlanOptions {
  CommutationLevel level = CommutationLevel::Qwc;
  OrderHeuristic heuristic = OrderHeuristic::NoPermutation;
  ColoringStrategy strategy = ColoringStrategy::Best;
  std::uint64_t seed = 0;
};

/// Groups the words and builds one measurement circuit per group. QWC and
/// disjoint groups use single-qubit basis changes; GC groups use the
/// stabilizer synthesis. Coefficients of `words` are ignored.
MeasurementPlan plan_measurements(const std::vector<PauliTerm>& words, const PlanOptions& options = {});

/// Per-word expectation estimates from counts taken on every qubit
/// (bitstring position q = qubit q), one Counts per group.
std::vector<double> estimate(const MeasurementPlan& plan, const std::vector<Counts>& counts);

/// Samples every group circuit appended to `prep`, starting from |0...0>.
std::vector<Counts> run_plan(const MeasurementPlan& plan, const Circuit& prep, std::uint64_t shots,
                             const std::optional<NoiseSpec>& noise, std::uint64_t seed);

}  // namespace qrdmft
