#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "qrdmft/pauli.hpp"

namespace qrdmft {

/// Vertex orderings for greedy coloring of the anti-commutation graph
/// (equivalently, clique cover of the commutation graph).
enum class ColoringStrategy {
  LargestFirst,      // descending degree, ties by index
  Dsatur,            // saturation degree, ties by degree then index
  RandomSequential,  // seeded random order
  Best,              // fewest groups of LargestFirst and Dsatur
};

std::string_view to_string(ColoringStrategy s);
ColoringStrategy parse_coloring_strategy(std::string_view text);

/// Partitions term indices into groups that pairwise commute at `level`.
/// Groups are listed by their smallest member; members ascend.
std::vector<std::vector<std::size_t>> group_paulis(const std::vector<PauliTerm>& terms,
                                                   CommutationLevel level, std::uint64_t seed = 0,
                                                   ColoringStrategy strategy = ColoringStrategy::Best);

}  // namespace qrdmft
