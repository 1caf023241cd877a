#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrdmft/circuit.hpp"
#include "qrdmft/statevector.hpp"

namespace qrdmft {

/// Bitstring (first character = first measured qubit) -> number of shots.
using Counts = std::map<std::string, std::uint64_t>;

/// Stochastic Pauli noise plus classical readout flips.
///
/// After every non-RZ single-qubit gate a uniformly chosen X, Y or Z error
/// occurs with probability depolarizing_1q; after every two-qubit gate one
/// of the 15 non-identity two-qubit Paulis occurs with probability
/// depolarizing_2q. RZ is treated as a virtual, error-free gate. Readout
/// vectors hold one probability per qubit; a single entry applies to all.
struct NoiseSpec {
  double depolarizing_1q = 0.0;
  double depolarizing_2q = 0.0;
  std::vector<double> readout_p10;  // measured 0 although the qubit is 1
  std::vector<double> readout_p01;  // measured 1 although the qubit is 0
  std::uint64_t seed = 0;

  double p10(std::size_t q) const;
  double p01(std::size_t q) const;
  /// Throws std::invalid_argument if a probability lies outside [0,1].
  void validate() const;
  bool noiseless() const;
};

/// Rates taken from a five-qubit superconducting device calibration:
/// single-qubit gate error 2.57e-4, CNOT error 7.34e-3, SPAM flips
/// p(1->0) = 0.0438, p(0->1) = 0.0080.
NoiseSpec device_noise();

/// Applies `mc` to `s` and samples `measured` in the computational basis.
/// Gate noise, if any, is applied to the gates of `mc` only.
Counts sample(const StateVector& s, const Circuit& mc, const std::vector<std::size_t>& measured,
              std::uint64_t shots, const std::optional<NoiseSpec>& noise, std::uint64_t seed);

/// Runs `c` from |0...0> and samples `measured`; gate noise applies to
/// every gate of `c`.
Counts sample_circuit(const Circuit& c, const std::vector<std::size_t>& measured, std::uint64_t shots,
                      const std::optional<NoiseSpec>& noise, std::uint64_t seed);

/// Deterministic child seed for task `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace qrdmft
