#include "qrdmft/sampling.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <tuple>

namespace qrdmft {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return std::generate_canonical<double, 53>(rng); }

// An error event: insert Pauli `ops` (one char per touched qubit) after gate `gate`.
struct ErrorEvent {
  std::size_t gate;
  char op0;
  char op1;
  bool operator<(const ErrorEvent& o) const {
    return std::tie(gate, op0, op1) < std::tie(o.gate, o.op0, o.op1);
  }
};

using ErrorPattern = std::vector<ErrorEvent>;

constexpr char kPaulis[4] = {'I', 'X', 'Y', 'Z'};

ErrorPattern draw_pattern(const Circuit& c, const NoiseSpec& noise,
                          std::mt19937_64& rng) {
  ErrorPattern p;
  const auto& gates = c.gates();
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    if (arity(g.kind) == 1) {
      if (g.kind == GateKind::RZ || noise.depolarizing_1q <= 0.0) continue;
      if (uniform01(rng) < noise.depolarizing_1q) {
        const auto k = static_cast<std::size_t>(uniform01(rng) * 3.0);
        p.push_back({i, kPaulis[1 + std::min<std::size_t>(k, 2)], 'I'});
      }
    } else if (noise.depolarizing_2q > 0.0 && uniform01(rng) < noise.depolarizing_2q) {
      const auto k = 1 + std::min<std::size_t>(static_cast<std::size_t>(uniform01(rng) * 15.0), 14);
      p.push_back({i, kPaulis[k % 4], kPaulis[k / 4]});
    }
  }
  return p;
}

void apply_error_op(StateVector& s, std::size_t q, char op) {
  if (op == 'I') return;
  s.apply(Gate{op == 'X' ? GateKind::X : op == 'Y' ? GateKind::Y : GateKind::Z, q, 0, 0.0});
}

StateVector run_with_errors(const StateVector& start, const Circuit& c, const ErrorPattern& pattern) {
  StateVector s = start;
  auto next = pattern.begin();
  const auto& gates = c.gates();
  for (std::size_t i = 0; i < gates.size(); ++i) {
    s.apply(gates[i]);
    while (next != pattern.end() && next->gate == i) {
      apply_error_op(s, gates[i].q0, next->op0);
      if (arity(gates[i].kind) == 2) apply_error_op(s, gates[i].q1, next->op1);
      ++next;
    }
  }
  return s;
}

void draw_bits(const StateVector& s, const std::vector<std::size_t>& measured, std::uint64_t shots,
               const NoiseSpec* noise, std::mt19937_64& rng, Counts& counts) {
  const Eigen::VectorXd probs = s.probabilities();
  std::discrete_distribution<std::size_t> dist(probs.data(), probs.data() + probs.size());
  std::string bits(measured.size(), '0');
  for (std::uint64_t k = 0; k < shots; ++k) {
    const std::size_t index = dist(rng);
    for (std::size_t m = 0; m < measured.size(); ++m) {
      const std::size_t q = measured[m];
      bool one = (index >> q) & 1U;
      if (noise) {
        const double flip = one ? noise->p10(q) : noise->p01(q);
        if (flip > 0.0 && uniform01(rng) < flip) one = !one;
      }
      bits[m] = one ? '1' : '0';
    }
    ++counts[bits];
  }
}

Counts sample_impl(const StateVector& start, const Circuit& c, const std::vector<std::size_t>& measured, std::uint64_t shots,
                   const std::optional<NoiseSpec>& noise, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be at least 1");
  for (auto q : measured) {
    if (q >= c.n_qubits()) throw std::out_of_range("measured qubit out of range");
  }
  if (noise) noise->validate();
  std::mt19937_64 rng(derive_seed(seed, noise ? noise->seed : 0));
  Counts counts;
  const bool gate_noise = noise && (noise->depolarizing_1q > 0.0 || noise->depolarizing_2q > 0.0);
  if (!gate_noise) {
    StateVector s = start;
    s.apply(c);
    draw_bits(s, measured, shots, noise ? &*noise : nullptr, rng, counts);
    return counts;
  }
  // Shots sharing an error pattern share one trajectory simulation.
  std::map<ErrorPattern, std::uint64_t> patterns;
  for (std::uint64_t k = 0; k < shots; ++k) ++patterns[draw_pattern(c, *noise, rng)];
  for (const auto& [pattern, n] : patterns) {
    const StateVector s = run_with_errors(start, c, pattern);
    draw_bits(s, measured, n, &*noise, rng, counts);
  }
  return counts;
}

}  // namespace

double NoiseSpec::p10(std::size_t q) const {
  if (readout_p10.empty()) return 0.0;
  return readout_p10.size() == 1 ? readout_p10[0] : readout_p10.at(q);
}

double NoiseSpec::p01(std::size_t q) const {
  if (readout_p01.empty()) return 0.0;
  return readout_p01.size() == 1 ? readout_p01[0] : readout_p01.at(q);
}

void NoiseSpec::validate() const {
  auto check = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument(std::string(what) + " probability " + std::to_string(p) +
                                  " outside [0,1]");
    }
  };
  check(depolarizing_1q, "depolarizing_1q");
  check(depolarizing_2q, "depolarizing_2q");
  for (double p : readout_p10) check(p, "readout_p10");
  for (double p : readout_p01) check(p, "readout_p01");
}

bool NoiseSpec::noiseless() const {
  auto zero = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double p) { return p == 0.0; });
  };
  return depolarizing_1q == 0.0 && depolarizing_2q == 0.0 && zero(readout_p10) && zero(readout_p01);
}

NoiseSpec device_noise() {
  NoiseSpec n;
  n.depolarizing_1q = 2.571e-4;
  n.depolarizing_2q = 7.344e-3;
  n.readout_p10 = {0.0438};
  n.readout_p01 = {0.0080};
  return n;
}

Counts sample(const StateVector& s, const Circuit& mc, const std::vector<std::size_t>& measured,
              std::uint64_t shots, const std::optional<NoiseSpec>& noise, std::uint64_t seed) {
  if (s.n_qubits() != mc.n_qubits()) throw std::invalid_argument("circuit and state widths differ");
  return sample_impl(s, mc, measured, shots, noise, seed);
}

Counts sample_circuit(const Circuit& c, const std::vector<std::size_t>& measured, std::uint64_t shots,
                      const std::optional<NoiseSpec>& noise, std::uint64_t seed) {
  return sample_impl(StateVector(c.n_qubits()), c, measured, shots, noise, seed);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

}  // namespace qrdmft
