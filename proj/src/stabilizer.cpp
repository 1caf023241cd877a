#include "qrdmft/stabilizer.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace qrdmft {

std::size_t gf2_rank(std::vector<BitMask> rows) {
  std::size_t rank = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto lead = rows[i].find_first();
    if (lead == BitMask::npos) continue;
    ++rank;
    for (std::size_t k = i + 1; k < rows.size(); ++k)
      if (rows[k].test(lead)) rows[k] ^= rows[i];
  }
  return rank;
}

PauliTerm StabilizerMatrix::column(std::size_t j) const {
  BitMask zc(n_qubits), xc(n_qubits);
  for (std::size_t q = 0; q < n_qubits; ++q) {
    zc[q] = z[q][j];
    xc[q] = x[q][j];
  }
  return PauliTerm(std::move(zc), std::move(xc), r[j] ? -1.0 : 1.0);
}

std::size_t StabilizerMatrix::rank_zx() const {
  std::vector<BitMask> rows = z;
  rows.insert(rows.end(), x.begin(), x.end());
  return gf2_rank(std::move(rows));
}

std::string StabilizerMatrix::to_string() const {
  auto line = [&](const BitMask& row) {
    std::string s;
    for (std::size_t j = 0; j < n_strings; ++j) s += row[j] ? '1' : '0';
    return s + '\n';
  };
  std::string out;
  for (const auto& row : z) out += line(row);
  for (const auto& row : x) out += line(row);
  out += line(r);
  return out;
}

bool StabilizerMatrix::operator==(const StabilizerMatrix& o) const {
  return n_qubits == o.n_qubits && n_strings == o.n_strings && z == o.z && x == o.x && r == o.r;
}

StabilizerMatrix stabilizer_from(const std::vector<PauliTerm>& paulis) {
  StabilizerMatrix s;
  s.n_strings = paulis.size();
  s.n_qubits = paulis.empty() ? 0 : paulis.front().n_qubits();
  for (std::size_t a = 0; a < paulis.size(); ++a) {
    if (paulis[a].n_qubits() != s.n_qubits) throw std::invalid_argument("Pauli words differ in qubit count");
    for (std::size_t b = a + 1; b < paulis.size(); ++b) {
      if (!commutes(paulis[a], paulis[b], CommutationLevel::Gc)) {
        throw std::invalid_argument("Pauli words " + paulis[a].label() + " and " + paulis[b].label() +
                                    " do not commute");
      }
    }
  }
  s.z.assign(s.n_qubits, BitMask(s.n_strings));
  s.x.assign(s.n_qubits, BitMask(s.n_strings));
  s.r = BitMask(s.n_strings);
  for (std::size_t j = 0; j < paulis.size(); ++j) {
    for (std::size_t q = 0; q < s.n_qubits; ++q) {
      s.z[q][j] = paulis[j].z()[q];
      s.x[q][j] = paulis[j].x()[q];
    }
  }
  return s;
}

void conjugate_in_place(StabilizerMatrix& s, const Gate& g) {
  for (auto q : g.qubits()) {
    if (q >= s.n_qubits) throw std::out_of_range("gate " + g.to_string() + " outside the stabilizer matrix");
  }
  const std::size_t a = g.q0, b = g.q1;
  switch (g.kind) {
    case GateKind::H:
      s.r ^= s.x[a] & s.z[a];
      std::swap(s.x[a], s.z[a]);
      return;
    case GateKind::S:
      s.r ^= s.x[a] & s.z[a];
      s.z[a] ^= s.x[a];
      return;
    case GateKind::Sdg:
      s.r ^= s.x[a] - s.z[a];
      s.z[a] ^= s.x[a];
      return;
    case GateKind::X:
      s.r ^= s.z[a];
      return;
    case GateKind::Y:
      s.r ^= s.x[a] ^ s.z[a];
      return;
    case GateKind::Z:
      s.r ^= s.x[a];
      return;
    case GateKind::CNOT:
      s.r ^= s.x[a] & s.z[b] & ~(s.x[b] ^ s.z[a]);
      s.x[b] ^= s.x[a];
      s.z[a] ^= s.z[b];
      return;
    case GateKind::CZ:
      conjugate_in_place(s, Gate::h(b));
      conjugate_in_place(s, Gate::cnot(a, b));
      conjugate_in_place(s, Gate::h(b));
      return;
    case GateKind::SWAP:
      std::swap(s.x[a], s.x[b]);
      std::swap(s.z[a], s.z[b]);
      return;
    default:
      throw std::invalid_argument("gate " + g.to_string() + " is not a supported Clifford gate");
  }
}

StabilizerMatrix conjugate(StabilizerMatrix s, const Gate& g) {
  conjugate_in_place(s, g);
  return s;
}

namespace {

class Synthesizer {
 public:
  Synthesizer(const std::vector<PauliTerm>& paulis, OrderHeuristic heuristic)
      : s_(stabilizer_from(paulis)), heuristic_(heuristic) {
    result_.circuit = Circuit(s_.n_qubits);
    stage("prep");
  }

  SynthesisResult run() {
    maximize_rank();
    stage("rank_max");
    echelon();
    back_substitute();
    stage("diag_red");
    clear_z();
    stage("z_red");
    for (auto q : pivot_rows_) emit(Gate::h(q));
    stage("xz_flip");
    for (std::size_t q = 0; q < s_.n_qubits; ++q) {
      if (s_.x[q].any()) throw std::logic_error("measurement synthesis left X support on qubit " + std::to_string(q));
    }
    fix_signs();
    stage("sign");
    for (std::size_t j = 0; j < s_.n_strings; ++j) {
      Readout ro;
      for (std::size_t q = 0; q < s_.n_qubits; ++q)
        if (s_.z[q][j]) ro.qubits.push_back(q);
      ro.sign = s_.r[j] ? -1 : 1;
      result_.readout.push_back(std::move(ro));
    }
    return std::move(result_);
  }

 private:
  void emit(const Gate& g) {
    conjugate_in_place(s_, g);
    result_.circuit.add(g);
    pending_.push_back(g);
  }

  void stage(const char* name) {
    result_.stages.push_back({name, s_, std::move(pending_)});
    pending_.clear();
  }

  std::size_t rank_with_flips(const std::vector<bool>& flip) const {
    std::vector<BitMask> rows;
    for (std::size_t q = 0; q < s_.n_qubits; ++q) rows.push_back(flip[q] ? s_.z[q] : s_.x[q]);
    return gf2_rank(std::move(rows));
  }

  void maximize_rank() {
    const std::size_t target = s_.rank_zx();
    std::vector<bool> used(s_.n_qubits, false);
    std::size_t rank = s_.rank_x();
    while (rank < target) {
      bool progressed = false;
      for (std::size_t q = 0; q < s_.n_qubits && rank < target; ++q) {
        if (used[q]) continue;
        std::vector<bool> flip(s_.n_qubits, false);
        flip[q] = true;
        const std::size_t trial = rank_with_flips(flip);
        if (trial > rank) {
          emit(Gate::h(q));
          used[q] = true;
          rank = trial;
          progressed = true;
        }
      }
      if (!progressed) {
        exhaustive_rank_search(target);
        return;
      }
    }
  }

  // Fallback when single greedy Hadamards stall: smallest qubit subset
  // whose Hadamards reach the target rank.
  void exhaustive_rank_search(std::size_t target) {
    const std::size_t n = s_.n_qubits;
    if (n > 24) throw std::runtime_error("rank maximization stalled on a register too wide for exhaustive search");
    for (std::size_t size = 1; size <= n; ++size) {
      std::vector<bool> pick(n, false);
      std::fill(pick.begin(), pick.begin() + static_cast<long>(size), true);
      do {
        if (rank_with_flips(pick) == target) {
          for (std::size_t q = 0; q < n; ++q)
            if (pick[q]) emit(Gate::h(q));
          return;
        }
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    throw std::logic_error("no Hadamard subset reaches the maximal X rank");
  }

  // Brings S_X to row echelon form; fills pivot_rows_/pivot_cols_.
  void echelon() {
    const std::size_t n = s_.n_qubits;
    if (heuristic_ == OrderHeuristic::PivotedPlu) {
      // First pass on a copy finds the row exchanges of partial pivoting.
      std::vector<BitMask> rows = s_.x;
      std::size_t p = 0;
      for (std::size_t j = 0; j < s_.n_strings && p < n; ++j) {
        std::size_t i = p;
        while (i < n && !rows[i][j]) ++i;
        if (i == n) continue;
        if (i != p) {
          std::swap(rows[i], rows[p]);
          emit(Gate::swap(p, i));
        }
        for (std::size_t k = p + 1; k < n; ++k)
          if (rows[k][j]) rows[k] ^= rows[p];
        ++p;
      }
      stage("perm");
      p = 0;
      for (std::size_t j = 0; j < s_.n_strings && p < n; ++j) {
        if (!s_.x[p][j]) {
          // Column j depends on earlier pivots once rows below are reduced.
          bool found = false;
          for (std::size_t k = p + 1; k < n; ++k) found = found || s_.x[k][j];
          if (found) throw std::logic_error("row exchange pass and elimination pass disagree");
          continue;
        }
        for (std::size_t k = p + 1; k < n; ++k)
          if (s_.x[k][j]) emit(Gate::cnot(p, k));
        pivot_rows_.push_back(p);
        pivot_cols_.push_back(j);
        ++p;
      }
      stage("row_red");
      return;
    }
    std::vector<bool> used(n, false);
    for (std::size_t j = 0; j < s_.n_strings; ++j) {
      std::size_t i = 0;
      while (i < n && (used[i] || !s_.x[i][j])) ++i;
      if (i == n) continue;
      used[i] = true;
      for (std::size_t k = 0; k < n; ++k)
        if (!used[k] && s_.x[k][j]) emit(Gate::cnot(i, k));
      pivot_rows_.push_back(i);
      pivot_cols_.push_back(j);
    }
    stage("perm");
    stage("row_red");
  }

  void back_substitute() {
    for (std::size_t b = pivot_rows_.size(); b-- > 0;) {
      std::vector<std::size_t> earlier(pivot_rows_.begin(), pivot_rows_.begin() + static_cast<long>(b));
      std::sort(earlier.rbegin(), earlier.rend());
      for (auto a : earlier)
        if (s_.x[a][pivot_cols_[b]]) emit(Gate::cnot(pivot_rows_[b], a));
    }
  }

  void clear_z() {
    const std::size_t k = pivot_rows_.size();
    for (std::size_t a = 0; a < k; ++a) {
      if (s_.z[pivot_rows_[a]][pivot_cols_[a]]) emit(Gate::sdg(pivot_rows_[a]));
    }
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        if (s_.z[pivot_rows_[a]][pivot_cols_[b]]) emit(Gate::cz(pivot_rows_[a], pivot_rows_[b]));
      }
    }
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if (s_.z[pivot_rows_[a]][pivot_cols_[b]]) throw std::logic_error("Z block of pivot rows is not symmetric");
      }
    }
  }

  void fix_signs() {
    std::vector<bool> flipped(s_.n_qubits, false);
    for (std::size_t j = 0; j < s_.n_strings; ++j) {
      if (!s_.r[j]) continue;
      std::size_t only = BitMask::npos, count = 0;
      for (std::size_t q = 0; q < s_.n_qubits; ++q) {
        if (s_.z[q][j]) {
          only = q;
          ++count;
        }
      }
      if (count == 1 && !flipped[only]) {
        emit(Gate::y(only));
        flipped[only] = true;
      }
    }
  }

  StabilizerMatrix s_;
  OrderHeuristic heuristic_;
  SynthesisResult result_;
  std::vector<Gate> pending_;
  std::vector<std::size_t> pivot_rows_;
  std::vector<std::size_t> pivot_cols_;
};

}  // namespace

SynthesisResult synthesize(const std::vector<PauliTerm>& paulis, OrderHeuristic heuristic) {
  if (paulis.empty()) throw std::invalid_argument("cannot synthesize a measurement for an empty set");
  SynthesisResult r = Synthesizer(paulis, heuristic).run();
  r.circuit = cancel_inverse_pairs(r.circuit);
  return r;
}

std::string_view to_string(OrderHeuristic h) {
  return h == OrderHeuristic::PivotedPlu ? "pivoted_plu" : "no_permutation";
}

OrderHeuristic parse_order_heuristic(std::string_view text) {
  if (text == "pivoted_plu") return OrderHeuristic::PivotedPlu;
  if (text == "no_permutation") return OrderHeuristic::NoPermutation;
  throw std::invalid_argument("unknown order heuristic '" + std::string(text) + "'");
}

}  // namespace qrdmft
