#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qrdmft/pauli.hpp"

namespace qrdmft {

/// Fermion-to-qubit transforms. All of them use one qubit per mode and the
/// convention that an occupied mode corresponds to qubit state |1>.
enum class EncodingScheme { JordanWigner, Parity, BravyiKitaev };

std::string_view to_string(EncodingScheme scheme);
/// Accepts "jw", "parity", "bk" and the long names.
EncodingScheme parse_encoding_scheme(std::string_view text);

enum class LadderKind { Annihilate, Create };

/// One two-body term: u * c+_alpha c+_beta c_gamma c_delta.
///
/// The pair-exchange partner of the usual 1/2-sum is folded into the
/// coefficient, so the on-site Hubbard repulsion U n_a n_b is the single
/// term {a, b, a, b, U}.
struct InteractionTerm {
  std::size_t alpha = 0;
  std::size_t beta = 0;
  std::size_t delta = 0;
  std::size_t gamma = 0;
  double u = 0.0;
};

struct InteractionSpec {
  std::size_t n_modes = 0;
  std::vector<InteractionTerm> terms;

  /// Throws std::invalid_argument if an index is outside [0, n_modes).
  void validate() const;
  bool empty() const { return terms.empty(); }
};

/// Qubit image of c_index or c+_index on n_modes modes.
PauliSum encode_ladder(std::size_t index, LadderKind kind, EncodingScheme scheme,
                       std::size_t n_modes);

/// Hermitian observables for one density-matrix element.
///
/// For alpha != beta: real_part = c+_a c_b + c+_b c_a and
/// imag_part = i (c+_a c_b - c+_b c_a), so that
/// rho_{beta,alpha} = <c+_alpha c_beta> = (<real_part> - i <imag_part>) / 2.
/// For alpha == beta: real_part is the number operator, imag_part is empty,
/// and rho_{alpha,alpha} = <real_part>.
struct Rho1Observables {
  PauliSum real_part;
  PauliSum imag_part;
};

Rho1Observables rho1_observables(std::size_t alpha, std::size_t beta, EncodingScheme scheme,
                                 std::size_t n_modes);

/// Image of c+_gamma c+_delta c_alpha c_beta (not hermitized).
PauliSum rho2_observable(std::size_t alpha, std::size_t beta, std::size_t gamma,
                         std::size_t delta, EncodingScheme scheme, std::size_t n_modes);

/// Image of the interaction operator. Throws std::invalid_argument when the
/// encoded operator has imaginary coefficients above 1e-12 (non-hermitian
/// spec); the remaining imaginary round-off is dropped.
PauliSum interaction_observable(const InteractionSpec& w, EncodingScheme scheme);

/// Image of sum_{ab} h_{ab} c+_a c_b for a hermitian matrix h.
PauliSum one_body_observable(const Eigen::MatrixXcd& h, EncodingScheme scheme);

/// All distinct non-identity Pauli words needed to measure every element of
/// rho(1) on n_modes modes (upper triangle plus diagonal).
std::vector<PauliTerm> rho1_pauli_words(EncodingScheme scheme, std::size_t n_modes);

}  // namespace qrdmft
