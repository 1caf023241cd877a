#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qrdmft/eigensolver.hpp"
#include "qrdmft/encoding.hpp"
#include "qrdmft/fock.hpp"

namespace qrdmft {

/// Open Hubbard chain. Spin orbital 2i is site i spin up, 2i+1 spin down.
struct HubbardSpec {
  std::size_t L = 2;
  double t = 1.0;
  double U = 0.0;
  std::size_t n_up = 1;
  std::size_t n_down = 1;

  /// n_up = ceil(L/2), n_down = floor(L/2).
  static HubbardSpec half_filled(std::size_t L, double t, double U);
  /// Throws std::invalid_argument for L < 1 or counts above L.
  void validate() const;
};

struct HubbardModel {
  Eigen::MatrixXcd h;  // 2L x 2L hopping matrix
  InteractionSpec w;   // L on-site terms (none when U = 0)
};

HubbardModel build_hubbard(const HubbardSpec& spec);

/// Even and odd spin-orbital indices.
std::vector<std::vector<std::size_t>> spin_groups(std::size_t n_modes);

struct GroundState {
  double energy = 0.0;
  FockBasis basis;
  Eigen::VectorXcd state;
};

inline constexpr std::size_t kDefaultSectorCap = 10'000'000;

/// Lowest eigenpair in the (n_up, n_down) sector. Throws
/// std::invalid_argument when the sector dimension exceeds `max_dim`.
GroundState ground_state(const HubbardSpec& spec, std::size_t max_dim = kDefaultSectorCap,
                         const EigenOptions& options = {});

/// Checks hermiticity (1e-10) and occupations in [-1e-9, 1+1e-9]; throws
/// std::invalid_argument with the offending quantity otherwise.
void validate_one_particle_dm(const Eigen::MatrixXcd& rho, double tol = 1e-9);

/// Eigenvalues of the hermitian part, ascending.
Eigen::VectorXd occupations(const Eigen::MatrixXcd& rho);

}  // namespace qrdmft
