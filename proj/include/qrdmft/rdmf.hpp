#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qrdmft/aca.hpp"
#include "qrdmft/ansatz.hpp"
#include "qrdmft/auglag.hpp"
#include "qrdmft/encoding.hpp"
#include "qrdmft/exact_oracle.hpp"
#include "qrdmft/measurement.hpp"
#include "qrdmft/sampling.hpp"

namespace qrdmft {

enum class MultiplierInit { Zero, Mueller };

std::string_view to_string(MultiplierInit init);
MultiplierInit parse_multiplier_init(std::string_view text);

struct RdmfConfig {
  AugLagConfig auglag = default_auglag();
  MultiplierInit multiplier_init = MultiplierInit::Zero;
  std::uint64_t seed = 1;
  EncodingScheme scheme = EncodingScheme::JordanWigner;
  /// qubit_of_mode[m] is the qubit that carries mode m; empty means mode m
  /// sits on qubit m.
  std::vector<std::size_t> qubit_of_mode;
  /// Modes the interaction acts on. The environment unitary rotates the
  /// remaining modes and needs every interaction index inside this set.
  std::vector<std::size_t> interacting;
  bool environment_unitary = false;
  /// 0 evaluates expectations exactly; otherwise every evaluation samples
  /// the measurement plan with this many shots per group.
  std::uint64_t shots = 0;
  std::optional<NoiseSpec> noise;
  PlanOptions plan;
  /// Starting parameters of the first start; drawn uniformly from
  /// [-pi, pi] when empty and for every further start.
  Eigen::VectorXd u0;
  /// Independent augmented-Lagrangian runs. The result is the converged run
  /// with the lowest F, or the run with the smallest residual if none
  /// converged.
  std::size_t starts = 1;

  /// mu0 = 10, beta = 1.5, at most 10 outer iterations, L-BFGS inner solver.
  static AugLagConfig default_auglag();
  /// Throws std::invalid_argument for inconsistent settings.
  void validate(std::size_t n_modes) const;
};

struct RdmfResult {
  double F = 0.0;
  /// Final multipliers as a matrix M with dF = -Tr(M d rho), mode order.
  Eigen::MatrixXcd multipliers;
  Eigen::VectorXd u;
  /// Environment unitary applied to the measured density matrix (identity
  /// when disabled), mode order.
  Eigen::MatrixXcd environment;
  /// Measured density matrix at u after the environment rotation.
  Eigen::MatrixXcd rho;
  double constraint_violation = 0.0;  // sum c^2
  std::size_t outer_iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  /// The residual stalled while the penalties grew (representability failure).
  bool infeasible = false;
  std::vector<TraceRecord> trace;
  std::vector<OuterRecord> outer;
  /// Index of the start the result comes from.
  std::size_t start = 0;
};

/// Constrained minimization of <W> over the trial states of `layout`
/// subject to rho(1)(u) = target, one qubit per mode.
RdmfResult evaluate_rdmf(const Eigen::MatrixXcd& target, const InteractionSpec& w, const AnsatzLayout& layout,
                         const RdmfConfig& config);

/// Derivatives of <observable> in the trial state with respect to the
/// ansatz parameters by parameter shifts: +-pi/2 for RZ, four shifted
/// evaluations (+-pi/2, +-3pi/2) for CRZ and CRX.
Eigen::VectorXd parameter_shift_gradient(const AnsatzLayout& layout, const Eigen::VectorXd& u,
                                         const PauliSum& observable);

/// Penalty sum lambda_k c_k + 1/2 sum mu_k c_k^2 of the residuals
/// c = components of (V rho V^dagger - target) with V = 1_C (+) exp(iH)
/// acting on the complement E of the interacting modes.
///
/// The generator H is packed as |E|^2 reals: diagonal entries, then the
/// real and imaginary parts of the upper triangle row by row. Empty lambda
/// means zero multipliers and empty mu means unit penalties.
struct EnvironmentProblem {
  Eigen::MatrixXcd measured;
  Eigen::MatrixXcd target;
  std::vector<std::size_t> interacting;
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;

  std::vector<std::size_t> environment() const;
  std::size_t parameter_count() const;
  Eigen::MatrixXcd generator(const Eigen::VectorXd& h) const;
  /// Full-size unitary V.
  Eigen::MatrixXcd unitary(const Eigen::VectorXd& h) const;
  double value(const Eigen::VectorXd& h, Eigen::VectorXd* grad = nullptr) const;
};

struct EnvironmentFit {
  Eigen::VectorXd h;
  Eigen::MatrixXcd unitary;
  double value = 0.0;
};

/// Minimizes the penalty with L-BFGS (gradient tolerance 1e-9) from H = 0
/// and, when given, from `h_start`; the better result is returned.
EnvironmentFit optimize_environment_unitary(const EnvironmentProblem& problem, const Eigen::VectorXd& h_start = {});

/// Mueller functional sum u (rho_da rho_gb - s_ga s_db) with s the
/// principal square root of rho (negative eigenvalues clamped to 0).
double muller_energy(const Eigen::MatrixXcd& rho, const InteractionSpec& w);

/// Multiplier matrix M = -dW_M/d rho from central differences along the
/// hermitian constraint directions. Throws RepresentabilityError for
/// occupations outside [0,1].
Eigen::MatrixXcd muller_multipliers(const Eigen::MatrixXcd& target, const InteractionSpec& w, double step = 1e-5);

enum class FunctionalBackend { Exact, Hybrid };

std::string_view to_string(FunctionalBackend backend);
FunctionalBackend parse_functional_backend(std::string_view text);

struct EnergyConfig {
  FunctionalBackend backend = FunctionalBackend::Exact;
  std::size_t aca_order = 1;
  OracleOptions oracle;
  /// Template for hybrid runs; `interacting` is filled per term and the
  /// seed is derived from config.rdmf.seed and the term index.
  RdmfConfig rdmf;
  /// Hybrid backend only; must have one qubit per kept mode.
  AnsatzLayout layout;
  std::size_t jobs = 1;
};

struct LocalContribution {
  double F = 0.0;
  std::size_t kept = 0;
  std::string method;  // oracle method or "hybrid"
  double constraint_violation = 0.0;
};

struct EnergyBreakdown {
  double energy = 0.0;
  double one_body = 0.0;  // Tr(rho h)
  std::vector<LocalContribution> locals;
};

/// Tr(rho h) plus the local functionals of the ACA-reduced density
/// matrices, one concurrent task per local term (at most `jobs` at once).
/// Throws std::invalid_argument for a non-empty non-local part and
/// std::runtime_error naming the term index when a local evaluation fails.
EnergyBreakdown total_energy(const Eigen::MatrixXcd& h, const LocalDecomposition& decomposition,
                             const Eigen::MatrixXcd& rho, const EnergyConfig& config);

}  // namespace qrdmft
