#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qrdmft/optimizers.hpp"

namespace qrdmft {

/// min_u f(u) subject to c(u) = 0.
struct ConstrainedProblem {
  std::size_t n_params = 0;
  std::size_t n_constraints = 0;
  /// Returns f(u) and writes c(u). The current multipliers and penalties
  /// are passed for problems that eliminate auxiliary variables per call.
  std::function<double(const Eigen::VectorXd& u, const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu,
                       Eigen::VectorXd& c)>
      evaluate;
  /// Gradient of f(u) + sum_k weights_k c_k(u), evaluated right after
  /// `evaluate` at the same u. Leave empty for derivative-free solvers.
  std::function<Eigen::VectorXd(const Eigen::VectorXd& u, const Eigen::VectorXd& weights)> gradient;
};

enum class InnerSolver { Lbfgs, Simplex, Spsa };

std::string_view to_string(InnerSolver s);
InnerSolver parse_inner_solver(std::string_view text);

struct AugLagConfig {
  double mu0 = 10.0;
  double beta = 1.5;
  std::size_t max_outer = 10;
  /// Gradient tolerance (L-BFGS) or simplex size tolerance.
  double inner_tol = 1e-8;
  std::size_t inner_max_iter = 10000;
  InnerSolver inner = InnerSolver::Lbfgs;
  SpsaOptions spsa;
  double simplex_step = 0.5;
  /// Converged when sum c^2 <= constraint_tol and |Delta f| <= objective_tol.
  double constraint_tol = 1e-10;
  double objective_tol = 1e-6;
  /// Grow only the penalties of constraints that did not shrink by 4x.
  bool conditional_penalty = false;
  /// Infeasible when sum c^2 drops by less than this fraction in two
  /// consecutive outer iterations.
  double stall_fraction = 0.01;
  /// Repeats of the residual measurement averaged for the outer-level
  /// sum c^2 (useful with shot noise).
  std::size_t residual_repeats = 1;
};

struct TraceRecord {
  std::size_t outer = 0;
  std::size_t inner = 0;
  double lagrangian = 0.0;
  double objective = 0.0;
  double sum_c2 = 0.0;
  std::size_t evaluations = 0;  // cumulative objective evaluations
};

struct OuterRecord {
  std::size_t outer = 0;
  double objective = 0.0;
  double sum_c2 = 0.0;
  double max_mu = 0.0;
};

struct AugLagState {
  Eigen::VectorXd u;
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;
  Eigen::VectorXd c;
  double objective = 0.0;
  std::size_t outer_iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  bool infeasible = false;
  std::vector<TraceRecord> trace;
  std::vector<OuterRecord> outer;

  double sum_c2() const { return c.squaredNorm(); }
};

/// Augmented Lagrangian L = f + sum lambda c + 1/2 sum mu c^2. Each outer
/// iteration minimizes L over u, then sets lambda += mu c and mu *= beta.
AugLagState auglag_minimize(const ConstrainedProblem& problem, const Eigen::VectorXd& u0,
                            const Eigen::VectorXd& lambda0, const AugLagConfig& config);

/// Throws std::invalid_argument for mu0 <= 0 or beta <= 1.
void validate(const AugLagConfig& config);

}  // namespace qrdmft
