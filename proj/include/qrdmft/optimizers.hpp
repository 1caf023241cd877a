#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace qrdmft {

using Objective = std::function<double(const Eigen::VectorXd&)>;
/// Returns f(x); writes the gradient when `grad` is non-null.
using SmoothObjective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;
/// Called once per accepted iteration with the current iterate and value.
using IterationHook = std::function<void(std::size_t iteration, const Eigen::VectorXd& x, double value)>;

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct LbfgsOptions {
  double gradient_tolerance = 1e-8;
  double function_tolerance = 1e-14;
  double parameter_tolerance = 1e-14;
  std::size_t max_iterations = 10000;
};

/// Limited-memory BFGS with a Wolfe line search (Ceres).
MinimizeResult lbfgs_minimize(const SmoothObjective& f, const Eigen::VectorXd& x0, const LbfgsOptions& options = {},
                              const IterationHook& hook = {});

struct SimplexOptions {
  double initial_step = 0.5;
  /// Stops when the characteristic simplex size falls below this value.
  double tolerance = 0.01;
  std::size_t max_iterations = 10000;
};

/// Nelder-Mead simplex (GSL nmsimplex2), derivative free.
MinimizeResult simplex_minimize(const Objective& f, const Eigen::VectorXd& x0, const SimplexOptions& options = {},
                                const IterationHook& hook = {});

struct SpsaOptions {
  std::size_t iterations = 1000;
  double a = 0.2;
  double c = 0.1;
  double A = 10.0;
  double alpha = 0.602;
  double gamma = 0.101;
  std::uint64_t seed = 0;
};

/// Two-evaluation SPSA with gains a/(k+1+A)^alpha and c/(k+1)^gamma. Each
/// iterate is scored by the mean of its two perturbed evaluations; the
/// best-scored iterate is re-evaluated and returned unless the start point
/// is better.
MinimizeResult spsa_minimize(const Objective& f, const Eigen::VectorXd& x0, const SpsaOptions& options = {},
                             const IterationHook& hook = {});

}  // namespace qrdmft
