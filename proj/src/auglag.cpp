#include "qrdmft/auglag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "qrdmft/sampling.hpp"

namespace qrdmft {

namespace {

using Index = Eigen::Index;

struct Point {
  double objective = 0.0;
  double lagrangian = 0.0;
  double sum_c2 = 0.0;
};

class LagrangianEvaluator {
 public:
  LagrangianEvaluator(const ConstrainedProblem& p, const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu,
                      std::size_t& evaluations)
      : p_(p), lambda_(lambda), mu_(mu), evaluations_(evaluations), c_(static_cast<Index>(p.n_constraints)) {}

  double value(const Eigen::VectorXd& u, Eigen::VectorXd* grad) {
    ++evaluations_;
    const double f = p_.evaluate(u, lambda_, mu_, c_);
    const double l = f + lambda_.dot(c_) + 0.5 * (mu_.array() * c_.array().square()).sum();
    if (grad) *grad = p_.gradient(u, lambda_ + (mu_.array() * c_.array()).matrix());
    seen_[std::vector<double>(u.data(), u.data() + u.size())] = Point{f, l, c_.squaredNorm()};
    return l;
  }

  Point at(const Eigen::VectorXd& u) {
    auto it = seen_.find(std::vector<double>(u.data(), u.data() + u.size()));
    if (it != seen_.end()) return it->second;
    value(u, nullptr);
    return seen_.at(std::vector<double>(u.data(), u.data() + u.size()));
  }

 private:
  const ConstrainedProblem& p_;
  const Eigen::VectorXd& lambda_;
  const Eigen::VectorXd& mu_;
  std::size_t& evaluations_;
  Eigen::VectorXd c_;
  std::map<std::vector<double>, Point> seen_;
};

}  // namespace

std::string_view to_string(InnerSolver s) {
  switch (s) {
    case InnerSolver::Lbfgs: return "lbfgs";
    case InnerSolver::Simplex: return "simplex";
    case InnerSolver::Spsa: return "spsa";
  }
  return "?";
}

InnerSolver parse_inner_solver(std::string_view text) {
  if (text == "lbfgs") return InnerSolver::Lbfgs;
  if (text == "simplex") return InnerSolver::Simplex;
  if (text == "spsa") return InnerSolver::Spsa;
  throw std::invalid_argument("unknown inner solver '" + std::string(text) + "'");
}

void validate(const AugLagConfig& config) {
  if (!(config.mu0 > 0.0)) throw std::invalid_argument("mu0 must be positive");
  if (!(config.beta > 1.0)) throw std::invalid_argument("beta must exceed 1");
  if (config.max_outer == 0) throw std::invalid_argument("max_outer must be at least 1");
  if (config.residual_repeats == 0) throw std::invalid_argument("residual_repeats must be at least 1");
}

AugLagState auglag_minimize(const ConstrainedProblem& problem, const Eigen::VectorXd& u0,
                            const Eigen::VectorXd& lambda0, const AugLagConfig& config) {
  validate(config);
  if (static_cast<std::size_t>(u0.size()) != problem.n_params) throw std::invalid_argument("u0 has the wrong size");
  if (!problem.evaluate) throw std::invalid_argument("problem has no evaluate callback");
  if (config.inner == InnerSolver::Lbfgs && !problem.gradient)
    throw std::invalid_argument("L-BFGS inner solver needs a gradient callback");
  const Index m = static_cast<Index>(problem.n_constraints);

  AugLagState s;
  s.u = u0;
  s.lambda = lambda0.size() ? lambda0 : Eigen::VectorXd::Zero(m);
  if (s.lambda.size() != m) throw std::invalid_argument("lambda0 has the wrong size");
  s.mu = Eigen::VectorXd::Constant(m, config.mu0);
  s.c = Eigen::VectorXd::Zero(m);

  double prev_objective = std::numeric_limits<double>::quiet_NaN();
  double prev_sum_c2 = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd prev_c;
  std::size_t stalls = 0;

  for (std::size_t outer = 1; outer <= config.max_outer; ++outer) {
    LagrangianEvaluator lag(problem, s.lambda, s.mu, s.evaluations);
    auto hook = [&](std::size_t iteration, const Eigen::VectorXd& x, double) {
      const Point p = lag.at(x);
      s.trace.push_back({outer, iteration, p.lagrangian, p.objective, p.sum_c2, s.evaluations});
    };
    MinimizeResult r;
    switch (config.inner) {
      case InnerSolver::Lbfgs: {
        LbfgsOptions o;
        o.gradient_tolerance = config.inner_tol;
        o.max_iterations = config.inner_max_iter;
        r = lbfgs_minimize([&](const Eigen::VectorXd& u, Eigen::VectorXd* g) { return lag.value(u, g); }, s.u, o,
                           hook);
        break;
      }
      case InnerSolver::Simplex: {
        SimplexOptions o;
        o.tolerance = config.inner_tol;
        o.max_iterations = config.inner_max_iter;
        o.initial_step = config.simplex_step;
        r = simplex_minimize([&](const Eigen::VectorXd& u) { return lag.value(u, nullptr); }, s.u, o, hook);
        break;
      }
      case InnerSolver::Spsa: {
        SpsaOptions o = config.spsa;
        o.seed = derive_seed(config.spsa.seed, outer);
        r = spsa_minimize([&](const Eigen::VectorXd& u) { return lag.value(u, nullptr); }, s.u, o, hook);
        break;
      }
    }
    if (!std::isfinite(r.value)) throw std::runtime_error("inner solver returned a non-finite Lagrangian");
    s.u = r.x;

    // Outer-level residuals, averaged over repeats for noisy problems.
    Eigen::VectorXd c_sum = Eigen::VectorXd::Zero(m);
    double f_sum = 0.0;
    Eigen::VectorXd c(m);
    for (std::size_t rep = 0; rep < config.residual_repeats; ++rep) {
      ++s.evaluations;
      f_sum += problem.evaluate(s.u, s.lambda, s.mu, c);
      c_sum += c;
    }
    s.c = c_sum / static_cast<double>(config.residual_repeats);
    s.objective = f_sum / static_cast<double>(config.residual_repeats);
    s.outer_iterations = outer;
    const double sum_c2 = s.c.squaredNorm();
    s.outer.push_back({outer, s.objective, sum_c2, s.mu.maxCoeff()});

    s.lambda += (s.mu.array() * s.c.array()).matrix();

    const bool objective_settled = std::isnan(prev_objective) || std::abs(s.objective - prev_objective) <= config.objective_tol;
    if (sum_c2 <= config.constraint_tol && objective_settled) {
      s.converged = true;
      break;
    }
    if (!std::isnan(prev_sum_c2) && sum_c2 > config.constraint_tol) {
      stalls = sum_c2 > (1.0 - config.stall_fraction) * prev_sum_c2 ? stalls + 1 : 0;
      if (stalls >= 2) {
        s.infeasible = true;
        break;
      }
    }
    if (config.conditional_penalty && prev_c.size() == m) {
      for (Index k = 0; k < m; ++k)
        if (std::abs(s.c[k]) > 0.25 * std::abs(prev_c[k])) s.mu[k] *= config.beta;
    } else {
      s.mu *= config.beta;
    }
    prev_objective = s.objective;
    prev_sum_c2 = sum_c2;
    prev_c = s.c;
  }
  return s;
}

}  // namespace qrdmft
