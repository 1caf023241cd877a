#include "qrdmft/optimizers.hpp"

#include <limits>
#include <random>
#include <stdexcept>

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>
#include <glog/logging.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

namespace qrdmft {

namespace {

using Index = Eigen::Index;

class CeresFunction : public ceres::FirstOrderFunction {
 public:
  CeresFunction(const SmoothObjective& f, Index n, std::size_t& evaluations)
      : f_(f), n_(n), evaluations_(evaluations) {}

  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    const Eigen::Map<const Eigen::VectorXd> x(parameters, n_);
    ++evaluations_;
    if (gradient) {
      Eigen::VectorXd g(n_);
      *cost = f_(x, &g);
      Eigen::Map<Eigen::VectorXd>(gradient, n_) = g;
    } else {
      *cost = f_(x, nullptr);
    }
    return std::isfinite(*cost);
  }
  int NumParameters() const override { return static_cast<int>(n_); }

 private:
  const SmoothObjective& f_;
  Index n_;
  std::size_t& evaluations_;
};

class HookCallback : public ceres::IterationCallback {
 public:
  HookCallback(const IterationHook& hook, const double* params, Index n) : hook_(hook), params_(params), n_(n) {}
  ceres::CallbackReturnType operator()(const ceres::IterationSummary& s) override {
    if (hook_ && s.iteration > 0 && s.step_is_successful) {
      hook_(static_cast<std::size_t>(s.iteration), Eigen::Map<const Eigen::VectorXd>(params_, n_), s.cost);
    }
    return ceres::SOLVER_CONTINUE;
  }

 private:
  const IterationHook& hook_;
  const double* params_;
  Index n_;
};

struct GslContext {
  const Objective* f;
  std::size_t evaluations = 0;
};

double gsl_trampoline(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<GslContext*>(params);
  Eigen::VectorXd x(static_cast<Index>(v->size));
  for (std::size_t i = 0; i < v->size; ++i) x[static_cast<Index>(i)] = gsl_vector_get(v, i);
  ++ctx->evaluations;
  const double y = (*ctx->f)(x);
  return std::isfinite(y) ? y : std::numeric_limits<double>::max();
}

}  // namespace

MinimizeResult lbfgs_minimize(const SmoothObjective& f, const Eigen::VectorXd& x0, const LbfgsOptions& options,
                              const IterationHook& hook) {
  MinimizeResult r;
  r.x = x0;
  if (x0.size() == 0) {
    r.value = f(x0, nullptr);
    r.evaluations = 1;
    r.converged = true;
    return r;
  }
  // Line-search fallbacks are reported as glog warnings on every iteration.
  static const bool quiet = [] {
    FLAGS_minloglevel = google::GLOG_ERROR;
    return true;
  }();
  (void)quiet;
  ceres::GradientProblem problem(new CeresFunction(f, x0.size(), r.evaluations));
  ceres::GradientProblemSolver::Options opts;
  opts.line_search_direction_type = ceres::LBFGS;
  opts.max_num_iterations = static_cast<int>(options.max_iterations);
  opts.gradient_tolerance = options.gradient_tolerance;
  opts.function_tolerance = options.function_tolerance;
  opts.parameter_tolerance = options.parameter_tolerance;
  opts.logging_type = ceres::SILENT;
  HookCallback cb(hook, r.x.data(), x0.size());
  if (hook) {
    opts.update_state_every_iteration = true;
    opts.callbacks.push_back(&cb);
  }
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(opts, problem, r.x.data(), &summary);
  r.value = summary.final_cost;
  r.iterations = summary.iterations.empty() ? 0 : static_cast<std::size_t>(summary.iterations.back().iteration);
  r.converged = summary.termination_type == ceres::CONVERGENCE;
  return r;
}

MinimizeResult simplex_minimize(const Objective& f, const Eigen::VectorXd& x0, const SimplexOptions& options,
                                const IterationHook& hook) {
  MinimizeResult r;
  const std::size_t n = static_cast<std::size_t>(x0.size());
  GslContext ctx{&f};
  if (n == 0) {
    r.x = x0;
    r.value = f(x0);
    r.evaluations = 1;
    r.converged = true;
    return r;
  }
  gsl_set_error_handler_off();
  gsl_multimin_function fn{&gsl_trampoline, n, &ctx};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* step = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x, i, x0[static_cast<Index>(i)]);
  gsl_vector_set_all(step, options.initial_step);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, step);
  Eigen::VectorXd cur(static_cast<Index>(n));
  std::size_t iter = 0;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && iter < options.max_iterations) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), options.tolerance);
    if (hook) {
      for (std::size_t i = 0; i < n; ++i) cur[static_cast<Index>(i)] = gsl_vector_get(s->x, i);
      hook(iter, cur, s->fval);
    }
  }
  r.x.resize(static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i) r.x[static_cast<Index>(i)] = gsl_vector_get(s->x, i);
  r.value = s->fval;
  r.evaluations = ctx.evaluations;
  r.iterations = iter;
  r.converged = status == GSL_SUCCESS;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return r;
}

MinimizeResult spsa_minimize(const Objective& f, const Eigen::VectorXd& x0, const SpsaOptions& options,
                             const IterationHook& hook) {
  std::mt19937_64 rng(options.seed);
  std::bernoulli_distribution coin(0.5);
  const Index n = x0.size();
  MinimizeResult r;
  const double f0 = f(x0);
  r.evaluations = 1;
  Eigen::VectorXd x = x0;
  Eigen::VectorXd best_x = x0;
  double best_score = std::numeric_limits<double>::infinity();
  Eigen::VectorXd delta(n);
  for (std::size_t k = 0; k < options.iterations; ++k) {
    const double ak = options.a / std::pow(static_cast<double>(k) + 1.0 + options.A, options.alpha);
    const double ck = options.c / std::pow(static_cast<double>(k) + 1.0, options.gamma);
    for (Index i = 0; i < n; ++i) delta[i] = coin(rng) ? 1.0 : -1.0;
    const double fp = f(x + ck * delta);
    const double fm = f(x - ck * delta);
    r.evaluations += 2;
    const double score = 0.5 * (fp + fm);
    if (score < best_score) {
      best_score = score;
      best_x = x;
    }
    // Rademacher perturbations are their own inverses.
    x -= ak * (fp - fm) / (2.0 * ck) * delta;
    if (hook) hook(k + 1, x, score);
  }
  r.iterations = options.iterations;
  r.x = best_x;
  r.value = f(best_x);
  ++r.evaluations;
  if (f0 < r.value) {
    r.x = x0;
    r.value = f0;
  }
  r.converged = true;
  return r;
}

}  // namespace qrdmft
