#include "qrdmft/rdmf.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "qrdmft/constraints.hpp"
#include "qrdmft/errors.hpp"
#include "qrdmft/hubbard.hpp"
#include "qrdmft/optimizers.hpp"
#include "qrdmft/statevector.hpp"

namespace qrdmft {

namespace {

using Index = Eigen::Index;
constexpr double kPi = std::numbers::pi;

// Expectations of a fixed list of Pauli words determine <W> and rho(1):
// W = w0 + sum_k w_k e_k and rho = rho0 + sum_k e_k A_k.
struct WordModel {
  std::vector<PauliTerm> words;
  Eigen::VectorXd w;
  double w0 = 0.0;
  Eigen::MatrixXcd rho0;
  std::vector<Eigen::MatrixXcd> a;

  WordModel(std::size_t n, const InteractionSpec& interaction, EncodingScheme scheme) {
    rho0 = Eigen::MatrixXcd::Zero(static_cast<Index>(n), static_cast<Index>(n));
    std::vector<std::pair<PauliTerm, Complex>> w_terms;
    if (!interaction.empty()) {
      const PauliSum obs = interaction_observable(interaction, scheme);
      for (const auto& t : obs.terms()) w_terms.emplace_back(t, t.coeff());
    }
    // (word, row, col, weight) with rho(row, col) += weight * e_word.
    struct Entry {
      PauliTerm word;
      Index row, col;
      Complex weight;
    };
    std::vector<Entry> entries;
    for (std::size_t al = 0; al < n; ++al)
      for (std::size_t be = al; be < n; ++be) {
        const Rho1Observables obs = rho1_observables(al, be, scheme, n);
        const auto r = static_cast<Index>(be);
        const auto c = static_cast<Index>(al);
        const double scale = al == be ? 1.0 : 0.5;
        for (const auto& t : obs.real_part.terms()) entries.push_back({t, r, c, scale * t.coeff().real()});
        for (const auto& t : obs.imag_part.terms()) entries.push_back({t, r, c, Complex(0, -0.5 * t.coeff().real())});
      }
    auto index_of = [&](const PauliTerm& t) {
      for (std::size_t k = 0; k < words.size(); ++k)
        if (words[k].same_word(t)) return k;
      words.push_back(t.with_coeff(1.0));
      return words.size() - 1;
    };
    std::vector<double> wc;
    for (const auto& [t, c] : w_terms) {
      if (t.is_identity()) {
        w0 += c.real();
        continue;
      }
      const std::size_t k = index_of(t);
      wc.resize(words.size(), 0.0);
      wc[k] += c.real();
    }
    for (const auto& e : entries) {
      auto add = [&](Eigen::MatrixXcd& m) {
        m(e.row, e.col) += e.weight;
        if (e.row != e.col) m(e.col, e.row) += std::conj(e.weight);
      };
      if (e.word.is_identity()) {
        add(rho0);
        continue;
      }
      const std::size_t k = index_of(e.word);
      while (a.size() < words.size()) a.push_back(Eigen::MatrixXcd::Zero(static_cast<Index>(n), static_cast<Index>(n)));
      add(a[k]);
    }
    while (a.size() < words.size()) a.push_back(Eigen::MatrixXcd::Zero(static_cast<Index>(n), static_cast<Index>(n)));
    wc.resize(words.size(), 0.0);
    w = Eigen::Map<Eigen::VectorXd>(wc.data(), static_cast<Index>(wc.size()));
  }

  double energy(const Eigen::VectorXd& e) const { return w0 + w.dot(e); }

  Eigen::MatrixXcd rho(const Eigen::VectorXd& e) const {
    Eigen::MatrixXcd r = rho0;
    for (std::size_t k = 0; k < a.size(); ++k) r += e[static_cast<Index>(k)] * a[k];
    return r;
  }

  Eigen::VectorXd exact(const StateVector& s) const {
    Eigen::VectorXd e(static_cast<Index>(words.size()));
    for (std::size_t k = 0; k < words.size(); ++k) e[static_cast<Index>(k)] = expectation(s, words[k]).real();
    return e;
  }
};

std::vector<GateKind> parameter_kinds(const AnsatzLayout& layout) {
  std::vector<GateKind> kinds;
  for (std::size_t layer = 0; layer <= layout.depth; ++layer) {
    kinds.insert(kinds.end(), layout.rotation_parameters_per_layer(), GateKind::RZ);
    if (layer == layout.depth) break;
    for (const auto& e : layout.entangler)
      if (is_parametrized(e.kind)) kinds.push_back(e.kind);
  }
  return kinds;
}

bool is_permutation(const std::vector<std::size_t>& p, std::size_t n) {
  if (p.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (auto q : p) {
    if (q >= n || seen[q]) return false;
    seen[q] = true;
  }
  return true;
}

Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& rho) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()));
  const Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

std::string_view to_string(MultiplierInit init) {
  switch (init) {
    case MultiplierInit::Zero: return "zero";
    case MultiplierInit::Mueller: return "mueller";
  }
  return "?";
}

MultiplierInit parse_multiplier_init(std::string_view text) {
  if (text == "zero") return MultiplierInit::Zero;
  if (text == "mueller" || text == "muller") return MultiplierInit::Mueller;
  throw std::invalid_argument("unknown multiplier initialization '" + std::string(text) + "'");
}

std::string_view to_string(FunctionalBackend backend) {
  switch (backend) {
    case FunctionalBackend::Exact: return "exact";
    case FunctionalBackend::Hybrid: return "hybrid";
  }
  return "?";
}

FunctionalBackend parse_functional_backend(std::string_view text) {
  if (text == "exact") return FunctionalBackend::Exact;
  if (text == "hybrid") return FunctionalBackend::Hybrid;
  throw std::invalid_argument("unknown functional backend '" + std::string(text) + "'");
}

AugLagConfig RdmfConfig::default_auglag() {
  AugLagConfig c;
  c.mu0 = 10.0;
  c.beta = 1.5;
  c.max_outer = 10;
  c.inner = InnerSolver::Lbfgs;
  c.inner_tol = 1e-8;
  c.constraint_tol = 1e-8;
  c.objective_tol = 1e-6;
  return c;
}

void RdmfConfig::validate(std::size_t n_modes) const {
  qrdmft::validate(auglag);
  if (!qubit_of_mode.empty() && !is_permutation(qubit_of_mode, n_modes))
    throw std::invalid_argument("qubit_of_mode is not a permutation of the modes");
  std::vector<bool> seen(n_modes, false);
  for (auto c : interacting) {
    if (c >= n_modes || seen[c]) throw std::invalid_argument("interacting modes must be distinct and in range");
    seen[c] = true;
  }
  if (shots == 0 && noise && !noise->noiseless())
    throw std::invalid_argument("a noise model needs a finite shot count");
  if (shots > 0 && auglag.inner == InnerSolver::Lbfgs)
    throw std::invalid_argument("sampled expectations need the simplex or SPSA inner solver");
  if (noise) noise->validate();
}

std::vector<std::size_t> EnvironmentProblem::environment() const {
  std::vector<std::size_t> env;
  for (std::size_t m = 0; m < static_cast<std::size_t>(measured.rows()); ++m)
    if (std::find(interacting.begin(), interacting.end(), m) == interacting.end()) env.push_back(m);
  return env;
}

std::size_t EnvironmentProblem::parameter_count() const {
  const std::size_t e = environment().size();
  return e * e;
}

Eigen::MatrixXcd EnvironmentProblem::generator(const Eigen::VectorXd& h) const {
  const auto e = static_cast<Index>(environment().size());
  if (h.size() != e * e) throw std::invalid_argument("generator parameter count mismatch");
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(e, e);
  Index k = 0;
  for (Index i = 0; i < e; ++i) g(i, i) = h[k++];
  for (Index i = 0; i < e; ++i)
    for (Index j = i + 1; j < e; ++j) {
      g(i, j) = Complex(h[k], h[k + 1]);
      g(j, i) = std::conj(g(i, j));
      k += 2;
    }
  return g;
}

Eigen::MatrixXcd EnvironmentProblem::unitary(const Eigen::VectorXd& h) const {
  const auto env = environment();
  const auto n = measured.rows();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
  if (env.empty()) return v;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(generator(h));
  const Eigen::VectorXcd phase = (Complex(0, 1) * es.eigenvalues().cast<Complex>()).array().exp();
  const Eigen::MatrixXcd ee = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  for (std::size_t i = 0; i < env.size(); ++i)
    for (std::size_t j = 0; j < env.size(); ++j)
      v(static_cast<Index>(env[i]), static_cast<Index>(env[j])) = ee(static_cast<Index>(i), static_cast<Index>(j));
  return v;
}

double EnvironmentProblem::value(const Eigen::VectorXd& h, Eigen::VectorXd* grad) const {
  const auto n = static_cast<std::size_t>(measured.rows());
  const auto list = rho_constraints(n);
  const auto m = static_cast<Index>(list.size());
  const Eigen::VectorXd lam = lambda.size() ? lambda : Eigen::VectorXd::Zero(m);
  const Eigen::VectorXd pen = mu.size() ? mu : Eigen::VectorXd::Ones(m);
  if (lam.size() != m || pen.size() != m) throw std::invalid_argument("multiplier or penalty size mismatch");
  const auto env = environment();
  const auto ne = static_cast<Index>(env.size());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(static_cast<Index>(n), static_cast<Index>(n));
  if (ne > 0) {
    es.compute(generator(h));
    const Eigen::VectorXcd phase = (Complex(0, 1) * es.eigenvalues().cast<Complex>()).array().exp();
    const Eigen::MatrixXcd ee = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
    for (Index i = 0; i < ne; ++i)
      for (Index j = 0; j < ne; ++j) v(static_cast<Index>(env[i]), static_cast<Index>(env[j])) = ee(i, j);
  }
  const Eigen::VectorXd c = rho_residuals(list, v * measured * v.adjoint(), target);
  const double out = lam.dot(c) + 0.5 * (pen.array() * c.array().square()).sum();
  if (!grad) return out;

  grad->setZero(ne * ne);
  if (ne == 0) return out;
  // d penalty = 2 Re Tr(X dV) with X = rho V^dagger G; the derivative of
  // exp(iH) follows from the divided differences of exp(i h) in the
  // eigenbasis of H.
  const Eigen::MatrixXcd g = weights_to_matrix(list, lam + (pen.array() * c.array()).matrix(), n);
  const Eigen::MatrixXcd x = measured * v.adjoint() * g;
  Eigen::MatrixXcd x_ee(ne, ne);
  for (Index i = 0; i < ne; ++i)
    for (Index j = 0; j < ne; ++j) x_ee(i, j) = x(static_cast<Index>(env[i]), static_cast<Index>(env[j]));
  const Eigen::MatrixXcd& q = es.eigenvectors();
  const Eigen::VectorXd& ev = es.eigenvalues();
  const Eigen::MatrixXcd y = q.adjoint() * x_ee * q;
  Eigen::MatrixXcd z(ne, ne);
  for (Index i = 0; i < ne; ++i)
    for (Index j = 0; j < ne; ++j) {
      const double d = ev[i] - ev[j];
      const Complex f = std::abs(d) < 1e-10 ? Complex(0, 1) * std::exp(Complex(0, ev[i]))
                                             : (std::exp(Complex(0, ev[i])) - std::exp(Complex(0, ev[j]))) / d;
      z(i, j) = y(j, i) * f;
    }
  const Eigen::MatrixXcd gamma = q * z.transpose() * q.adjoint();
  const Eigen::MatrixXcd gh = 0.5 * (gamma + gamma.adjoint());
  Index k = 0;
  for (Index i = 0; i < ne; ++i) (*grad)[k++] = 2.0 * gh(i, i).real();
  for (Index i = 0; i < ne; ++i)
    for (Index j = i + 1; j < ne; ++j) {
      (*grad)[k++] = 4.0 * gh(j, i).real();
      (*grad)[k++] = -4.0 * gh(j, i).imag();
    }
  return out;
}

EnvironmentFit optimize_environment_unitary(const EnvironmentProblem& problem, const Eigen::VectorXd& h_start) {
  const auto p = static_cast<Index>(problem.parameter_count());
  LbfgsOptions lo;
  lo.gradient_tolerance = 1e-9;
  lo.max_iterations = 2000;
  auto f = [&](const Eigen::VectorXd& h, Eigen::VectorXd* g) { return problem.value(h, g); };
  EnvironmentFit best;
  best.h = Eigen::VectorXd::Zero(p);
  best.value = problem.value(best.h);
  std::vector<Eigen::VectorXd> starts{Eigen::VectorXd::Zero(p)};
  if (h_start.size() == p) starts.push_back(h_start);
  if (p > 0) {
    for (const auto& h0 : starts) {
      const MinimizeResult r = lbfgs_minimize(f, h0, lo);
      if (r.value < best.value) {
        best.value = r.value;
        best.h = r.x;
      }
    }
  }
  best.unitary = problem.unitary(best.h);
  return best;
}

double muller_energy(const Eigen::MatrixXcd& rho, const InteractionSpec& w) {
  const Eigen::MatrixXcd s = hermitian_sqrt(rho);
  Complex e{0, 0};
  for (const auto& t : w.terms) {
    const auto a = static_cast<Index>(t.alpha), b = static_cast<Index>(t.beta);
    const auto d = static_cast<Index>(t.delta), g = static_cast<Index>(t.gamma);
    e += t.u * (rho(d, a) * rho(g, b) - s(g, a) * s(d, b));
  }
  return e.real();
}

Eigen::MatrixXcd muller_multipliers(const Eigen::MatrixXcd& target, const InteractionSpec& w, double step) {
  try {
    validate_one_particle_dm(target);
  } catch (const std::invalid_argument& e) {
    throw RepresentabilityError(std::string("target is not representable: ") + e.what());
  }
  const auto n = static_cast<std::size_t>(target.rows());
  const auto list = rho_constraints(n);
  Eigen::VectorXd lambda(static_cast<Index>(list.size()));
  for (std::size_t k = 0; k < list.size(); ++k) {
    const Eigen::MatrixXcd e = constraint_direction(list[k], n);
    lambda[static_cast<Index>(k)] =
        -(muller_energy(target + step * e, w) - muller_energy(target - step * e, w)) / (2.0 * step);
  }
  return weights_to_matrix(list, lambda, n);
}

Eigen::VectorXd parameter_shift_gradient(const AnsatzLayout& layout, const Eigen::VectorXd& u,
                                         const PauliSum& observable) {
  const auto kinds = parameter_kinds(layout);
  if (static_cast<std::size_t>(u.size()) != kinds.size()) throw std::invalid_argument("parameter count mismatch");
  if (observable.n_qubits() != layout.n_qubits) throw std::invalid_argument("observable acts on the wrong qubit count");
  const double cp = (std::numbers::sqrt2 + 1.0) / (4.0 * std::numbers::sqrt2);
  const double cm = (std::numbers::sqrt2 - 1.0) / (4.0 * std::numbers::sqrt2);
  Eigen::VectorXd grad(u.size());
  for (Index j = 0; j < u.size(); ++j) {
    auto shifted = [&](double s) {
      Eigen::VectorXd x = u;
      x[j] += s;
      return expectation(apply(build_hets(layout, x), StateVector(layout.n_qubits)), observable);
    };
    if (kinds[static_cast<std::size_t>(j)] == GateKind::RZ) {
      grad[j] = 0.5 * (shifted(kPi / 2) - shifted(-kPi / 2));
    } else {
      grad[j] = cp * (shifted(kPi / 2) - shifted(-kPi / 2)) - cm * (shifted(3 * kPi / 2) - shifted(-3 * kPi / 2));
    }
  }
  return grad;
}

RdmfResult evaluate_rdmf(const Eigen::MatrixXcd& target, const InteractionSpec& w_in, const AnsatzLayout& layout,
                         const RdmfConfig& config) {
  try {
    validate_one_particle_dm(target);
  } catch (const std::invalid_argument& e) {
    throw RepresentabilityError(std::string("target is not representable: ") + e.what());
  }
  const auto n = static_cast<std::size_t>(target.rows());
  InteractionSpec w = w_in;
  if (w.terms.empty()) w.n_modes = n;
  if (w.n_modes != n) throw std::invalid_argument("interaction and density matrix differ in mode count");
  w.validate();
  layout.validate();
  if (layout.n_qubits != n)
    throw std::invalid_argument("ansatz has " + std::to_string(layout.n_qubits) + " qubits for " +
                                std::to_string(n) + " modes");
  config.validate(n);
  if (config.environment_unitary) {
    for (const auto& t : w.terms)
      for (auto idx : {t.alpha, t.beta, t.gamma, t.delta})
        if (std::find(config.interacting.begin(), config.interacting.end(), idx) == config.interacting.end())
          throw std::invalid_argument("the environment unitary needs every interaction index among the interacting modes");
  }

  // Register order: qubit q carries mode mode_of_qubit[q].
  std::vector<std::size_t> qubit_of_mode = config.qubit_of_mode;
  if (qubit_of_mode.empty())
    for (std::size_t m = 0; m < n; ++m) qubit_of_mode.push_back(m);
  std::vector<std::size_t> mode_of_qubit(n);
  for (std::size_t m = 0; m < n; ++m) mode_of_qubit[qubit_of_mode[m]] = m;
  const Eigen::MatrixXcd target_q = permute_modes(target, mode_of_qubit);
  const InteractionSpec w_q = permute_modes(w, mode_of_qubit);
  std::vector<std::size_t> interacting_q;
  for (auto c : config.interacting) interacting_q.push_back(qubit_of_mode[c]);

  const WordModel model(n, w_q, config.scheme);
  const auto list = rho_constraints(n);
  const auto n_params = static_cast<Index>(layout.parameter_count());

  std::optional<MeasurementPlan> plan;
  if (config.shots > 0) plan = plan_measurements(model.words, config.plan);
  std::uint64_t draws = 0;
  auto measure = [&](const Eigen::VectorXd& u) {
    const Circuit c = build_hets(layout, u);
    if (!plan) return model.exact(apply(c, StateVector(n)));
    const auto counts = run_plan(*plan, c, config.shots, config.noise, derive_seed(config.seed, draws++));
    const std::vector<double> est = estimate(*plan, counts);
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(est.data(), static_cast<Index>(est.size())));
  };

  EnvironmentProblem env;
  env.target = target_q;
  env.interacting = interacting_q;
  Eigen::VectorXd h_prev;
  Eigen::MatrixXcd v_last = Eigen::MatrixXcd::Identity(static_cast<Index>(n), static_cast<Index>(n));
  Eigen::MatrixXcd rho_last;

  ConstrainedProblem problem;
  problem.n_params = layout.parameter_count();
  problem.n_constraints = list.size();
  problem.evaluate = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu,
                         Eigen::VectorXd& c) {
    const Eigen::VectorXd e = measure(u);
    const Eigen::MatrixXcd rho = model.rho(e);
    if (config.environment_unitary) {
      env.measured = rho;
      env.lambda = lambda;
      env.mu = mu;
      const EnvironmentFit fit = optimize_environment_unitary(env, h_prev);
      h_prev = fit.h;
      v_last = fit.unitary;
    }
    rho_last = v_last * rho * v_last.adjoint();
    c = rho_residuals(list, rho_last, target_q);
    return model.energy(e);
  };
  if (config.shots == 0) {
    problem.gradient = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& weights) {
      // Observable whose expectation is <W> + sum weights_k c_k up to a constant.
      const Eigen::MatrixXcd g = v_last.adjoint() * weights_to_matrix(list, weights, n) * v_last;
      Eigen::VectorXd kappa = model.w;
      for (std::size_t k = 0; k < model.a.size(); ++k) kappa[static_cast<Index>(k)] += (g * model.a[k]).trace().real();
      PauliSum obs(n);
      for (std::size_t k = 0; k < model.words.size(); ++k) obs.add(model.words[k].with_coeff(kappa[static_cast<Index>(k)]));
      return parameter_shift_gradient(layout, u, obs);
    };
  }

  if (config.u0.size() && config.u0.size() != n_params) throw std::invalid_argument("u0 has the wrong size");
  auto start_point = [&](std::size_t k) {
    if (k == 0 && config.u0.size()) return Eigen::VectorXd(config.u0);
    std::mt19937_64 rng(k == 0 ? config.seed : derive_seed(config.seed, k));
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    Eigen::VectorXd u(n_params);
    for (Index j = 0; j < n_params; ++j) u[j] = angle(rng);
    return u;
  };

  Eigen::VectorXd lambda0;
  if (config.multiplier_init == MultiplierInit::Mueller)
    lambda0 = matrix_to_weights(list, permute_modes(muller_multipliers(target, w), mode_of_qubit));

  // Converged runs beat unconverged ones; then lower F, or lower sum c^2
  // among unconverged runs.
  auto better = [](const RdmfResult& a, const RdmfResult& b) {
    if (a.converged != b.converged) return a.converged;
    return a.converged ? a.F < b.F : a.constraint_violation < b.constraint_violation;
  };
  RdmfResult best;
  for (std::size_t k = 0; k < std::max<std::size_t>(1, config.starts); ++k) {
    h_prev.resize(0);
    v_last.setIdentity();
    AugLagConfig al = config.auglag;
    al.spsa.seed = derive_seed(config.seed, 0x5b5a + k);
    const AugLagState s = auglag_minimize(problem, start_point(k), lambda0, al);

    // Refresh the environment and residuals at the final point.
    Eigen::VectorXd c(static_cast<Index>(list.size()));
    problem.evaluate(s.u, s.lambda, s.mu, c);

    RdmfResult r;
    r.F = s.objective;
    r.u = s.u;
    r.multipliers = permute_modes(weights_to_matrix(list, s.lambda, n), qubit_of_mode);
    r.environment = permute_modes(v_last, qubit_of_mode);
    r.rho = permute_modes(rho_last, qubit_of_mode);
    r.constraint_violation = s.sum_c2();
    r.outer_iterations = s.outer_iterations;
    r.evaluations = s.evaluations;
    r.converged = s.converged;
    r.infeasible = s.infeasible;
    r.trace = s.trace;
    r.outer = s.outer;
    r.start = k;
    if (k == 0 || better(r, best)) best = std::move(r);
  }
  return best;
}

EnergyBreakdown total_energy(const Eigen::MatrixXcd& h, const LocalDecomposition& decomposition,
                             const Eigen::MatrixXcd& rho, const EnergyConfig& config) {
  validate_one_particle_dm(rho);
  if (h.rows() != rho.rows() || h.cols() != rho.cols()) throw std::invalid_argument("h and rho differ in size");
  if (!decomposition.non_local.empty())
    throw std::invalid_argument("total_energy covers local terms only; the non-local part is not empty");
  auto run = [&](std::size_t i) -> LocalContribution {
    const LocalTerm& term = decomposition.locals[i];
    const AcaResult aca = aca_reduce(rho, term.support, config.aca_order);
    const InteractionSpec wl = localize_interaction(term.w, term.support, aca.kept);
    LocalContribution out;
    out.kept = aca.kept;
    if (config.backend == FunctionalBackend::Exact) {
      const OracleResult o = exact_rdmf(aca.rho_aca, wl, config.oracle);
      out.F = o.F;
      out.method = o.method;
      out.constraint_violation = o.residual * o.residual;
    } else {
      RdmfConfig rc = config.rdmf;
      rc.interacting.clear();
      for (std::size_t k = 0; k < term.support.size(); ++k) rc.interacting.push_back(k);
      rc.seed = derive_seed(config.rdmf.seed, i);
      const RdmfResult r = evaluate_rdmf(aca.rho_aca, wl, config.layout, rc);
      out.F = r.F;
      out.method = "hybrid";
      out.constraint_violation = r.constraint_violation;
    }
    return out;
  };
  auto guarded = [&](std::size_t i) {
    try {
      return run(i);
    } catch (const std::exception& e) {
      throw std::runtime_error("local term " + std::to_string(i) + ": " + e.what());
    }
  };

  EnergyBreakdown out;
  out.one_body = (rho * h).trace().real();
  out.locals.resize(decomposition.locals.size());
  const std::size_t batch = std::max<std::size_t>(1, config.jobs);
  for (std::size_t first = 0; first < out.locals.size(); first += batch) {
    std::vector<std::future<LocalContribution>> tasks;
    const std::size_t last = std::min(out.locals.size(), first + batch);
    for (std::size_t i = first; i < last; ++i) tasks.push_back(std::async(std::launch::async, guarded, i));
    for (std::size_t i = first; i < last; ++i) out.locals[i] = tasks[i - first].get();
  }
  out.energy = out.one_body;
  for (const auto& l : out.locals) out.energy += l.F;
  return out;
}

}  // namespace qrdmft
