#include "qrdmft/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "qrdmft/io.hpp"
#include "qrdmft/auglag.hpp"
#include "qrdmft/constraints.hpp"
#include "qrdmft/eigensolver.hpp"
#include "qrdmft/errors.hpp"
#include "qrdmft/hubbard.hpp"
#include "qrdmft/optimizers.hpp"
#include "qrdmft/sampling.hpp"

namespace qrdmft {

namespace {

using Index = Eigen::Index;
using json = nlohmann::json;

constexpr double kIntegralTol = 1e-8;
constexpr double kCertifyGap = 1e-8;
constexpr double kIdempotentTol = 1e-10;
constexpr double kAcceptResidual = 1e-7;

struct Sector {
  std::vector<std::size_t> counts;
  OneBodyTable table;
  SparseMatrixXcd wm;
  Sector(std::vector<std::size_t> k, const FockBasis& basis, const InteractionSpec& w)
      : counts(std::move(k)), table(basis), wm(build_operator(basis, Eigen::MatrixXcd(), w)) {}
  const FockBasis& basis() const { return table.basis(); }
};

struct Level {
  double energy = 0.0;
  std::size_t sector = 0;
  Eigen::VectorXcd state;
};

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// The `count` lowest levels of w + one_body(m) in every sector, merged and
// sorted by energy.
std::vector<Level> low_levels(const std::vector<Sector>& sectors, const Eigen::MatrixXcd& m, std::size_t count,
                              std::vector<Eigen::VectorXcd>* warm) {
  std::vector<Level> out;
  for (std::size_t s = 0; s < sectors.size(); ++s) {
    EigenOptions opts;
    if (warm && (*warm)[s].size()) opts.start = (*warm)[s];
    const Eigenpairs ep = lowest_eigenpairs(sectors[s].wm + sectors[s].table.matrix(m), count, opts);
    if (warm) (*warm)[s] = ep.vectors.rowwise().sum();
    for (Index i = 0; i < ep.values.size(); ++i) out.push_back({ep.values[i], s, ep.vectors.col(i)});
  }
  std::sort(out.begin(), out.end(), [](const Level& a, const Level& b) { return a.energy < b.energy; });
  return out;
}

struct SpanState {
  std::vector<Eigen::VectorXcd> parts;  // normalized jointly, one per sector
  double F = 0.0;
  double residual = std::numeric_limits<double>::infinity();
};

// Pure state in the span of `levels` whose density matrix is closest to the
// target in Frobenius norm. Transitions between different sectors are taken
// from `full` (the whole Fock space) when there is more than one sector.
SpanState span_state(const std::vector<Sector>& sectors, const OneBodyTable* full, const std::vector<Level>& levels,
                     const Eigen::VectorXd& weights, const Eigen::MatrixXcd& target, std::uint64_t seed) {
  const auto m = static_cast<Index>(levels.size());
  const auto n = target.rows();
  std::vector<Eigen::VectorXcd> embedded;
  if (full)
    for (const auto& l : levels) embedded.push_back(to_full_space(sectors[l.sector].basis(), l.state));
  std::vector<Eigen::MatrixXcd> r(static_cast<std::size_t>(m * m));
  Eigen::MatrixXcd wmat = Eigen::MatrixXcd::Zero(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      const Level& li = levels[static_cast<std::size_t>(i)];
      const Level& lj = levels[static_cast<std::size_t>(j)];
      auto& rij = r[static_cast<std::size_t>(i * m + j)];
      if (full) {
        rij = full->transition(embedded[static_cast<std::size_t>(i)], embedded[static_cast<std::size_t>(j)]);
      } else {
        rij = sectors[li.sector].table.transition(li.state, lj.state);
      }
      if (li.sector == lj.sector) wmat(i, j) = li.state.dot(sectors[li.sector].wm * lj.state);
    }
  auto rho_of = [&](const Eigen::VectorXcd& y) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) rho += std::conj(y[i]) * y[j] * r[static_cast<std::size_t>(i * m + j)];
    return Eigen::MatrixXcd(rho / y.squaredNorm());
  };
  auto objective = [&](const Eigen::VectorXd& u, Eigen::VectorXd* grad) {
    const Eigen::VectorXcd y = u.head(m).cast<Complex>() + Complex(0, 1) * u.tail(m).cast<Complex>();
    const Eigen::MatrixXcd d = rho_of(y) - target;
    if (grad) {
      Eigen::MatrixXcd a(m, m);
      for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) a(i, j) = (d * r[static_cast<std::size_t>(i * m + j)]).trace();
      const Complex shift = (d * (d + target)).trace();
      const Eigen::VectorXcd g = (4.0 / y.squaredNorm()) * (a * y - shift * y);
      grad->resize(2 * m);
      *grad << g.real(), g.imag();
    }
    return d.squaredNorm();
  };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd best_u;
  double best = std::numeric_limits<double>::infinity();
  LbfgsOptions lo;
  lo.gradient_tolerance = 1e-14;
  lo.max_iterations = 2000;
  for (int start = 0; start < 6; ++start) {
    Eigen::VectorXd u0 = Eigen::VectorXd::Zero(2 * m);
    for (Index i = 0; i < 2 * m; ++i) u0[i] = normal(rng);
    if (start == 0) u0 << weights.cwiseMax(0.0).cwiseSqrt(), Eigen::VectorXd::Zero(m);
    const MinimizeResult res = lbfgs_minimize(objective, u0, lo);
    if (res.value < best) {
      best = res.value;
      best_u = res.x;
    }
  }
  const Eigen::VectorXcd y = best_u.head(m).cast<Complex>() + Complex(0, 1) * best_u.tail(m).cast<Complex>();
  SpanState out;
  out.parts.assign(sectors.size(), Eigen::VectorXcd());
  const double nrm = y.norm();
  for (Index i = 0; i < m; ++i) {
    const Level& l = levels[static_cast<std::size_t>(i)];
    auto& part = out.parts[l.sector];
    if (part.size() == 0) part = Eigen::VectorXcd::Zero(l.state.size());
    part += (y[i] / nrm) * l.state;
  }
  out.F = y.dot(wmat * y).real() / (nrm * nrm);
  out.residual = max_abs(rho_of(y) - target);
  return out;
}

// <c+_a c+_b c_g c_d> = rho_da rho_gb - rho_ga rho_db for a determinant.
double slater_energy(const Eigen::MatrixXcd& rho, const InteractionSpec& w) {
  Complex e = 0.0;
  for (const auto& t : w.terms) {
    const auto a = static_cast<Index>(t.alpha), b = static_cast<Index>(t.beta);
    const auto g = static_cast<Index>(t.gamma), d = static_cast<Index>(t.delta);
    e += t.u * (rho(d, a) * rho(g, b) - rho(g, a) * rho(d, b));
  }
  return e.real();
}

// Determinant of the orbitals in the columns of `phi`, in the full Fock space.
Eigen::VectorXcd slater_state(const Eigen::MatrixXcd& phi) {
  const auto n = static_cast<std::size_t>(phi.rows());
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(Index{1} << n);
  x[0] = 1.0;
  for (Index k = 0; k < phi.cols(); ++k) {
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(x.size());
    for (Index s = 0; s < x.size(); ++s) {
      if (x[s] == Complex(0.0)) continue;
      for (std::size_t a = 0; a < n; ++a) {
        std::uint64_t t = static_cast<std::uint64_t>(s);
        int sign = 1;
        if (apply_ladder(t, sign, a, true)) y[static_cast<Index>(t)] += phi(static_cast<Index>(a), k) * static_cast<double>(sign) * x[s];
      }
    }
    x = y;
  }
  return x.normalized();
}

std::vector<std::vector<std::size_t>> all_count_combinations(const std::vector<std::vector<std::size_t>>& groups) {
  std::vector<std::vector<std::size_t>> out{{}};
  for (const auto& g : groups) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& partial : out)
      for (std::size_t k = 0; k <= g.size(); ++k) {
        auto c = partial;
        c.push_back(k);
        next.push_back(std::move(c));
      }
    out.swap(next);
  }
  return out;
}

std::vector<std::size_t> group_counts(const Eigen::MatrixXcd& rho, const std::vector<std::vector<std::size_t>>& groups,
                                      bool& integral) {
  integral = true;
  std::vector<std::size_t> counts;
  for (const auto& g : groups) {
    double tr = 0.0;
    for (auto m : g) tr += rho(static_cast<Index>(m), static_cast<Index>(m)).real();
    const double r = std::round(tr);
    if (std::abs(tr - r) > kIntegralTol) integral = false;
    counts.push_back(static_cast<std::size_t>(std::max(0.0, r)));
  }
  return counts;
}

struct ChemicalPotentials {
  Eigen::VectorXd mu;
  /// min over other sectors of their energy above the target, >= 0 when the
  /// target sector holds the global minimum.
  double slack = -std::numeric_limits<double>::infinity();
};

// Chemical potentials mu_g maximizing the lowest energy of the other sectors
// relative to the target sector in E(k) + mu.k. Supports up to two groups.
std::optional<ChemicalPotentials> chemical_potentials(const std::vector<std::vector<std::size_t>>& counts,
                                                   const std::vector<double>& energies,
                                                   const std::vector<std::size_t>& target) {
  const std::size_t g = target.size();
  std::size_t t = counts.size();
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] == target) t = i;
  if (t == counts.size() || g == 0 || g > 2) return std::nullopt;
  std::vector<Eigen::VectorXd> d;
  std::vector<double> e;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i == t) continue;
    Eigen::VectorXd di(static_cast<Index>(g));
    for (std::size_t j = 0; j < g; ++j) di[static_cast<Index>(j)] = static_cast<double>(counts[i][j]) - static_cast<double>(target[j]);
    d.push_back(di);
    e.push_back(energies[i] - energies[t]);
  }
  auto slack = [&](const Eigen::VectorXd& mu) {
    double s = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.size(); ++i) s = std::min(s, e[i] + mu.dot(d[i]));
    return s;
  };
  std::vector<Eigen::VectorXd> candidates{Eigen::VectorXd::Zero(static_cast<Index>(g))};
  if (g == 1) {
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i][0] > 0) lo = std::max(lo, -e[i] / d[i][0]);
      if (d[i][0] < 0) hi = std::min(hi, -e[i] / d[i][0]);
    }
    Eigen::VectorXd mu(1);
    mu[0] = std::isinf(lo) ? (std::isinf(hi) ? 0.0 : hi - 1.0) : (std::isinf(hi) ? lo + 1.0 : 0.5 * (lo + hi));
    candidates.push_back(mu);
  } else {
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = i + 1; j < d.size(); ++j) {
        Eigen::Matrix2d a;
        a << d[i][0], d[i][1], d[j][0], d[j][1];
        if (std::abs(a.determinant()) < 1e-12) continue;
        candidates.push_back(a.inverse() * Eigen::Vector2d(-e[i], -e[j]));
      }
  }
  ChemicalPotentials best;
  for (const auto& mu : candidates) {
    const double s = slack(mu);
    if (s > best.slack) best = {mu, s};
  }
  if (d.empty()) best = {Eigen::VectorXd::Zero(static_cast<Index>(g)), std::numeric_limits<double>::infinity()};
  return best;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string cache_key(const Eigen::MatrixXcd& target, const InteractionSpec& w, const OracleOptions& o) {
  json terms = json::array();
  for (const auto& t : w.terms) terms.push_back({t.alpha, t.beta, t.delta, t.gamma, t.u});
  const json key{{"rho", io::matrix_to_json(target, 0)}, {"w", terms},       {"n", w.n_modes},         {"tol", o.tol},
                 {"restarts", o.restarts},     {"seed", o.seed},   {"max_dim", o.max_dim}, {"dual_iterations", o.dual_iterations}, {"dual_levels", o.dual_levels}, {"version", 3}};
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(key.dump())));
  return buf;
}

struct PrimalOutcome {
  double F = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd x;
  Eigen::VectorXd lambda;
};

class PrimalProblem {
 public:
  PrimalProblem(const Sector& sector, const Eigen::MatrixXcd& target, std::vector<RhoConstraint> list)
      : sector_(sector), target_(target), list_(std::move(list)) {}

  const std::vector<RhoConstraint>& list() const { return list_; }
  std::size_t dim() const { return sector_.basis().dim(); }

  static Eigen::VectorXcd to_complex(const Eigen::VectorXd& u) {
    const Index d = u.size() / 2;
    return u.head(d).cast<Complex>() + Complex(0, 1) * u.tail(d).cast<Complex>();
  }
  static Eigen::VectorXd to_real(const Eigen::VectorXcd& x) {
    Eigen::VectorXd u(2 * x.size());
    u << x.real(), x.imag();
    return u;
  }

  double evaluate(const Eigen::VectorXd& u, Eigen::VectorXd& c) const {
    const Eigen::VectorXcd x = to_complex(u);
    c = rho_residuals(list_, sector_.table.rho(x), target_);
    return x.dot(sector_.wm * x).real() / x.squaredNorm();
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& u, const Eigen::VectorXd& weights) const {
    const Eigen::VectorXcd x = to_complex(u);
    const double nrm = x.squaredNorm();
    const Eigen::MatrixXcd k = weights_to_matrix(list_, weights, static_cast<std::size_t>(target_.rows()));
    const Eigen::VectorXcd gx = sector_.wm * x + sector_.table.apply(k, x);
    const double e = x.dot(gx).real() / nrm;
    return to_real((2.0 / nrm) * (gx - e * x));
  }

  Eigen::MatrixXcd rho(const Eigen::VectorXcd& x) const { return sector_.table.rho(x); }

 private:
  const Sector& sector_;
  const Eigen::MatrixXcd& target_;
  std::vector<RhoConstraint> list_;
};

PrimalOutcome primal_run(const PrimalProblem& prob, const Eigen::VectorXcd& x0, const Eigen::VectorXd& lambda0,
                         const Eigen::MatrixXcd& target, double tol) {
  ConstrainedProblem cp;
  cp.n_params = static_cast<std::size_t>(2 * x0.size());
  cp.n_constraints = prob.list().size();
  cp.evaluate = [&](const Eigen::VectorXd& u, const Eigen::VectorXd&, const Eigen::VectorXd&, Eigen::VectorXd& c) {
    return prob.evaluate(u, c);
  };
  cp.gradient = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& weights) { return prob.gradient(u, weights); };
  AugLagConfig cfg;
  cfg.mu0 = 10.0;
  cfg.beta = 4.0;
  cfg.max_outer = 40;
  cfg.inner_tol = 1e-13;
  cfg.inner_max_iter = 20000;
  cfg.constraint_tol = tol * tol;
  cfg.objective_tol = 1e-12;
  cfg.stall_fraction = 0.0;
  const AugLagState s = auglag_minimize(cp, PrimalProblem::to_real(x0.normalized()), lambda0, cfg);
  PrimalOutcome out;
  out.x = PrimalProblem::to_complex(s.u).normalized();
  out.F = s.objective;
  out.residual = max_abs(prob.rho(out.x) - target);
  out.lambda = s.lambda;
  return out;
}

}  // namespace

std::vector<std::vector<std::size_t>> conserved_groups(const Eigen::MatrixXcd& rho, const InteractionSpec& w) {
  const std::size_t n = static_cast<std::size_t>(rho.rows());
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  if (n < 2) return {all};
  bool ok = true;
  for (std::size_t a = 0; a < n && ok; ++a)
    for (std::size_t b = 0; b < n && ok; ++b)
      if ((a + b) % 2 && std::abs(rho(static_cast<Index>(a), static_cast<Index>(b))) > 1e-12) ok = false;
  for (const auto& t : w.terms) {
    if (t.u == 0.0) continue;
    const std::size_t up_created = (t.alpha % 2 == 0) + (t.beta % 2 == 0);
    const std::size_t up_removed = (t.gamma % 2 == 0) + (t.delta % 2 == 0);
    if (up_created != up_removed) ok = false;
  }
  if (!ok) return {all};
  return spin_groups(n);
}

OracleResult exact_rdmf(const Eigen::MatrixXcd& target, const InteractionSpec& w_in, const OracleOptions& options) {
  try {
    validate_one_particle_dm(target);
  } catch (const std::invalid_argument& e) {
    throw RepresentabilityError(std::string("target is not representable: ") + e.what());
  }
  const std::size_t n = static_cast<std::size_t>(target.rows());
  InteractionSpec w = w_in;
  if (w.terms.empty()) w.n_modes = n;
  if (w.n_modes != n) throw std::invalid_argument("interaction and density matrix differ in mode count");
  w.validate();

  std::filesystem::path cache_file;
  if (!options.cache_dir.empty()) {
    cache_file = std::filesystem::path(options.cache_dir) / (cache_key(target, w, options) + ".json");
    if (std::filesystem::exists(cache_file)) {
      std::ifstream in(cache_file);
      const json j = json::parse(in);
      OracleResult r;
      r.F = j.at("F").get<double>();
      r.multipliers = io::matrix_from_json(j.at("multipliers"));
      r.residual = j.at("residual").get<double>();
      r.lower_bound = j.at("lower_bound").get<double>();
      r.method = j.at("method").get<std::string>();
      r.certified = j.at("certified").get<bool>();
      if (j.contains("state")) r.state = io::matrix_from_json(j.at("state")).col(0);
      r.from_cache = true;
      return r;
    }
  }

  // Idempotent targets belong to exactly one determinant.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> natural(target);
  const Eigen::VectorXd occ = natural.eigenvalues();
  if ((occ.array() * (1.0 - occ.array())).abs().maxCoeff() <= kIdempotentTol) {
    OracleResult result;
    result.F = slater_energy(target, w);
    result.lower_bound = result.F;
    result.multipliers = Eigen::MatrixXcd::Zero(static_cast<Index>(n), static_cast<Index>(n));
    result.method = "slater";
    result.certified = true;
    if (n <= 16) {
      std::vector<Index> filled;
      for (Index i = 0; i < occ.size(); ++i)
        if (occ[i] > 0.5) filled.push_back(i);
      Eigen::MatrixXcd phi(static_cast<Index>(n), static_cast<Index>(filled.size()));
      for (std::size_t k = 0; k < filled.size(); ++k) phi.col(static_cast<Index>(k)) = natural.eigenvectors().col(filled[k]);
      result.state = slater_state(phi);
      result.residual = max_abs(one_particle_dm(FockBasis::full(n), result.state) - target);
    }
    return result;
  }

  const auto groups = conserved_groups(target, w);
  bool integral = false;
  const std::vector<std::size_t> counts = group_counts(target, groups, integral);
  const bool full_fits = n <= FockBasis::kMaxModes && (std::size_t{1} << n) <= options.max_dim;
  const bool verifiable = n <= FockBasis::kMaxModes && (std::size_t{1} << n) <= options.max_verify_dim;

  std::vector<Sector> sectors;
  if (integral) {
    const std::size_t dim = FockBasis::sector_dimension(n, groups, counts);
    if (dim > options.max_dim) throw std::invalid_argument("sector dimension exceeds the oracle cap");
    sectors.emplace_back(counts, FockBasis::sector(n, groups, counts), w);
  } else {
    if (!full_fits) throw std::invalid_argument("Fock space dimension exceeds the oracle cap");
    for (const auto& k : all_count_combinations(groups)) sectors.emplace_back(k, FockBasis::sector(n, groups, k), w);
  }

  // Dual ascent on the multipliers allowed by the conserved groups. The
  // ground energy is replaced by a free energy over the lowest levels and
  // the temperature is lowered stage by stage; every evaluated point gives
  // a valid zero-temperature bound.
  const auto dual_list = rho_constraints(n, groups);
  std::vector<Eigen::VectorXcd> warm(sectors.size());
  double temperature = 0.1;
  double lb_sector = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_theta;
  auto dual = [&](const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
    const Eigen::MatrixXcd m = weights_to_matrix(dual_list, theta, n);
    const std::vector<Level> lv = low_levels(sectors, m, options.dual_levels, &warm);
    const double shift = (m * target).trace().real();
    const double e0 = lv.front().energy;
    if (e0 - shift > lb_sector) {
      lb_sector = e0 - shift;
      best_theta = theta;
    }
    double z = 0.0;
    Eigen::MatrixXcd rho_t = Eigen::MatrixXcd::Zero(static_cast<Index>(n), static_cast<Index>(n));
    for (const auto& l : lv) {
      const double p = std::exp(-(l.energy - e0) / temperature);
      z += p;
      if (grad && p > 1e-16) rho_t += p * sectors[l.sector].table.rho(l.state);
    }
    if (grad) *grad = -rho_residuals(dual_list, rho_t / z, target);
    return -(e0 - temperature * std::log(z) - shift);
  };
  const Eigen::MatrixXcd m0 = -(target - 0.5 * Eigen::MatrixXcd::Identity(static_cast<Index>(n), static_cast<Index>(n)));
  Eigen::VectorXd theta = matrix_to_weights(dual_list, m0);
  const std::vector<double> stages{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  for (double t : stages) {
    temperature = t;
    LbfgsOptions lo;
    lo.gradient_tolerance = 0.1 * options.tol;
    lo.max_iterations = std::max<std::size_t>(1, options.dual_iterations / stages.size());
    theta = lbfgs_minimize(dual, theta, lo).x;
  }

  OracleResult result;
  Eigen::MatrixXcd m_star = weights_to_matrix(dual_list, best_theta, n);
  const std::vector<Level> levels = low_levels(sectors, m_star, options.dual_levels, nullptr);

  // Lower bound for the whole Fock space: other particle numbers are priced
  // with chemical potentials.
  double lb = lb_sector;
  bool bound_covers_fock = !integral;
  if (integral && verifiable) {
    const auto combos = all_count_combinations(groups);
    std::vector<double> energies;
    for (const auto& k : combos) {
      const FockBasis b = FockBasis::sector(n, groups, k);
      energies.push_back(lowest_eigenpairs(build_operator(b, m_star, w), 1).values[0]);
    }
    const auto cp = chemical_potentials(combos, energies, counts);
    if (cp) {
      lb = lb_sector + std::min(0.0, cp->slack);
      for (std::size_t gi = 0; gi < groups.size(); ++gi)
        for (auto md : groups[gi]) m_star(static_cast<Index>(md), static_cast<Index>(md)) += cp->mu[static_cast<Index>(gi)];
      bound_covers_fock = true;
    }
  }
  result.lower_bound = lb;
  auto within_gap = [&](double f) { return std::abs(f - lb) <= kCertifyGap * std::max(1.0, std::abs(f)); };

  // Best pure state in the near-degenerate ground space of the dual optimum.
  std::vector<Level> window;
  Eigen::VectorXd boltzmann;
  {
    const double e0 = levels.front().energy;
    for (const auto& l : levels)
      if (l.energy - e0 <= std::max(1e-9, 50.0 * stages.back())) window.push_back(l);
    boltzmann.resize(static_cast<Index>(window.size()));
    for (std::size_t i = 0; i < window.size(); ++i)
      boltzmann[static_cast<Index>(i)] = std::exp(-(window[i].energy - e0) / stages.back());
    boltzmann /= boltzmann.sum();
  }
  std::optional<OneBodyTable> full_table;
  if (sectors.size() > 1) full_table.emplace(FockBasis::full(n));
  const SpanState span =
      span_state(sectors, full_table ? &*full_table : nullptr, window, boltzmann, target, options.seed);
  auto span_full = [&] {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(Index{1} << n);
    for (std::size_t s = 0; s < sectors.size(); ++s)
      if (span.parts[s].size()) x += to_full_space(sectors[s].basis(), span.parts[s]);
    return x;
  };

  if (span.residual <= kAcceptResidual && within_gap(span.F)) {
    result.F = span.F;
    result.multipliers = m_star;
    result.residual = span.residual;
    result.method = "dual";
    result.certified = bound_covers_fock;
    if (n <= 16) result.state = span_full();
  } else {
    // Primal search over normalized vectors, first in the target sector when
    // the traces are integral, then over the full Fock space if that is
    // needed and affordable.
    struct Attempt {
      PrimalOutcome outcome;
      std::vector<RhoConstraint> list;
      const Sector* space = nullptr;
    };
    std::optional<Sector> full;
    double last_floor = std::numeric_limits<double>::infinity();
    auto search = [&](const Sector& space, const std::vector<RhoConstraint>& list,
                      const Eigen::VectorXcd& seed_state) -> std::optional<Attempt> {
      const PrimalProblem prob(space, target, list);
      const Eigen::VectorXd lambda0 = matrix_to_weights(list, m_star);
      auto run = [&](std::size_t r) {
        std::mt19937_64 rng(derive_seed(options.seed, r));
        std::normal_distribution<double> normal;
        Eigen::VectorXcd x0(static_cast<Index>(prob.dim()));
        for (Index i = 0; i < x0.size(); ++i) x0[i] = Complex(normal(rng), normal(rng));
        if (r == 0 && seed_state.norm() > 0.5) x0 = seed_state + 1e-3 * x0.normalized();
        return primal_run(prob, x0, lambda0, target, options.tol);
      };
      const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
      const std::size_t batch = std::max<std::size_t>(1, options.jobs);
      std::optional<Attempt> best;
      double floor = std::numeric_limits<double>::infinity();
      for (std::size_t first = 0; first < restarts; first += batch) {
        std::vector<PrimalOutcome> outcomes;
        if (batch > 1) {
          std::vector<std::future<PrimalOutcome>> fut;
          for (std::size_t r = first; r < std::min(restarts, first + batch); ++r)
            fut.push_back(std::async(std::launch::async, run, r));
          for (auto& f : fut) outcomes.push_back(f.get());
        } else {
          outcomes.push_back(run(first));
        }
        for (auto& o : outcomes) {
          floor = std::min(floor, o.residual);
          if (o.residual <= kAcceptResidual && (!best || o.F < best->outcome.F)) best = Attempt{o, list, &space};
        }
        // Further restarts cannot go below the dual bound.
        if (best && within_gap(best->outcome.F)) break;
      }
      if (!best) last_floor = floor;
      return best;
    };
    auto embed = [&](const Sector& space) {
      Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Index>(space.basis().dim()));
      for (std::size_t s = 0; s < sectors.size(); ++s) {
        if (!span.parts[s].size()) continue;
        const FockBasis& b = sectors[s].basis();
        for (std::size_t j = 0; j < b.dim(); ++j)
          if (auto idx = space.basis().index(b.state(j))) x[static_cast<Index>(*idx)] += span.parts[s][static_cast<Index>(j)];
      }
      return x;
    };

    std::optional<Attempt> best;
    if (integral) best = search(sectors[0], dual_list, embed(sectors[0]));
    const bool settled = best && within_gap(best->outcome.F) && bound_covers_fock;
    if (!settled && full_fits) {
      full.emplace(std::vector<std::size_t>{}, FockBasis::full(n), w);
      Eigen::VectorXcd start = embed(*full);
      if (best) start = to_full_space(sectors[0].basis(), best->outcome.x);
      auto f = search(*full, rho_constraints(n), start);
      if (f && (!best || f->outcome.F < best->outcome.F)) best = f;
    }
    if (!best) {
      throw RepresentabilityError("no start reached the density-matrix constraints (residual floor " +
                                  std::to_string(last_floor) + ")");
    }
    const bool sector_only = !best->space->basis().is_full();
    result.F = best->outcome.F;
    result.multipliers = weights_to_matrix(best->list, best->outcome.lambda, n);
    result.residual = best->outcome.residual;
    result.method = sector_only ? "primal-sector" : "primal";
    result.certified = within_gap(result.F) && bound_covers_fock;
    if (n <= 16) result.state = sector_only ? to_full_space(best->space->basis(), best->outcome.x) : best->outcome.x;
  }

  if (!cache_file.empty()) {
    json j{{"F", result.F},
           {"multipliers", io::matrix_to_json(result.multipliers, 0)},
           {"residual", result.residual},
           {"lower_bound", result.lower_bound},
           {"method", result.method},
           {"certified", result.certified}};
    if (result.state.size() && result.state.size() <= 4096) j["state"] = io::matrix_to_json(result.state, 0);
    std::filesystem::create_directories(cache_file.parent_path());
    const auto tmp = cache_file.string() + ".tmp";
    {
      std::ofstream out(tmp);
      out << j.dump(1) << '\n';
    }
    std::filesystem::rename(tmp, cache_file);
  }
  return result;
}

FdMultipliers fd_multipliers(const Eigen::MatrixXcd& target, const InteractionSpec& w, double step,
                             const OracleOptions& options) {
  const std::size_t n = static_cast<std::size_t>(target.rows());
  const auto list = rho_constraints(n);
  auto representable = [](const Eigen::MatrixXcd& r) {
    const Eigen::VectorXd f = occupations(r);
    return f.minCoeff() >= -1e-12 && f.maxCoeff() <= 1.0 + 1e-12;
  };
  const double f0 = exact_rdmf(target, w, options).F;
  Eigen::VectorXd grad(static_cast<Index>(list.size()));
  FdMultipliers out;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const Eigen::MatrixXcd e = constraint_direction(list[k], n);
    const Eigen::MatrixXcd plus = target + step * e;
    const Eigen::MatrixXcd minus = target - step * e;
    const bool ok_plus = representable(plus);
    const bool ok_minus = representable(minus);
    double d = 0.0;
    if (ok_plus && ok_minus) {
      d = (exact_rdmf(plus, w, options).F - exact_rdmf(minus, w, options).F) / (2.0 * step);
    } else if (ok_plus) {
      d = (exact_rdmf(plus, w, options).F - f0) / step;
    } else if (ok_minus) {
      d = (f0 - exact_rdmf(minus, w, options).F) / step;
    } else {
      throw RepresentabilityError("no representable finite-difference neighbour");
    }
    if (!(ok_plus && ok_minus)) {
      out.one_sided.push_back((list[k].imag ? "Im(" : "Re(") + std::to_string(list[k].a) + "," +
                              std::to_string(list[k].b) + ")");
    }
    grad[static_cast<Index>(k)] = d;
  }
  out.derivative = weights_to_matrix(list, grad, n);
  return out;
}

}  // namespace qrdmft
