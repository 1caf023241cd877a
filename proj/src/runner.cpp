#include "qrdmft/runner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qrdmft/aca.hpp"
#include "qrdmft/encoding.hpp"
#include "qrdmft/experiments.hpp"
#include "qrdmft/grouping.hpp"
#include "qrdmft/measurement.hpp"

namespace qrdmft {

namespace {

using io::json;

template <class T>
void read_into(const json& j, const char* key, T& target) {
  if (j.contains(key)) target = j.at(key).get<T>();
}

void read_oracle(const json& j, OracleOptions& o, const std::string& where) {
  io::require_keys(j, {"tol", "restarts", "max_dim", "max_verify_dim", "dual_iterations", "dual_levels", "cache_dir"},
                   where);
  read_into(j, "tol", o.tol);
  read_into(j, "restarts", o.restarts);
  read_into(j, "max_dim", o.max_dim);
  read_into(j, "max_verify_dim", o.max_verify_dim);
  read_into(j, "dual_iterations", o.dual_iterations);
  read_into(j, "dual_levels", o.dual_levels);
  read_into(j, "cache_dir", o.cache_dir);
}

json oracle_json(const OracleOptions& o) {
  return json{{"tol", o.tol},
              {"restarts", o.restarts},
              {"max_dim", o.max_dim},
              {"max_verify_dim", o.max_verify_dim},
              {"dual_iterations", o.dual_iterations},
              {"dual_levels", o.dual_levels},
              {"cache_dir", o.cache_dir}};
}

void check_experiment(const RunConfig& c, const std::string& name) {
  if (!c.experiment.empty() && c.experiment != name)
    throw std::invalid_argument("config is for '" + c.experiment + "', not '" + name + "'");
}

struct SiteProblem {
  HubbardModel model;
  GroundState gs;
  Eigen::MatrixXcd rho;
  LocalTerm term;
};

SiteProblem site_problem(const RunConfig& c) {
  SiteProblem p;
  p.model = build_hubbard(c.hubbard);
  p.gs = ground_state(c.hubbard);
  p.rho = one_particle_dm(p.gs.basis, p.gs.state);
  p.term = decompose_local(p.model.w, site_supports(c.hubbard.L)).locals.at(c.site);
  return p;
}

}  // namespace

RunConfig::RunConfig() {
  rdmf.scheme = EncodingScheme::Parity;
  rdmf.qubit_of_mode = {1, 2, 0, 3};
  rdmf.environment_unitary = true;
  rdmf.multiplier_init = MultiplierInit::Mueller;
  rdmf.auglag.beta = 3.0;
  rdmf.starts = 6;
  oracle_full.restarts = 2;
  oracle_full.dual_iterations = 40;
}

void RunConfig::propagate() {
  rdmf.seed = seed;
  rdmf.plan.seed = seed;
  oracle.seed = seed;
  oracle_full.seed = seed;
  oracle.jobs = jobs;
  oracle_full.jobs = jobs;
}

void RunConfig::validate() const {
  hubbard.validate();
  if (site >= hubbard.L) throw std::invalid_argument("site lies outside the chain");
  if (jobs == 0) throw std::invalid_argument("jobs must be positive");
  ansatz.validate();
  qrdmft::validate(rdmf.auglag);
  if (rdmf.noise) rdmf.noise->validate();
}

RunConfig parse_run_config(const json& j) {
  io::require_keys(j,
                   {"experiment", "hubbard", "site", "aca_order", "max_order", "ansatz", "scheme", "qubit_of_mode",
                    "environment_unitary", "multiplier_init", "starts", "auglag", "shots", "noise", "level",
                    "heuristic", "strategy", "plan_modes", "oracle", "oracle_full", "seed", "jobs", "out"},
                   "config");
  RunConfig c;
  try {
    read_into(j, "experiment", c.experiment);
    if (!c.experiment.empty()) {
      const auto& names = command_names();
      if (std::find(names.begin(), names.end(), c.experiment) == names.end())
        throw std::invalid_argument("unknown experiment '" + c.experiment + "'");
    }
    if (j.contains("hubbard")) {
      const json& h = j.at("hubbard");
      io::require_keys(h, {"L", "t", "U", "n_up", "n_down"}, "hubbard");
      const std::size_t L = h.value("L", c.hubbard.L);
      c.hubbard = HubbardSpec::half_filled(L, h.value("t", 1.0), h.value("U", c.hubbard.U));
      read_into(h, "n_up", c.hubbard.n_up);
      read_into(h, "n_down", c.hubbard.n_down);
    }
    read_into(j, "site", c.site);
    read_into(j, "aca_order", c.aca_order);
    read_into(j, "max_order", c.max_order);
    if (j.contains("ansatz")) c.ansatz = io::layout_from_json(j.at("ansatz"));
    if (j.contains("scheme")) c.rdmf.scheme = parse_encoding_scheme(j.at("scheme").get<std::string>());
    read_into(j, "qubit_of_mode", c.rdmf.qubit_of_mode);
    read_into(j, "environment_unitary", c.rdmf.environment_unitary);
    if (j.contains("multiplier_init"))
      c.rdmf.multiplier_init = parse_multiplier_init(j.at("multiplier_init").get<std::string>());
    read_into(j, "starts", c.rdmf.starts);
    if (j.contains("auglag")) io::update_auglag(c.rdmf.auglag, j.at("auglag"));
    read_into(j, "shots", c.rdmf.shots);
    if (j.contains("noise") && !j.at("noise").is_null()) c.rdmf.noise = io::noise_from_json(j.at("noise"));
    if (j.contains("level")) c.rdmf.plan.level = parse_commutation_level(j.at("level").get<std::string>());
    if (j.contains("heuristic")) c.rdmf.plan.heuristic = parse_order_heuristic(j.at("heuristic").get<std::string>());
    if (j.contains("strategy")) c.rdmf.plan.strategy = parse_coloring_strategy(j.at("strategy").get<std::string>());
    read_into(j, "plan_modes", c.plan_modes);
    if (j.contains("oracle")) read_oracle(j.at("oracle"), c.oracle, "oracle");
    if (j.contains("oracle_full")) read_oracle(j.at("oracle_full"), c.oracle_full, "oracle_full");
    read_into(j, "seed", c.seed);
    read_into(j, "jobs", c.jobs);
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.propagate();
  c.validate();
  return c;
}

json run_config_to_json(const RunConfig& c) {
  json j{{"hubbard", {{"L", c.hubbard.L}, {"t", c.hubbard.t}, {"U", c.hubbard.U}, {"n_up", c.hubbard.n_up},
                      {"n_down", c.hubbard.n_down}}},
         {"site", c.site},
         {"aca_order", c.aca_order},
         {"max_order", c.max_order},
         {"ansatz", io::layout_to_json(c.ansatz)},
         {"scheme", std::string(to_string(c.rdmf.scheme))},
         {"qubit_of_mode", c.rdmf.qubit_of_mode},
         {"environment_unitary", c.rdmf.environment_unitary},
         {"multiplier_init", std::string(to_string(c.rdmf.multiplier_init))},
         {"starts", c.rdmf.starts},
         {"auglag", io::auglag_to_json(c.rdmf.auglag)},
         {"shots", c.rdmf.shots},
         {"noise", c.rdmf.noise ? io::noise_to_json(*c.rdmf.noise) : json(nullptr)},
         {"level", std::string(to_string(c.rdmf.plan.level))},
         {"heuristic", std::string(to_string(c.rdmf.plan.heuristic))},
         {"strategy", std::string(to_string(c.rdmf.plan.strategy))},
         {"plan_modes", c.plan_modes},
         {"oracle", oracle_json(c.oracle)},
         {"oracle_full", oracle_json(c.oracle_full)},
         {"seed", c.seed},
         {"jobs", c.jobs},
         {"out", c.out.string()}};
  if (!c.experiment.empty()) j["experiment"] = c.experiment;
  return j;
}

int cmd_hubbard_gs(const RunConfig& c) {
  check_experiment(c, "hubbard-gs");
  const HubbardModel model = build_hubbard(c.hubbard);
  const GroundState gs = ground_state(c.hubbard);
  const Eigen::MatrixXcd rho = one_particle_dm(gs.basis, gs.state);
  const double one_body = (rho * model.h).trace().real();
  json j{{"L", c.hubbard.L},
         {"t", c.hubbard.t},
         {"U", c.hubbard.U},
         {"n_up", c.hubbard.n_up},
         {"n_down", c.hubbard.n_down},
         {"E0", io::round_significant(gs.energy)},
         {"one_body", io::round_significant(one_body)},
         {"interaction", io::round_significant(gs.energy - one_body)},
         {"occupations", io::vector_to_json(occupations(rho))},
         {"rho", io::matrix_to_json(rho)}};
  io::write_json(c.out / "result.json", j);
  return kExitOk;
}

int cmd_aca_scan(const RunConfig& c) {
  check_experiment(c, "aca-scan");
  const SiteProblem p = site_problem(c);
  AcaScanOptions o;
  o.max_order = c.max_order;
  o.full = c.oracle_full;
  o.reduced = c.oracle;
  const AcaScan scan = aca_scan(p.rho, p.term.w, p.term.support, o);
  std::ostringstream csv;
  csv << "n,eps_aca,eps_naive,kept,F_aca,F_naive\n";
  json rows = json::array();
  for (const auto& r : scan.rows) {
    csv << r.order << ',' << io::format_number(r.error_aca) << ',' << io::format_number(r.error_naive) << ','
        << r.kept << ',' << io::format_number(r.F_aca) << ',' << io::format_number(r.F_naive) << '\n';
  }
  io::write_text(c.out / "scan.csv", csv.str());
  const double slope = log_error_slope(scan);
  io::write_json(c.out / "result.json", json{{"F_full", io::round_significant(scan.F_full)},
                                             {"method_full", scan.method_full},
                                             {"log_slope", std::isfinite(slope) ? json(io::round_significant(slope))
                                                                                : json(nullptr)}});
  return kExitOk;
}

int cmd_measure_plan(const RunConfig& c) {
  check_experiment(c, "measure-plan");
  const std::size_t n = c.plan_modes ? c.plan_modes : 2 * c.hubbard.L;
  const auto words = rho1_pauli_words(c.rdmf.scheme, n);
  json stats = json::object();
  json plan_json;
  for (auto level : {CommutationLevel::Disjoint, CommutationLevel::Qwc, CommutationLevel::Gc}) {
    PlanOptions o = c.rdmf.plan;
    o.level = level;
    const MeasurementPlan plan = plan_measurements(words, o);
    stats[std::string(to_string(level))] = {{"groups", plan.groups.size()},
                                            {"max_gate_count", plan.max_gate_count()},
                                            {"total_gate_count", plan.total_gate_count()}};
    if (level == c.rdmf.plan.level) plan_json = io::plan_to_json(plan);
  }
  io::write_json(c.out / "plan.json", json{{"n_modes", n},
                                           {"scheme", std::string(to_string(c.rdmf.scheme))},
                                           {"ungrouped", words.size()},
                                           {"statistics", stats},
                                           {"plan", plan_json}});
  return kExitOk;
}

int cmd_rdmf(const RunConfig& c) {
  check_experiment(c, "rdmf");
  const SiteProblem p = site_problem(c);
  const AcaResult a = aca_reduce(p.rho, p.term.support, c.aca_order);
  const InteractionSpec w = localize_interaction(p.term.w, p.term.support, a.kept);
  RdmfConfig rc = c.rdmf;
  if (rc.interacting.empty())
    for (std::size_t k = 0; k < p.term.support.size(); ++k) rc.interacting.push_back(k);
  const RdmfResult r = evaluate_rdmf(a.rho_aca, w, c.ansatz, rc);
  std::ostringstream trace;
  for (const auto& t : r.trace) trace << io::trace_record_to_json(t).dump() << '\n';
  io::write_text(c.out / "trace.jsonl", trace.str());
  json j = io::rdmf_result_to_json(r);
  j["target"] = io::matrix_to_json(a.rho_aca);
  io::write_json(c.out / "result.json", j);
  if (r.infeasible) return kExitRepresentability;
  return r.converged ? kExitOk : kExitNumerical;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"hubbard-gs", "aca-scan", "measure-plan", "rdmf"};
  return names;
}

int run_command(const std::string& name, const RunConfig& c) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw std::invalid_argument("unknown command '" + name + "'");
  check_experiment(c, name);
  io::write_json(c.out / "config.json", run_config_to_json(c));
  if (name == "hubbard-gs") return cmd_hubbard_gs(c);
  if (name == "aca-scan") return cmd_aca_scan(c);
  if (name == "measure-plan") return cmd_measure_plan(c);
  if (name == "rdmf") return cmd_rdmf(c);
  throw std::invalid_argument("unknown command '" + name + "'");
}

}  // namespace qrdmft
