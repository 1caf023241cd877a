#include "qrdmft/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qrdmft::io {

namespace {

using Index = Eigen::Index;

template <class T>
T get_field(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

std::string_view rotation_name(RotationStep s) { return s == RotationStep::RZ ? "RZ" : "SX"; }

RotationStep parse_rotation(const std::string& text) {
  if (text == "RZ" || text == "rz") return RotationStep::RZ;
  if (text == "SX" || text == "sx" || text == "SqrtX") return RotationStep::SqrtX;
  throw std::invalid_argument("unknown rotation step '" + text + "'");
}

std::vector<double> probabilities(const json& j) {
  if (j.is_number()) return {j.get<double>()};
  return j.get<std::vector<double>>();
}

}  // namespace

double round_significant(double x, int digits) {
  if (digits <= 0 || x == 0.0 || !std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

std::string format_number(double x, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

json matrix_to_json(const Eigen::MatrixXcd& m, int digits) {
  json re = json::array(), im = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json r = json::array(), c = json::array();
    for (Index k = 0; k < m.cols(); ++k) {
      r.push_back(round_significant(m(i, k).real(), digits));
      c.push_back(round_significant(m(i, k).imag(), digits));
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  return json{{"re", re}, {"im", im}};
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != im.size()) throw std::invalid_argument("matrix re and im differ in size");
  const auto rows = static_cast<Index>(re.size());
  const auto cols = rows ? static_cast<Index>(re[0].size()) : 0;
  Eigen::MatrixXcd m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (static_cast<Index>(re[i].size()) != cols || static_cast<Index>(im[i].size()) != cols)
      throw std::invalid_argument("matrix rows differ in length");
    for (Index k = 0; k < cols; ++k) m(i, k) = Complex(re[i][k].get<double>(), im[i][k].get<double>());
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v, int digits) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(round_significant(v[i], digits));
  return a;
}

Eigen::VectorXd vector_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

json circuit_to_json(const Circuit& c) {
  json gates = json::array();
  for (const Gate& g : c.gates()) {
    json e{{"kind", std::string(to_string(g.kind))}, {"qubits", g.qubits()}};
    if (is_parametrized(g.kind)) e["theta"] = round_significant(g.theta);
    gates.push_back(std::move(e));
  }
  return json{{"n_qubits", c.n_qubits()}, {"gates", gates}};
}

Circuit circuit_from_json(const json& j) {
  require_keys(j, {"n_qubits", "gates"}, "circuit");
  Circuit c(j.at("n_qubits").get<std::size_t>());
  for (const auto& e : j.at("gates")) {
    require_keys(e, {"kind", "qubits", "theta"}, "gate");
    Gate g;
    g.kind = parse_gate_kind(e.at("kind").get<std::string>());
    const auto q = e.at("qubits").get<std::vector<std::size_t>>();
    if (q.size() != arity(g.kind))
      throw std::invalid_argument("gate " + std::string(to_string(g.kind)) + " needs " + std::to_string(arity(g.kind)) +
                                  " qubits");
    g.q0 = q[0];
    if (q.size() > 1) g.q1 = q[1];
    g.theta = get_field(e, "theta", 0.0);
    c.add(g);
  }
  return c;
}

json counts_to_json(const Counts& counts) {
  json j = json::object();
  for (const auto& [bits, n] : counts) j[bits] = n;
  return j;
}

Counts counts_from_json(const json& j) {
  Counts c;
  for (const auto& [bits, n] : j.items()) c[bits] = n.get<std::uint64_t>();
  return c;
}

json plan_to_json(const MeasurementPlan& plan) {
  json words = json::array();
  for (const auto& w : plan.words) words.push_back(w.label());
  json groups = json::array();
  for (const auto& g : plan.groups) {
    json readout = json::array();
    for (std::size_t k = 0; k < g.members.size(); ++k)
      readout.push_back({{"word", g.members[k]}, {"qubits", g.readout[k].qubits}, {"sign", g.readout[k].sign}});
    groups.push_back({{"circuit", circuit_to_json(g.circuit)}, {"readout", readout}});
  }
  return json{{"n_qubits", plan.n_qubits},
              {"level", std::string(to_string(plan.level))},
              {"words", words},
              {"groups", groups},
              {"max_gate_count", plan.max_gate_count()},
              {"total_gate_count", plan.total_gate_count()}};
}

json trace_record_to_json(const TraceRecord& r) {
  return json{{"outer", r.outer},
              {"inner", r.inner},
              {"L", round_significant(r.lagrangian)},
              {"W", round_significant(r.objective)},
              {"sum_c2", round_significant(r.sum_c2)},
              {"evaluations", r.evaluations}};
}

json outer_record_to_json(const OuterRecord& r) {
  return json{{"outer", r.outer},
              {"W", round_significant(r.objective)},
              {"sum_c2", round_significant(r.sum_c2)},
              {"max_mu", round_significant(r.max_mu)}};
}

json rdmf_result_to_json(const RdmfResult& r) {
  json outer = json::array();
  for (const auto& o : r.outer) outer.push_back(outer_record_to_json(o));
  return json{{"F", round_significant(r.F)},
              {"sum_c2", round_significant(r.constraint_violation)},
              {"converged", r.converged},
              {"infeasible", r.infeasible},
              {"outer_iterations", r.outer_iterations},
              {"evaluations", r.evaluations},
              {"start", r.start},
              {"u", vector_to_json(r.u)},
              {"multipliers", matrix_to_json(r.multipliers)},
              {"environment", matrix_to_json(r.environment)},
              {"rho", matrix_to_json(r.rho)},
              {"outer", outer}};
}

NoiseSpec noise_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "device") throw std::invalid_argument("unknown noise preset '" + j.get<std::string>() + "'");
    return device_noise();
  }
  require_keys(j, {"depolarizing_1q", "depolarizing_2q", "readout_p10", "readout_p01", "seed"}, "noise");
  NoiseSpec n;
  n.depolarizing_1q = get_field(j, "depolarizing_1q", 0.0);
  n.depolarizing_2q = get_field(j, "depolarizing_2q", 0.0);
  if (j.contains("readout_p10")) n.readout_p10 = probabilities(j.at("readout_p10"));
  if (j.contains("readout_p01")) n.readout_p01 = probabilities(j.at("readout_p01"));
  n.seed = get_field<std::uint64_t>(j, "seed", 0);
  n.validate();
  return n;
}

json noise_to_json(const NoiseSpec& n) {
  return json{{"depolarizing_1q", n.depolarizing_1q},
              {"depolarizing_2q", n.depolarizing_2q},
              {"readout_p10", n.readout_p10},
              {"readout_p01", n.readout_p01},
              {"seed", n.seed}};
}

AnsatzLayout layout_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "four_qubit") throw std::invalid_argument("unknown ansatz preset '" + j.get<std::string>() + "'");
    return four_qubit_layout();
  }
  require_keys(j, {"n_qubits", "depth", "euler", "entangler", "linear"}, "ansatz");
  AnsatzLayout l;
  l.n_qubits = j.at("n_qubits").get<std::size_t>();
  l.depth = get_field<std::size_t>(j, "depth", 1);
  if (get_field(j, "linear", false)) {
    if (j.contains("entangler")) throw std::invalid_argument("ansatz: give either linear or entangler");
    l = linear_layout(l.n_qubits, l.depth);
  }
  if (j.contains("euler")) {
    l.euler.clear();
    for (const auto& s : j.at("euler")) l.euler.push_back(parse_rotation(s.get<std::string>()));
  }
  if (j.contains("entangler")) {
    for (const auto& e : j.at("entangler")) {
      require_keys(e, {"kind", "control", "target"}, "entangler gate");
      l.entangler.push_back(
          {parse_gate_kind(e.at("kind").get<std::string>()), e.at("control").get<std::size_t>(), e.at("target").get<std::size_t>()});
    }
  }
  l.validate();
  return l;
}

json layout_to_json(const AnsatzLayout& l) {
  json euler = json::array();
  for (auto s : l.euler) euler.push_back(std::string(rotation_name(s)));
  json ent = json::array();
  for (const auto& e : l.entangler)
    ent.push_back({{"kind", std::string(to_string(e.kind))}, {"control", e.control}, {"target", e.target}});
  return json{{"n_qubits", l.n_qubits}, {"depth", l.depth}, {"euler", euler}, {"entangler", ent}};
}

void update_auglag(AugLagConfig& c, const json& j) {
  require_keys(j,
               {"mu0", "beta", "max_outer", "inner_tol", "inner_max_iter", "inner", "simplex_step", "constraint_tol",
                "objective_tol", "conditional_penalty", "stall_fraction", "residual_repeats", "spsa"},
               "auglag");
  c.mu0 = get_field(j, "mu0", c.mu0);
  c.beta = get_field(j, "beta", c.beta);
  c.max_outer = get_field(j, "max_outer", c.max_outer);
  c.inner_tol = get_field(j, "inner_tol", c.inner_tol);
  c.inner_max_iter = get_field(j, "inner_max_iter", c.inner_max_iter);
  if (j.contains("inner")) c.inner = parse_inner_solver(j.at("inner").get<std::string>());
  c.simplex_step = get_field(j, "simplex_step", c.simplex_step);
  c.constraint_tol = get_field(j, "constraint_tol", c.constraint_tol);
  c.objective_tol = get_field(j, "objective_tol", c.objective_tol);
  c.conditional_penalty = get_field(j, "conditional_penalty", c.conditional_penalty);
  c.stall_fraction = get_field(j, "stall_fraction", c.stall_fraction);
  c.residual_repeats = get_field(j, "residual_repeats", c.residual_repeats);
  if (j.contains("spsa")) {
    const json& s = j.at("spsa");
    require_keys(s, {"iterations", "a", "c", "A", "alpha", "gamma"}, "auglag.spsa");
    c.spsa.iterations = get_field(s, "iterations", c.spsa.iterations);
    c.spsa.a = get_field(s, "a", c.spsa.a);
    c.spsa.c = get_field(s, "c", c.spsa.c);
    c.spsa.A = get_field(s, "A", c.spsa.A);
    c.spsa.alpha = get_field(s, "alpha", c.spsa.alpha);
    c.spsa.gamma = get_field(s, "gamma", c.spsa.gamma);
  }
  validate(c);
}

json auglag_to_json(const AugLagConfig& c) {
  return json{{"mu0", c.mu0},
              {"beta", c.beta},
              {"max_outer", c.max_outer},
              {"inner_tol", c.inner_tol},
              {"inner_max_iter", c.inner_max_iter},
              {"inner", std::string(to_string(c.inner))},
              {"simplex_step", c.simplex_step},
              {"constraint_tol", c.constraint_tol},
              {"objective_tol", c.objective_tol},
              {"conditional_penalty", c.conditional_penalty},
              {"stall_fraction", c.stall_fraction},
              {"residual_repeats", c.residual_repeats},
              {"spsa",
               {{"iterations", c.spsa.iterations},
                {"a", c.spsa.a},
                {"c", c.spsa.c},
                {"A", c.spsa.A},
                {"alpha", c.spsa.alpha},
                {"gamma", c.spsa.gamma}}}};
}

void require_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw std::invalid_argument(where + ": unknown key '" + key + "'");
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace qrdmft::io
