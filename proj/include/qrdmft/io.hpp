#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "qrdmft/ansatz.hpp"
#include "qrdmft/auglag.hpp"
#include "qrdmft/circuit.hpp"
#include "qrdmft/measurement.hpp"
#include "qrdmft/rdmf.hpp"
#include "qrdmft/sampling.hpp"

namespace qrdmft::io {

using json = nlohmann::json;

/// Significant digits of exported numbers.
inline constexpr int kDigits = 15;

/// x rounded to `digits` significant digits; digits <= 0 returns x.
double round_significant(double x, int digits = kDigits);
/// printf("%.15g") style text.
std::string format_number(double x, int digits = kDigits);

/// {"re": rows, "im": rows}.
json matrix_to_json(const Eigen::MatrixXcd& m, int digits = kDigits);
Eigen::MatrixXcd matrix_from_json(const json& j);
json vector_to_json(const Eigen::VectorXd& v, int digits = kDigits);
Eigen::VectorXd vector_from_json(const json& j);

/// {"n_qubits": n, "gates": [{"kind": "CNOT", "qubits": [0, 3]}, {"kind": "RZ", "qubits": [1], "theta": 0.5}]}.
json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const json& j);

json counts_to_json(const Counts& counts);
Counts counts_from_json(const json& j);

json plan_to_json(const MeasurementPlan& plan);

/// {"outer", "inner", "L", "W", "sum_c2", "evaluations"}.
json trace_record_to_json(const TraceRecord& r);
json outer_record_to_json(const OuterRecord& r);
json rdmf_result_to_json(const RdmfResult& r);

/// Keys depolarizing_1q, depolarizing_2q, readout_p10, readout_p01, seed;
/// "device" as a string selects device_noise(). Unknown keys throw.
NoiseSpec noise_from_json(const json& j);
json noise_to_json(const NoiseSpec& n);

/// Keys n_qubits, depth, euler, entangler ([{"kind","control","target"}]).
/// The string "four_qubit" selects four_qubit_layout().
AnsatzLayout layout_from_json(const json& j);
json layout_to_json(const AnsatzLayout& l);

/// Overrides the fields of `config` present in `j`; unknown keys throw.
void update_auglag(AugLagConfig& config, const json& j);
json auglag_to_json(const AugLagConfig& c);

/// Throws std::invalid_argument naming the first key of `j` outside `allowed`.
void require_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where);

json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
/// Pretty-printed with two-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const json& j);

}  // namespace qrdmft::io
