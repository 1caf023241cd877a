#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qrdmft/ansatz.hpp"
#include "qrdmft/exact_oracle.hpp"
#include "qrdmft/hubbard.hpp"
#include "qrdmft/io.hpp"
#include "qrdmft/rdmf.hpp"

namespace qrdmft {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitRepresentability = 4;

/// Everything a command needs. Defaults describe the noiseless single-site
/// hybrid problem of an eight-site chain at U/t = 1.
struct RunConfig {
  /// Empty or the command name; a config written for one command is
  /// rejected by the others.
  std::string experiment;
  HubbardSpec hubbard = HubbardSpec::half_filled(8, 1.0, 1.0);
  /// Site whose on-site term is reduced (aca-scan, rdmf).
  std::size_t site = 0;
  std::size_t aca_order = 1;
  std::size_t max_order = 3;  // aca-scan
  AnsatzLayout ansatz = four_qubit_layout();
  RdmfConfig rdmf;
  /// Modes whose one-particle words are planned (measure-plan); 0 means 2L.
  std::size_t plan_modes = 0;
  OracleOptions oracle;
  /// Oracle settings for the untruncated density matrix in aca-scan.
  OracleOptions oracle_full;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::filesystem::path out = ".";

  RunConfig();
  /// Copies seed and jobs into the nested settings.
  void propagate();
  void validate() const;
};

/// Reads the key-value tree; unknown keys and malformed values throw
/// std::invalid_argument.
RunConfig parse_run_config(const io::json& j);
io::json run_config_to_json(const RunConfig& c);

/// Ground-state energy, rho(1) and occupations; writes result.json.
int cmd_hubbard_gs(const RunConfig& c);
/// Writes scan.csv (n, eps_aca, eps_naive, kept, F_aca, F_naive) and result.json.
int cmd_aca_scan(const RunConfig& c);
/// Writes plan.json: the plan at the configured level plus group counts and
/// gate counts for every level.
int cmd_measure_plan(const RunConfig& c);
/// Writes result.json and trace.jsonl. Returns kExitRepresentability when
/// the run is flagged infeasible and kExitNumerical when it did not converge.
int cmd_rdmf(const RunConfig& c);

/// Writes the resolved configuration to config.json, then runs the command.
int run_command(const std::string& name, const RunConfig& c);
const std::vector<std::string>& command_names();

}  // namespace qrdmft
