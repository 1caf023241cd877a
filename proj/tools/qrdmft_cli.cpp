#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qrdmft/errors.hpp"
#include "qrdmft/io.hpp"
#include "qrdmft/runner.hpp"

namespace {

using qrdmft::io::json;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<std::uint64_t> shots;
  std::optional<std::string> level;
  std::optional<std::string> scheme;
  std::optional<std::string> noise;
  std::optional<std::string> out;
};

json load(const std::string& command, const Flags& f) {
  json j = f.config.empty() ? json::object() : qrdmft::io::read_json(f.config);
  if (!j.is_object()) throw std::invalid_argument("config: expected an object");
  if (f.seed) j["seed"] = *f.seed;
  if (f.jobs) j["jobs"] = *f.jobs;
  if (f.shots) j["shots"] = *f.shots;
  if (f.level) j["level"] = *f.level;
  if (f.scheme) j["scheme"] = *f.scheme;
  if (f.noise) j["noise"] = *f.noise == "device" ? json("device") : qrdmft::io::read_json(*f.noise);
  if (f.out) j["out"] = *f.out;
  if (!j.contains("experiment")) j["experiment"] = command;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid reduced density-matrix functional experiments"};
  app.require_subcommand(1);
  Flags f;
  auto add_flags = [&f](CLI::App* sub) {
    sub->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", f.seed, "Base seed");
    sub->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--shots", f.shots, "Shots per measurement group (0 = exact expectations)");
    sub->add_option("--level", f.level, "Commutation level")->check(CLI::IsMember({"disjoint", "qwc", "gc"}));
    sub->add_option("--scheme", f.scheme, "Fermion encoding")->check(CLI::IsMember({"jw", "parity", "bk"}));
    sub->add_option("--noise", f.noise, "NoiseSpec JSON file, or 'device'");
    sub->add_option("--out", f.out, "Output directory");
  };
  const std::map<std::string, std::string> about{
      {"hubbard-gs", "Exact ground state, energy split and 1-RDM of the Hubbard chain"},
      {"aca-scan", "Functional error of the ACA and naive truncations versus order"},
      {"measure-plan", "Grouped measurement circuits for the 1-RDM Pauli words"},
      {"rdmf", "Hybrid evaluation of the reduced interaction functional"}};
  for (const auto& name : qrdmft::command_names()) add_flags(app.add_subcommand(name, about.at(name)));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qrdmft::kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  qrdmft::RunConfig config;
  try {
    config = qrdmft::parse_run_config(load(command, f));
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return qrdmft::kExitConfig;
  }
  try {
    const int code = qrdmft::run_command(command, config);
    if (code == qrdmft::kExitRepresentability) std::cerr << "representability failure: constraint residual stalled\n";
    if (code == qrdmft::kExitNumerical) std::cerr << "numerical failure: no convergence\n";
    return code;
  } catch (const qrdmft::RepresentabilityError& e) {
    std::cerr << "representability failure: " << e.what() << '\n';
    return qrdmft::kExitRepresentability;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return qrdmft::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return qrdmft::kExitNumerical;
  }
}
