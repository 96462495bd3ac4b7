// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sofar/error.hpp"
#include "sofar/pipeline.hpp"
#include "sofar/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ray-acoustic shadow-zone and RIS placement toolkit"};
  std::string command;
  std::string scenario_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int threads = 0;

  app.add_option("command", command, "trace | field | shadow | optimize | dynamics | report")->required();
  app.add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Override the scenario seed");
  app.add_option("--threads", threads, "Worker threads (0 = runtime default)")
      ->envname("SOFAR_THREADS")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const auto cmd = sofar::cli::command_from_string(command);
  if (!cmd) {
    std::cerr << "unknown command '" << command << "'\n" << app.help();
    return kUsage;
  }

  sofar::cli::Scenario scenario;
  try {
    scenario = sofar::cli::load_scenario(scenario_path);
  } catch (const sofar::Error& e) {
    std::cerr << scenario_path << ": " << e.what() << '\n';
    return kUsage;
  }
  if (seed_opt->count() > 0) scenario.seed = seed;

  try {
    sofar::cli::run_command(*cmd, scenario, out_dir, sofar::Parallelism{threads});
  } catch (const sofar::Error& e) {
    std::cerr << "sofar " << command << ": " << e.what() << '\n';
    return e.kind() == sofar::ErrorKind::Validation || e.kind() == sofar::ErrorKind::Parse ? kUsage : kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "sofar " << command << ": " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
