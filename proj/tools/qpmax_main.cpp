// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: solve / check-material / scan-k / audit /
// oracle-compare, each driven by a JSON configuration file and writing a
// deterministic artifact set into the output directory.
#include "qpmax/run.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"qpmax - quasi-periodic magnetic-field scattering toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON configuration file")->required();
    cmd->add_option("--out", out_dir, "output directory (default: out)");
    cmd->add_option("--seed", seed, "override the configuration seed")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--threads", threads, "worker threads for scans (default from config)");
  };

  add_common(app.add_subcommand("solve", "assemble and solve the scattering problem"));
  add_common(app.add_subcommand("check-material", "evaluate the non-trapping conditions"));
  add_common(app.add_subcommand("scan-k", "sweep the wave number and record sigma_min"));
  add_common(app.add_subcommand("audit", "run the integral-identity audit suite"));
  add_common(app.add_subcommand("oracle-compare",
                                "compare the solver against the layered reference solver"));

  CLI11_PARSE(app, argc, argv);

  const std::string sub = app.get_subcommands().front()->get_name();
  qpmax::RunConfig cfg;
  try {
    cfg = qpmax::load_config(config_path, qpmax::parse_command(sub));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  cfg.out_dir = out_dir;
  if (seed_set) cfg.seed = seed;
  if (threads > 0) cfg.threads = threads;

  const qpmax::RunResult result = qpmax::run(cfg);
  (result.exit_code == 0 ? std::cout : std::cerr) << result.message << "\n";
  return result.exit_code;
}
