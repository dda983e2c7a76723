// SPDX-License-Identifier: Apache-2.0
//
// Command orchestration: executes a validated RunConfig and writes the
// deterministic output set (manifest plus per-command artifacts) into the
// output directory.
#pragma once

#include "qpmax/config.hpp"

namespace qpmax {

struct RunResult {
  int exit_code = 0;     // 0 ok, 1 numerical failure, 2 usage/config error
  std::string message;   // one-line summary for the CLI
};

RunResult run(const RunConfig& cfg);

} // namespace qpmax
