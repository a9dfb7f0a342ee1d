#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace epf::entailment::detail {

struct ProcessResult {
  std::string output;  // stdout and stderr interleaved
  int exit_code = -1;  // -1 when killed or terminated by a signal
  bool timed_out = false;
};

// Runs argv[0] (looked up on PATH) in its own process group and kills the
// group once the deadline passes.
ProcessResult run_process(const std::vector<std::string>& argv, std::chrono::milliseconds timeout);

}  // namespace epf::entailment::detail
