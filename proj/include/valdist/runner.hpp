#pragma once

// Batch execution of configured tasks: dispatches each task to the library,
// collects one JSON report per task plus a human-readable summary, and maps
// failures and violated bounds onto a process exit status. Pure — writing
// report files is the caller's business.

#include <string>
#include <vector>

#include "valdist/config.hpp"

namespace valdist {

struct TaskReport {
  std::string name;       // "task-01-as-root" and friends; stable across runs
  std::string json;       // serialized report, two-space indent, newline-terminated
  bool failed = false;    // the task threw; json carries the error object
  bool violated = false;  // at least one checked bound came back violated
};

struct RunOutcome {
  std::vector<TaskReport> reports;  // one entry per configured task, in order
  std::string summary;              // one digest line per task plus a footer
  int exit_code = 0;                // 0 clean; 1 on any failure or violation
};

// Fixed config and seed produce byte-identical reports.
RunOutcome run_experiment(const ExperimentConfig& cfg);

}  // namespace valdist
